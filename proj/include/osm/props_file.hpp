#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "osm/error.hpp"
#include "osm/formula.hpp"

namespace osm {

enum class EntryKind { Config, Ctl };

struct PropertyEntry {
    std::string name;
    EntryKind kind = EntryKind::Config;
    std::optional<std::string> target; // `Type.method`, ctl entries only
    std::string text;
    Formula formula;
    int line = 0;
};

struct PropertySpec {
    std::map<std::string, std::string> aliases;
    std::vector<PropertyEntry> entries;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline bool plain_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (const char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    return true;
}

} // namespace detail

/// Parses the line-oriented property file:
///   alias <Aspect> = <ConcernId>
///   config <name>: <propositional formula>
///   ctl <name> @ <Type.method>: <CTL formula>
/// `#` starts a comment line.
inline PropertySpec parse_property_spec(std::string_view text) {
    PropertySpec spec;
    std::set<std::string> names;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = detail::trim(raw);
        if (line.empty() || line[0] == '#') continue;

        const auto space = line.find_first_of(" \t");
        const auto keyword = line.substr(0, space);
        const std::string rest = space == std::string::npos ? "" : detail::trim(line.substr(space));

        if (keyword == "alias") {
            const auto eq = rest.find('=');
            if (eq == std::string::npos) throw PropertyFileError(line_no, "expected 'alias <Aspect> = <Id>'");
            const auto aspect = detail::trim(rest.substr(0, eq));
            const auto id = detail::trim(rest.substr(eq + 1));
            if (!detail::plain_identifier(aspect) || !detail::plain_identifier(id))
                throw PropertyFileError(line_no, "alias names must be identifiers");
            spec.aliases[aspect] = id;
            continue;
        }
        if (keyword != "config" && keyword != "ctl")
            throw PropertyFileError(line_no, "unknown directive '" + keyword + "'");

        const auto colon = rest.find(':');
        if (colon == std::string::npos) throw PropertyFileError(line_no, "missing ':' before formula");
        PropertyEntry e;
        e.line = line_no;
        e.kind = keyword == "ctl" ? EntryKind::Ctl : EntryKind::Config;
        auto head = detail::trim(rest.substr(0, colon));
        e.text = detail::trim(rest.substr(colon + 1));
        if (e.kind == EntryKind::Ctl) {
            const auto at = head.find('@');
            if (at == std::string::npos) throw PropertyFileError(line_no, "ctl entry needs '@ <Type.method>'");
            e.target = detail::trim(head.substr(at + 1));
            head = detail::trim(head.substr(0, at));
            if (e.target->find('.') == std::string::npos)
                throw PropertyFileError(line_no, "target must be qualified as Type.method");
        }
        if (!detail::plain_identifier(head)) throw PropertyFileError(line_no, "invalid entry name '" + head + "'");
        e.name = head;
        if (!names.insert(e.name).second) throw PropertyFileError(line_no, "duplicate entry name '" + e.name + "'");
        try {
            e.formula = e.kind == EntryKind::Ctl ? parse_ctl(e.text) : parse_prop(e.text);
        } catch (const FormulaParseError& err) {
            throw PropertyFileError(line_no, err.what());
        }
        spec.entries.push_back(std::move(e));
    }
    return spec;
}

} // namespace osm
