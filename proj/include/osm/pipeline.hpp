#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "osm/cfg.hpp"
#include "osm/ctl.hpp"
#include "osm/error.hpp"
#include "osm/kripke.hpp"
#include "osm/parser.hpp"
#include "osm/propositional.hpp"
#include "osm/props_file.hpp"
#include "osm/trace.hpp"
#include "osm/weaver.hpp"

namespace osm {

namespace fs = std::filesystem;

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError(p.string() + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Expands directories to the `.osm` files beneath them, sorted by path.
inline std::vector<fs::path> expand_sources(const std::vector<fs::path>& inputs) {
    std::vector<fs::path> out;
    for (const auto& p : inputs) {
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::recursive_directory_iterator(p))
                if (e.is_regular_file() && e.path().extension() == ".osm") found.push_back(e.path());
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else if (fs::exists(p)) {
            out.push_back(p);
        } else {
            throw InputError(p.string() + ": no such file or directory");
        }
    }
    return out;
}

/// Parses every source and merges them into one validated Program.
inline Program load_program(const std::vector<fs::path>& inputs) {
    Program merged;
    for (const auto& file : expand_sources(inputs)) {
        Program part;
        try {
            part = parse(read_file(file));
        } catch (const InputError&) {
            throw;
        } catch (const Error& e) {
            throw InputError(file.string() + ":" + e.what());
        }
        for (auto& d : part.declarations) merged.declarations.push_back(std::move(d));
        if (part.precedence) {
            if (merged.precedence) throw InputError(file.string() + ": second precedence directive");
            merged.precedence = std::move(part.precedence);
        }
    }
    try {
        validate(merged);
    } catch (const Error& e) {
        throw InputError(std::string("merged sources: ") + e.what());
    }
    return merged;
}

// ---------------------------------------------------------------------------
// report

struct ModelStats {
    std::size_t states = 0;
    std::size_t transitions = 0;
};

struct ReportEntry {
    std::string name;
    EntryKind kind = EntryKind::Config;
    std::optional<std::string> target;
    SatResult result;
    /// Per-state summary for path and lasso evidence (ctl entries only).
    std::map<std::size_t, std::string> state_names;
};

struct Report {
    std::vector<ReportEntry> entries;
    std::map<std::string, ModelStats> models;
    std::size_t bindings = 0;
    std::vector<std::string> warnings;

    bool pass() const {
        return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.result.holds; });
    }
};

/// Most informative label of a state: its action, else its marker.
inline std::string state_summary(const KripkeStructure& m, std::size_t s) {
    const auto& labels = m.labels(s);
    for (const auto& l : labels)
        if (l.rfind("action:", 0) == 0) return l;
    for (const char* marker : {"entry", "error", "exit"})
        if (labels.count(marker)) return marker;
    return labels.empty() ? std::string() : *labels.begin();
}

inline nlohmann::ordered_json evidence_json(const ReportEntry& e) {
    using J = nlohmann::ordered_json;
    auto steps = [&](const std::vector<std::size_t>& states) {
        J out = J::array();
        for (const auto s : states) {
            const auto it = e.state_names.find(s);
            out.push_back(it == e.state_names.end() ? std::string() : it->second);
        }
        return out;
    };
    return std::visit(
        overloaded{
            [](const std::monostate&) { return J(nullptr); },
            [](const Assignment& a) {
                J j;
                j["type"] = "assignment";
                J v = J::object();
                for (const auto& [k, b] : a.valuation.values) v[k] = b;
                j["valuation"] = std::move(v);
                return j;
            },
            [&](const FinitePath& p) {
                J j;
                j["type"] = "path";
                j["states"] = p.states;
                j["steps"] = steps(p.states);
                return j;
            },
            [&](const Lasso& l) {
                J j;
                j["type"] = "lasso";
                j["prefix"] = l.prefix;
                j["cycle"] = l.cycle;
                j["prefix_steps"] = steps(l.prefix);
                j["cycle_steps"] = steps(l.cycle);
                return j;
            },
        },
        e.result.evidence);
}

inline nlohmann::ordered_json to_json(const Report& r) {
    using J = nlohmann::ordered_json;
    J j;
    j["version"] = 1;
    J entries = J::array();
    for (const auto& e : r.entries) {
        J o;
        o["name"] = e.name;
        o["kind"] = e.kind == EntryKind::Config ? "config" : "ctl";
        o["target"] = e.target ? J(*e.target) : J(nullptr);
        o["holds"] = e.result.holds;
        o["evidence"] = evidence_json(e);
        entries.push_back(std::move(o));
    }
    j["entries"] = std::move(entries);
    J stats;
    stats["bindings"] = r.bindings;
    J models = J::object();
    for (const auto& [name, s] : r.models) models[name] = {{"states", s.states}, {"transitions", s.transitions}};
    stats["models"] = std::move(models);
    j["stats"] = std::move(stats);
    j["warnings"] = r.warnings;
    j["status"] = r.pass() ? "pass" : "fail";
    return j;
}

// ---------------------------------------------------------------------------
// pipeline

struct PipelineOptions {
    bool strict_atoms = false;
    int inline_depth = 16;
    /// Merged over the property file's aliases.
    std::map<std::string, std::string> aliases;
};

/// Model of one method: build its woven CFG and translate it.
inline KripkeStructure model_of(const WovenProgram& woven, const std::string& method, int inline_depth) {
    return from_cfg(build_cfg(woven, method, inline_depth));
}

/// parse, weave, build a model per ctl target, then evaluate every entry.
/// Violations are reported, not thrown; malformed inputs throw.
inline Report run_pipeline(const Program& program, const PropertySpec& spec,
                           const PipelineOptions& opts = {}) {
    Report report;
    const WovenProgram woven = weave(program);
    report.bindings = woven.bindings().size();

    // A property-file alias naming nothing in the sources means that concern
    // was removed: it is absent, not an error. Command-line aliases are strict.
    std::map<std::string, std::string> aliases;
    std::vector<std::string> absent;
    for (const auto& [name, id] : spec.aliases) {
        if (opts.aliases.count(name)) continue;
        if (program.find_aspect(name) || program.find_type(name)) {
            aliases[name] = id;
        } else {
            absent.push_back(id);
            report.warnings.push_back("alias '" + name + "' names no declared aspect or type; concern " +
                                      id + " is absent");
        }
    }
    for (const auto& [k, v] : opts.aliases) aliases[k] = v;
    auto valuation = presence_valuation(woven, aliases);
    for (const auto& id : absent) valuation.values.try_emplace(id, false);

    std::map<std::string, std::unique_ptr<KripkeStructure>> models;
    for (const auto& entry : spec.entries) {
        ReportEntry out;
        out.name = entry.name;
        out.kind = entry.kind;
        out.target = entry.target;
        if (entry.kind == EntryKind::Config) {
            out.result = check_config({{entry.name, entry.formula}}, valuation).front();
        } else {
            auto& slot = models[*entry.target];
            if (!slot) {
                slot = std::make_unique<KripkeStructure>(model_of(woven, *entry.target, opts.inline_depth));
                report.models[*entry.target] = {slot->size(), slot->transition_count()};
            }
            const auto& model = *slot;
            for (const auto& atom : unknown_atoms(model, entry.formula)) {
                if (opts.strict_atoms) throw UnknownAtom(atom);
                report.warnings.push_back("entry '" + entry.name + "': atom '" + atom +
                                          "' labels no state of " + *entry.target +
                                          "; treated as false");
            }
            out.result = check_ctl(model, entry.formula);
            auto name_states = [&](const std::vector<std::size_t>& states) {
                for (const auto s : states) out.state_names[s] = state_summary(model, s);
            };
            if (const auto* p = std::get_if<FinitePath>(&out.result.evidence)) name_states(p->states);
            if (const auto* l = std::get_if<Lasso>(&out.result.evidence)) {
                name_states(l->prefix);
                name_states(l->cycle);
            }
        }
        report.entries.push_back(std::move(out));
    }
    return report;
}

inline Report run_pipeline(const std::vector<fs::path>& sources, const PropertySpec& spec,
                           const PipelineOptions& opts = {}) {
    return run_pipeline(load_program(sources), spec, opts);
}

// ---------------------------------------------------------------------------
// concern dependency graph

struct ConcernGraph {
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<std::string> warnings;
};

namespace detail {

inline bool conjunct_atoms(const Formula& f, std::vector<std::string>& out) {
    if (f.op == Op::Atom) {
        out.push_back(f.atom);
        return true;
    }
    if (f.op == Op::And) return conjunct_atoms(f.lhs(), out) && conjunct_atoms(f.rhs(), out);
    return false;
}

} // namespace detail

/// Edges X -> Yi for every formula shaped `X -> (Y1 & ... & Yn)` over atoms,
/// in formula order, without duplicates. Other shapes produce a warning.
inline ConcernGraph concern_graph(const std::vector<NamedFormula>& formulas) {
    ConcernGraph g;
    for (const auto& nf : formulas) {
        std::vector<std::string> deps;
        const Formula& f = nf.formula;
        if (f.op != Op::Implies || f.lhs().op != Op::Atom || !detail::conjunct_atoms(f.rhs(), deps)) {
            g.warnings.push_back("formula '" + nf.name + "' is not of the form X -> (Y1 & ... & Yn); ignored");
            continue;
        }
        for (const auto& d : deps) {
            std::pair<std::string, std::string> edge{f.lhs().atom, d};
            if (std::find(g.edges.begin(), g.edges.end(), edge) == g.edges.end()) g.edges.push_back(edge);
        }
    }
    return g;
}

inline std::string to_dot(const ConcernGraph& g) {
    std::ostringstream os;
    os << "digraph concerns {\n";
    for (const auto& [from, to] : g.edges)
        os << "  \"" << detail::dot_escape(from) << "\" -> \"" << detail::dot_escape(to) << "\";\n";
    os << "}\n";
    return os.str();
}

inline std::string emit_concern_graph(const std::vector<NamedFormula>& formulas) {
    return to_dot(concern_graph(formulas));
}

} // namespace osm
