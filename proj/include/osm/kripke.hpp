#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "osm/cfg.hpp"
#include "osm/error.hpp"

namespace osm {

using LabelSet = std::set<std::string>;

inline constexpr std::string_view kTerminated = "terminated";

/// Well-formed atomic proposition: `ns:name` with a known namespace, or one
/// of the bare markers.
inline bool valid_proposition(std::string_view p) {
    if (p == "entry" || p == "exit" || p == "error" || p == kTerminated) return true;
    const auto colon = p.find(':');
    if (colon == std::string_view::npos || colon + 1 == p.size()) return false;
    const auto ns = p.substr(0, colon);
    return ns == "action" || ns == "call" || ns == "advice" || ns == "aspect" || ns == "prop" ||
           ns == "node";
}

/// State-labeled transition system over states 0..n-1. Construction
/// enforces a nonempty initial set and a total transition relation.
class KripkeStructure {
public:
    KripkeStructure(std::vector<LabelSet> labels, std::vector<std::size_t> initial,
                    const std::vector<std::pair<std::size_t, std::size_t>>& transitions)
        : labels_(std::move(labels)), initial_(std::move(initial)), succ_(labels_.size()),
          pred_(labels_.size()) {
        const auto n = labels_.size();
        std::sort(initial_.begin(), initial_.end());
        initial_.erase(std::unique(initial_.begin(), initial_.end()), initial_.end());
        if (initial_.empty()) throw EmptyInitialError();
        for (const auto s : initial_)
            if (s >= n) throw SchemaError("initial state " + std::to_string(s) + " does not exist");
        for (const auto& [from, to] : transitions) {
            if (from >= n || to >= n)
                throw SchemaError("transition " + std::to_string(from) + "->" + std::to_string(to) +
                                  " references a missing state");
            succ_[from].push_back(to);
            pred_[to].push_back(from);
        }
        for (std::size_t s = 0; s < n; ++s) {
            normalize(succ_[s]);
            normalize(pred_[s]);
            if (succ_[s].empty()) throw TotalityError(s);
        }
    }

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::size_t>& initial() const { return initial_; }
    const LabelSet& labels(std::size_t s) const { return labels_[s]; }
    const std::vector<std::size_t>& successors(std::size_t s) const { return succ_[s]; }
    const std::vector<std::size_t>& predecessors(std::size_t s) const { return pred_[s]; }
    bool has_label(std::size_t s, const std::string& p) const { return labels_[s].count(p) != 0; }

    bool is_initial(std::size_t s) const {
        return std::binary_search(initial_.begin(), initial_.end(), s);
    }

    std::size_t transition_count() const {
        std::size_t n = 0;
        for (const auto& s : succ_) n += s.size();
        return n;
    }

    /// Every transition, lexicographically ordered.
    std::vector<std::pair<std::size_t, std::size_t>> transitions() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t s = 0; s < succ_.size(); ++s)
            for (const auto t : succ_[s]) out.emplace_back(s, t);
        return out;
    }

    /// Union of all state labels.
    LabelSet vocabulary() const {
        LabelSet out;
        for (const auto& l : labels_) out.insert(l.begin(), l.end());
        return out;
    }

    bool operator==(const KripkeStructure& o) const {
        return labels_ == o.labels_ && initial_ == o.initial_ && succ_ == o.succ_;
    }

private:
    std::vector<LabelSet> labels_;
    std::vector<std::size_t> initial_;
    std::vector<std::vector<std::size_t>> succ_;
    std::vector<std::vector<std::size_t>> pred_;

    static void normalize(std::vector<std::size_t>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
};

/// The `action:` label of an action-bearing state, without its prefix.
/// Branch states (`action:branch:...`) and control markers yield nothing.
inline std::optional<std::string> action_of(const LabelSet& labels) {
    constexpr std::string_view prefix = "action:";
    for (const auto& l : labels) {
        if (l.rfind(prefix, 0) != 0) continue;
        if (l.rfind("action:branch:", 0) == 0) continue;
        return l.substr(prefix.size());
    }
    return std::nullopt;
}

/// One state per CFG node (same ids), one transition per edge, plus
/// self-loops on Exit and Error.
inline KripkeStructure from_cfg(const Cfg& cfg) {
    std::vector<LabelSet> labels(cfg.nodes.size());
    for (const auto& n : cfg.nodes) {
        auto& l = labels[n.id];
        switch (n.kind) {
        case NodeKind::Entry: l.insert("entry"); break;
        case NodeKind::Exit:
            l.insert("exit");
            l.insert(std::string(kTerminated));
            break;
        case NodeKind::Error:
            l.insert("error");
            l.insert(std::string(kTerminated));
            break;
        case NodeKind::Action:
            l.insert("action:" + n.label);
            if (n.call) l.insert("call:" + n.call->receiver + "." + n.call->method);
            break;
        case NodeKind::Branch: l.insert("action:branch:" + n.label); break;
        }
        if (n.advice) {
            l.insert("advice:" + n.advice->aspect + "." + std::string(to_string(n.advice->kind)));
            l.insert("aspect:" + n.advice->aspect);
        }
        for (const auto& p : n.props) l.insert("prop:" + p);
    }
    std::vector<std::pair<std::size_t, std::size_t>> transitions;
    for (const auto& e : cfg.edges) transitions.emplace_back(e.from, e.to);
    transitions.emplace_back(cfg.exit, cfg.exit);
    if (cfg.error) transitions.emplace_back(*cfg.error, *cfg.error);
    return KripkeStructure(std::move(labels), {cfg.entry}, transitions);
}

enum class ModelFormat { Json, Dot };

inline nlohmann::ordered_json to_json(const KripkeStructure& m) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    auto states = nlohmann::ordered_json::array();
    for (std::size_t s = 0; s < m.size(); ++s) {
        nlohmann::ordered_json st;
        st["id"] = s;
        st["labels"] = std::vector<std::string>(m.labels(s).begin(), m.labels(s).end());
        states.push_back(std::move(st));
    }
    j["states"] = std::move(states);
    j["initial"] = m.initial();
    auto trans = nlohmann::ordered_json::array();
    for (const auto& [from, to] : m.transitions()) trans.push_back({from, to});
    j["transitions"] = std::move(trans);
    return j;
}

inline std::string emit(const KripkeStructure& m, ModelFormat format) {
    if (format == ModelFormat::Json) return to_json(m).dump(2) + "\n";
    std::ostringstream os;
    os << "digraph kripke {\n";
    for (std::size_t s = 0; s < m.size(); ++s) {
        os << "  s" << s << " [shape=" << (m.is_initial(s) ? "doublecircle" : "box")
           << ", label=\"" << s;
        for (const auto& l : m.labels(s)) os << "\\n" << detail::dot_escape(l);
        os << "\"];\n";
    }
    for (const auto& [from, to] : m.transitions()) os << "  s" << from << " -> s" << to << ";\n";
    os << "}\n";
    return os.str();
}

namespace detail {

inline void expect_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> keys,
                        std::string_view where) {
    if (!obj.is_object()) throw SchemaError(std::string(where) + " must be an object");
    for (const auto k : keys)
        if (!obj.contains(std::string(k)))
            throw SchemaError(std::string(where) + " is missing field '" + std::string(k) + "'");
    for (const auto& [k, v] : obj.items()) {
        (void)v;
        if (std::find(keys.begin(), keys.end(), k) == keys.end())
            throw SchemaError(std::string(where) + " has unknown field '" + k + "'");
    }
}

inline std::size_t state_index(const nlohmann::json& v, std::string_view where) {
    if (!v.is_number_unsigned()) throw SchemaError(std::string(where) + " must be a non-negative integer");
    return v.get<std::size_t>();
}

} // namespace detail

/// Parses the JSON model format. State ids must be exactly 0..n-1.
inline KripkeStructure load(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    detail::expect_keys(j, {"version", "states", "initial", "transitions"}, "model");
    if (j["version"] != 1) throw SchemaError("unsupported model version");
    if (!j["states"].is_array()) throw SchemaError("'states' must be an array");
    if (!j["initial"].is_array()) throw SchemaError("'initial' must be an array");
    if (!j["transitions"].is_array()) throw SchemaError("'transitions' must be an array");

    const auto n = j["states"].size();
    std::vector<LabelSet> labels(n);
    std::vector<bool> seen(n, false);
    for (const auto& st : j["states"]) {
        detail::expect_keys(st, {"id", "labels"}, "state");
        const auto id = detail::state_index(st["id"], "state id");
        if (id >= n || seen[id]) throw SchemaError("state ids must be distinct and within 0.." + std::to_string(n - 1));
        seen[id] = true;
        if (!st["labels"].is_array()) throw SchemaError("state labels must be an array");
        for (const auto& l : st["labels"]) {
            if (!l.is_string() || !valid_proposition(l.get<std::string>()))
                throw SchemaError("invalid atomic proposition " + l.dump());
            labels[id].insert(l.get<std::string>());
        }
    }
    std::vector<std::size_t> initial;
    for (const auto& s : j["initial"]) initial.push_back(detail::state_index(s, "initial state"));
    std::vector<std::pair<std::size_t, std::size_t>> transitions;
    for (const auto& t : j["transitions"]) {
        if (!t.is_array() || t.size() != 2) throw SchemaError("transition must be a [from, to] pair");
        transitions.emplace_back(detail::state_index(t[0], "transition source"),
                                 detail::state_index(t[1], "transition target"));
    }
    return KripkeStructure(std::move(labels), std::move(initial), transitions);
}

} // namespace osm
