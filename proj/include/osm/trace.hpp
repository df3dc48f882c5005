#pragma once

#include <cstddef>
#include <istream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "osm/error.hpp"
#include "osm/kripke.hpp"

namespace osm {

/// Observed event labels, in order.
using Trace = std::vector<std::string>;

struct TraceVerdict {
    bool conforming = false;
    /// Index of the first event no model path can match.
    std::optional<std::size_t> divergence;
    bool operator==(const TraceVerdict&) const = default;
};

/// Is there a path from an initial state whose action-bearing states carry
/// `action:<event>` in trace order? Entry, branch and terminal states are
/// passed through silently. Tracks the set of states that matched the
/// previous event and advances it breadth-first.
inline TraceVerdict check_trace(const KripkeStructure& m, const Trace& t) {
    if (t.empty()) throw EmptyTrace(0);

    std::vector<std::optional<std::string>> action(m.size());
    for (std::size_t s = 0; s < m.size(); ++s) action[s] = action_of(m.labels(s));

    // Action states reachable from `from` through silent states only,
    // counting `from` itself.
    auto next_actions = [&](const std::vector<std::size_t>& from) {
        std::vector<char> seen(m.size(), 0);
        std::vector<std::size_t> work;
        std::vector<std::size_t> out;
        for (const auto s : from) {
            if (seen[s]) continue;
            seen[s] = 1;
            work.push_back(s);
        }
        while (!work.empty()) {
            const auto s = work.back();
            work.pop_back();
            if (action[s]) {
                out.push_back(s);
                continue;
            }
            for (const auto n : m.successors(s)) {
                if (seen[n]) continue;
                seen[n] = 1;
                work.push_back(n);
            }
        }
        return out;
    };

    std::vector<std::size_t> frontier = m.initial();
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::vector<std::size_t> matched;
        for (const auto s : next_actions(frontier))
            if (*action[s] == t[i]) matched.push_back(s);
        if (matched.empty()) return {false, i};

        frontier.clear();
        for (const auto s : matched)
            frontier.insert(frontier.end(), m.successors(s).begin(), m.successors(s).end());
    }
    return {true, std::nullopt};
}

struct TraceReport {
    std::vector<TraceVerdict> verdicts;
    std::size_t conforming = 0;
    std::size_t total = 0;

    /// Reduced `conforming/total` ("1" when all conform), or nullopt when there are no traces.
    std::optional<std::string> fraction() const {
        if (total == 0) return std::nullopt;
        const auto g = std::gcd(conforming, total);
        if (total / g == 1) return std::to_string(conforming / g);
        return std::to_string(conforming / g) + "/" + std::to_string(total / g);
    }
};

inline TraceReport check_trace_set(const KripkeStructure& m, const std::vector<Trace>& traces) {
    TraceReport r;
    for (std::size_t i = 0; i < traces.size(); ++i)
        if (traces[i].empty()) throw EmptyTrace(i);
    for (const auto& t : traces) {
        r.verdicts.push_back(check_trace(m, t));
        if (r.verdicts.back().conforming) ++r.conforming;
    }
    r.total = traces.size();
    return r;
}

/// One event per line; blank lines and `#` comments are skipped.
inline Trace read_trace(std::istream& in) {
    Trace t;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        t.push_back(line.substr(b, e - b + 1));
    }
    return t;
}

} // namespace osm
