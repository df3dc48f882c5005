#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "osm/valuation.hpp"

namespace osm {

/// The woven valuation that falsifies a configuration formula.
struct Assignment {
    ConcernValuation valuation;
    bool operator==(const Assignment&) const = default;
};

/// Starts at an initial state; consecutive states are transitions.
struct FinitePath {
    std::vector<std::size_t> states;
    bool operator==(const FinitePath&) const = default;
};

/// `prefix` leads from an initial state into `cycle`; the last cycle state
/// steps back to the first. An empty prefix means the cycle starts initial.
struct Lasso {
    std::vector<std::size_t> prefix;
    std::vector<std::size_t> cycle;
    bool operator==(const Lasso&) const = default;
};

using Evidence = std::variant<std::monostate, Assignment, FinitePath, Lasso>;

struct SatResult {
    bool holds = false;
    Evidence evidence;
    bool operator==(const SatResult&) const = default;
};

} // namespace osm
