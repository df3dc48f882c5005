#pragma once

#include <map>
#include <string>

namespace osm {

/// Truth assignment over concern identifiers (P, A, L, ... or aspect names).
struct ConcernValuation {
    std::map<std::string, bool> values;

    bool contains(const std::string& id) const { return values.count(id) != 0; }
    bool operator==(const ConcernValuation&) const = default;
};

} // namespace osm
