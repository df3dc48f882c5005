#pragma once

#include <string>
#include <variant>
#include <vector>

#include "osm/error.hpp"
#include "osm/formula.hpp"
#include "osm/result.hpp"
#include "osm/valuation.hpp"

namespace osm {

inline bool eval_prop(const Formula& f, const ConcernValuation& v) {
    switch (f.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: {
        const auto it = v.values.find(f.atom);
        if (it == v.values.end()) throw UnknownAtom(f.atom);
        return it->second;
    }
    case Op::Not: return !eval_prop(f.lhs(), v);
    case Op::And: return eval_prop(f.lhs(), v) && eval_prop(f.rhs(), v);
    case Op::Or: return eval_prop(f.lhs(), v) || eval_prop(f.rhs(), v);
    case Op::Implies: return !eval_prop(f.lhs(), v) || eval_prop(f.rhs(), v);
    case Op::Iff: return eval_prop(f.lhs(), v) == eval_prop(f.rhs(), v);
    default:
        throw Error("temporal operator in configuration formula: " + to_string(f));
    }
}

struct NamedFormula {
    std::string name;
    Formula formula;
};

/// Evaluates each formula on the woven valuation; a failing formula carries
/// that valuation as its counterexample.
inline std::vector<SatResult> check_config(const std::vector<NamedFormula>& formulas,
                                           const ConcernValuation& v) {
    std::vector<SatResult> out;
    out.reserve(formulas.size());
    for (const auto& nf : formulas) {
        SatResult r;
        r.holds = eval_prop(nf.formula, v);
        if (!r.holds) r.evidence = Assignment{v};
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace osm
