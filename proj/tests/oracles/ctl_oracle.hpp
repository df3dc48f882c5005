#pragma once

// Direct CTL semantics: every temporal operator is computed from its own
// fixpoint definition by naive round-robin iteration. No dualities, no
// worklists, no shared code with the checker.

#include <cstddef>
#include <vector>

#include "osm/formula.hpp"
#include "osm/kripke.hpp"

namespace oracle {

using Bits = std::vector<bool>;

class NaiveCtl {
public:
    explicit NaiveCtl(const osm::KripkeStructure& m) : m_(m) {}

    Bits eval(const osm::Formula& f) const {
        using osm::Op;
        const auto n = m_.size();
        switch (f.op) {
        case Op::True: return Bits(n, true);
        case Op::False: return Bits(n, false);
        case Op::Atom: {
            Bits out(n);
            for (std::size_t s = 0; s < n; ++s) out[s] = m_.labels(s).count(f.atom) > 0;
            return out;
        }
        case Op::Not: return pointwise(eval(f.args[0]), eval(f.args[0]), [](bool a, bool) { return !a; });
        case Op::And: return pointwise(eval(f.args[0]), eval(f.args[1]), [](bool a, bool b) { return a && b; });
        case Op::Or: return pointwise(eval(f.args[0]), eval(f.args[1]), [](bool a, bool b) { return a || b; });
        case Op::Implies:
            return pointwise(eval(f.args[0]), eval(f.args[1]), [](bool a, bool b) { return !a || b; });
        case Op::Iff: return pointwise(eval(f.args[0]), eval(f.args[1]), [](bool a, bool b) { return a == b; });
        case Op::EX: return next(eval(f.args[0]), false);
        case Op::AX: return next(eval(f.args[0]), true);
        case Op::EF: return lfp(Bits(n, true), eval(f.args[0]), false);
        case Op::AF: return lfp(Bits(n, true), eval(f.args[0]), true);
        case Op::EU: return lfp(eval(f.args[0]), eval(f.args[1]), false);
        case Op::AU: return lfp(eval(f.args[0]), eval(f.args[1]), true);
        case Op::EG: return gfp(eval(f.args[0]), false);
        case Op::AG: return gfp(eval(f.args[0]), true);
        }
        return Bits(n, false);
    }

private:
    const osm::KripkeStructure& m_;

    template <class F>
    static Bits pointwise(const Bits& a, const Bits& b, F op) {
        Bits out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
        return out;
    }

    bool step(std::size_t s, const Bits& z, bool all) const {
        const auto& succ = m_.successors(s);
        bool any = false, every = true;
        for (const auto t : succ) {
            any = any || z[t];
            every = every && z[t];
        }
        return all ? every : any;
    }

    Bits next(const Bits& z, bool all) const {
        Bits out(z.size());
        for (std::size_t s = 0; s < z.size(); ++s) out[s] = step(s, z, all);
        return out;
    }

    // Z = goal | (hold & Q Z), from Z = {}.
    Bits lfp(const Bits& hold, const Bits& goal, bool all) const {
        Bits z(goal.size(), false);
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t s = 0; s < z.size(); ++s) {
                const bool v = goal[s] || (hold[s] && step(s, z, all));
                if (v != z[s]) {
                    z[s] = v;
                    changed = true;
                }
            }
        }
        return z;
    }

    // Z = body & Q Z, from Z = all.
    Bits gfp(const Bits& body, bool all) const {
        Bits z(body.size(), true);
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t s = 0; s < z.size(); ++s) {
                const bool v = body[s] && step(s, z, all);
                if (v != z[s]) {
                    z[s] = v;
                    changed = true;
                }
            }
        }
        return z;
    }
};

} // namespace oracle
