#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "osm/error.hpp"
#include "osm/formula.hpp"
#include "osm/kripke.hpp"
#include "osm/result.hpp"

namespace osm {

/// Subset of a model's states, as a membership vector.
class StateSet {
public:
    StateSet() = default;
    explicit StateSet(std::size_t n, bool all = false) : bits_(n, all ? 1 : 0) {}

    std::size_t universe() const { return bits_.size(); }
    bool contains(std::size_t s) const { return bits_[s] != 0; }
    void insert(std::size_t s) { bits_[s] = 1; }
    void erase(std::size_t s) { bits_[s] = 0; }

    std::size_t count() const {
        return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
    }

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for (std::size_t s = 0; s < bits_.size(); ++s)
            if (bits_[s]) out.push_back(s);
        return out;
    }

    StateSet complement() const {
        StateSet out(*this);
        for (auto& b : out.bits_) b = !b;
        return out;
    }

    StateSet& operator&=(const StateSet& o) {
        for (std::size_t s = 0; s < bits_.size(); ++s) bits_[s] = bits_[s] && o.bits_[s];
        return *this;
    }
    StateSet& operator|=(const StateSet& o) {
        for (std::size_t s = 0; s < bits_.size(); ++s) bits_[s] = bits_[s] || o.bits_[s];
        return *this;
    }
    friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
    friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }

    bool operator==(const StateSet&) const = default;

private:
    std::vector<char> bits_;
};

struct CtlOptions {
    /// Raise UnknownAtom instead of treating an unlabeled atom as false.
    bool strict_atoms = false;
};

/// Atoms of `f` that label no state of `m`.
inline std::vector<std::string> unknown_atoms(const KripkeStructure& m, const Formula& f) {
    const auto vocab = m.vocabulary();
    std::vector<std::string> out;
    for (const auto& a : atoms_of(f))
        if (!vocab.count(a)) out.push_back(a);
    return out;
}

namespace detail {

class Labeler {
public:
    Labeler(const KripkeStructure& m, CtlOptions opts) : m_(m), opts_(opts) {}

    StateSet eval(const Formula& f) {
        const auto n = m_.size();
        switch (f.op) {
        case Op::True: return StateSet(n, true);
        case Op::False: return StateSet(n);
        case Op::Atom: {
            StateSet out(n);
            for (std::size_t s = 0; s < n; ++s)
                if (m_.has_label(s, f.atom)) out.insert(s);
            if (opts_.strict_atoms && out.count() == 0 && !m_.vocabulary().count(f.atom))
                throw UnknownAtom(f.atom);
            return out;
        }
        case Op::Not: return eval(f.lhs()).complement();
        case Op::And: return eval(f.lhs()) & eval(f.rhs());
        case Op::Or: return eval(f.lhs()) | eval(f.rhs());
        case Op::Implies: return eval(f.lhs()).complement() | eval(f.rhs());
        case Op::Iff: {
            const auto a = eval(f.lhs());
            const auto b = eval(f.rhs());
            return (a & b) | (a.complement() & b.complement());
        }
        case Op::EX: return pre_exists(eval(f.lhs()));
        case Op::AX: return pre_exists(eval(f.lhs()).complement()).complement();
        case Op::EF: return until(StateSet(n, true), eval(f.lhs()));
        case Op::AG: return until(StateSet(n, true), eval(f.lhs()).complement()).complement();
        case Op::EU: return until(eval(f.lhs()), eval(f.rhs()));
        case Op::EG: return globally(eval(f.lhs()));
        case Op::AF: return globally(eval(f.lhs()).complement()).complement();
        case Op::AU: {
            // A[p U q] = !(E[!q U (!p & !q)] | EG !q)
            const auto p = eval(f.lhs());
            const auto not_q = eval(f.rhs()).complement();
            return (until(not_q, p.complement() & not_q) | globally(not_q)).complement();
        }
        }
        return StateSet(n);
    }

    /// States with at least one successor in `target`.
    StateSet pre_exists(const StateSet& target) const {
        StateSet out(m_.size());
        for (const auto t : target.members())
            for (const auto p : m_.predecessors(t)) out.insert(p);
        return out;
    }

    /// E[hold U goal]: least fixpoint by backward search from `goal`.
    StateSet until(const StateSet& hold, const StateSet& goal) const {
        StateSet out = goal;
        std::vector<std::size_t> work = goal.members();
        while (!work.empty()) {
            const auto t = work.back();
            work.pop_back();
            for (const auto p : m_.predecessors(t)) {
                if (out.contains(p) || !hold.contains(p)) continue;
                out.insert(p);
                work.push_back(p);
            }
        }
        return out;
    }

    /// EG body: greatest fixpoint, pruning states left without a successor
    /// inside the candidate set.
    StateSet globally(const StateSet& body) const {
        StateSet out = body;
        std::vector<std::size_t> live(m_.size(), 0);
        std::vector<std::size_t> work;
        for (const auto s : body.members()) {
            for (const auto t : m_.successors(s))
                if (body.contains(t)) ++live[s];
            if (live[s] == 0) work.push_back(s);
        }
        while (!work.empty()) {
            const auto s = work.back();
            work.pop_back();
            if (!out.contains(s)) continue;
            out.erase(s);
            for (const auto p : m_.predecessors(s)) {
                if (!out.contains(p)) continue;
                if (--live[p] == 0) work.push_back(p);
            }
        }
        return out;
    }

private:
    const KripkeStructure& m_;
    CtlOptions opts_;
};

// Level-synchronous BFS from `starts`; only states in `through` are
// expanded. Returns the shortest path to a `goal` state, preferring the
// smallest goal id at the minimal depth and the smallest parent ids.
inline std::optional<std::vector<std::size_t>> shortest_path(const KripkeStructure& m,
                                                             std::vector<std::size_t> starts,
                                                             const StateSet& through,
                                                             const StateSet& goal) {
    constexpr auto none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent(m.size(), none);
    std::vector<char> seen(m.size(), 0);
    std::sort(starts.begin(), starts.end());
    std::vector<std::size_t> level;
    for (const auto s : starts) {
        if (seen[s]) continue;
        seen[s] = 1;
        level.push_back(s);
    }
    while (!level.empty()) {
        for (const auto s : level) {
            if (!goal.contains(s)) continue;
            std::vector<std::size_t> path{s};
            while (parent[path.back()] != none) path.push_back(parent[path.back()]);
            std::reverse(path.begin(), path.end());
            return path;
        }
        std::vector<std::size_t> next;
        for (const auto s : level) {
            if (!through.contains(s)) continue;
            for (const auto t : m.successors(s)) {
                if (seen[t]) continue;
                seen[t] = 1;
                parent[t] = s;
                next.push_back(t);
            }
        }
        std::sort(next.begin(), next.end());
        level = std::move(next);
    }
    return std::nullopt;
}

// From the smallest start, follow the smallest successor inside `inside`
// until a state repeats. Every state of `inside` must have a successor in it.
inline Lasso lasso_within(const KripkeStructure& m, const std::vector<std::size_t>& starts,
                          const StateSet& inside) {
    std::vector<std::size_t> path{*std::min_element(starts.begin(), starts.end())};
    std::map<std::size_t, std::size_t> at{{path.front(), 0}};
    for (;;) {
        std::size_t next = path.back();
        for (const auto t : m.successors(path.back())) {
            if (inside.contains(t)) {
                next = t;
                break;
            }
        }
        if (const auto it = at.find(next); it != at.end()) {
            const auto cut = static_cast<std::ptrdiff_t>(it->second);
            return Lasso{{path.begin(), path.begin() + cut}, {path.begin() + cut, path.end()}};
        }
        at.emplace(next, path.size());
        path.push_back(next);
    }
}

class EvidenceBuilder {
public:
    EvidenceBuilder(const KripkeStructure& m, Labeler& labeler) : m_(m), lab_(labeler) {}

    // Evidence that every state in `starts` satisfies `f`.
    Evidence witness(const Formula& f, const std::vector<std::size_t>& starts) {
        const auto n = m_.size();
        switch (f.op) {
        case Op::Not: return counterexample(f.lhs(), starts);
        case Op::EX: {
            const auto body = lab_.eval(f.lhs());
            const auto s = *std::min_element(starts.begin(), starts.end());
            for (const auto t : m_.successors(s))
                if (body.contains(t)) return FinitePath{{s, t}};
            return {};
        }
        case Op::EF:
            return path_or_none(shortest_path(m_, starts, StateSet(n, true), lab_.eval(f.lhs())));
        case Op::EU:
            return path_or_none(shortest_path(m_, starts, lab_.eval(f.lhs()), lab_.eval(f.rhs())));
        case Op::EG: return lasso_within(m_, starts, lab_.eval(f));
        default: return {};
        }
    }

    // Evidence that no state in `starts` satisfies `f`.
    Evidence counterexample(const Formula& f, const std::vector<std::size_t>& starts) {
        const auto n = m_.size();
        switch (f.op) {
        case Op::Not: return witness(f.lhs(), starts);
        case Op::AX: {
            const auto bad = lab_.eval(f.lhs()).complement();
            const auto s = *std::min_element(starts.begin(), starts.end());
            for (const auto t : m_.successors(s))
                if (bad.contains(t)) return FinitePath{{s, t}};
            return {};
        }
        case Op::AG:
            return path_or_none(
                shortest_path(m_, starts, StateSet(n, true), lab_.eval(f.lhs()).complement()));
        case Op::AF: {
            const auto eg = lab_.eval(Formula::unary(Op::EG, Formula::unary(Op::Not, f.lhs())));
            return lasso_within(m_, starts, eg);
        }
        case Op::AU: {
            // Either a path that drops p before reaching q, or q never holds.
            const auto p = lab_.eval(f.lhs());
            const auto not_q = lab_.eval(f.rhs()).complement();
            const auto early = not_q & p.complement();
            const auto reach = lab_.until(not_q, early);
            std::vector<std::size_t> via_path;
            for (const auto s : starts)
                if (reach.contains(s)) via_path.push_back(s);
            if (!via_path.empty()) return path_or_none(shortest_path(m_, via_path, not_q, early));
            return lasso_within(m_, starts, lab_.globally(not_q));
        }
        default: return {};
        }
    }

private:
    const KripkeStructure& m_;
    Labeler& lab_;

    static Evidence path_or_none(std::optional<std::vector<std::size_t>> p) {
        if (!p) return {};
        return FinitePath{std::move(*p)};
    }
};

} // namespace detail

/// Exact satisfaction set of a CTL formula by fixpoint labeling. Atoms that
/// label no state are false everywhere unless `strict_atoms` is set.
inline StateSet sat_set(const KripkeStructure& m, const Formula& f, CtlOptions opts = {}) {
    return detail::Labeler(m, opts).eval(f);
}

/// Holds iff every initial state satisfies `f`. Evidence follows the
/// top-level operator (looking through negation): witness paths for EX, EF,
/// EU and EG when they hold; counterexample paths for AX, AG, AF and AU when
/// they fail. Shortest paths break ties toward smaller state ids.
inline SatResult check_ctl(const KripkeStructure& m, const Formula& f, CtlOptions opts = {}) {
    detail::Labeler labeler(m, opts);
    const auto sat = labeler.eval(f);
    std::vector<std::size_t> failing;
    for (const auto s : m.initial())
        if (!sat.contains(s)) failing.push_back(s);

    SatResult r;
    r.holds = failing.empty();
    detail::EvidenceBuilder evidence(m, labeler);
    r.evidence = r.holds ? evidence.witness(f, m.initial()) : evidence.counterexample(f, failing);
    return r;
}

} // namespace osm
