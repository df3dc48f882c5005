#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "osm/ast.hpp"
#include "osm/error.hpp"
#include "osm/parser.hpp"
#include "osm/valuation.hpp"

namespace osm {

struct Signature {
    std::string receiver;
    std::string method;
    int arity = 0;
    bool operator==(const Signature&) const = default;
};

/// A call site. `owner` is `Type.method` for method bodies and
/// `Aspect.kind#ordinal` for advice bodies; `path` indexes the statement
/// through nested blocks (if: 0 = then, 1 = else; while: 0 = body).
struct JoinPoint {
    std::string owner;
    std::vector<int> path;
    Signature signature;
    std::optional<std::string> owner_aspect;
    bool operator==(const JoinPoint&) const = default;
};

struct AdviceBinding {
    JoinPoint joinpoint;
    std::string aspect;
    int advice_ordinal = 0;
    AdviceKind kind = AdviceKind::Before;
    int precedence_rank = 0;
    bool operator==(const AdviceBinding&) const = default;
};

inline std::string advice_owner(const std::string& aspect, AdviceKind kind, int ordinal) {
    return aspect + "." + std::string(to_string(kind)) + "#" + std::to_string(ordinal);
}

/// Anchored glob match; `*` matches any (possibly empty) run of characters.
inline bool glob_match(std::string_view pattern, std::string_view text) {
    std::size_t p = 0;
    std::size_t t = 0;
    std::size_t star = std::string_view::npos;
    std::size_t resume = 0;
    while (t < text.size()) {
        if (p < pattern.size() && pattern[p] != '*' && pattern[p] == text[t]) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            resume = t;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            t = ++resume;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

inline bool match(const CallPattern& pattern, const Signature& sig) {
    return glob_match(pattern.receiver_glob, sig.receiver) &&
           glob_match(pattern.method_glob, sig.method) &&
           (!pattern.arity || *pattern.arity == sig.arity);
}

namespace detail {

inline void collect_calls(const Block& body, std::vector<int>& path, const std::string& owner,
                          const std::optional<std::string>& owner_aspect,
                          std::vector<JoinPoint>& out) {
    for (std::size_t i = 0; i < body.size(); ++i) {
        path.push_back(static_cast<int>(i));
        const auto& node = body[i].node;
        if (const auto* c = std::get_if<CallExpr>(&node)) {
            out.push_back({owner, path, {c->receiver, c->method, c->arg_count}, owner_aspect});
        } else if (const auto* st = std::get_if<IfStmt>(&node)) {
            path.push_back(0);
            collect_calls(st->then_branch, path, owner, owner_aspect, out);
            path.back() = 1;
            if (st->else_branch) collect_calls(*st->else_branch, path, owner, owner_aspect, out);
            path.pop_back();
        } else if (const auto* wh = std::get_if<WhileStmt>(&node)) {
            path.push_back(0);
            collect_calls(wh->body, path, owner, owner_aspect, out);
            path.pop_back();
        }
        path.pop_back();
    }
}

} // namespace detail

/// One join point per Call statement, in declaration order then path order.
inline std::vector<JoinPoint> enumerate_join_points(const Program& prog) {
    std::vector<JoinPoint> out;
    std::vector<int> path;
    for (const auto& d : prog.declarations) {
        if (const auto* t = std::get_if<TypeDecl>(&d)) {
            for (const auto& m : t->methods)
                detail::collect_calls(m.body, path, t->name + "." + m.name, std::nullopt, out);
        } else {
            const auto& a = std::get<AspectDecl>(d);
            for (std::size_t i = 0; i < a.advice.size(); ++i) {
                const auto& adv = a.advice[i];
                detail::collect_calls(adv.body, path,
                                      advice_owner(a.name, adv.kind, static_cast<int>(i)), a.name,
                                      out);
            }
        }
    }
    return out;
}

/// Rank per aspect: position in the precedence directive, then unlisted
/// aspects in declaration order.
inline std::map<std::string, int> precedence_ranks(const Program& prog) {
    std::map<std::string, int> ranks;
    int next = 0;
    if (prog.precedence) {
        for (const auto& n : *prog.precedence) {
            if (!prog.find_aspect(n)) throw PrecedenceError(n);
            if (!ranks.emplace(n, next).second)
                throw PrecedenceError(n, "precedence directive lists '" + n + "' twice");
            ++next;
        }
    }
    for (const auto* a : prog.aspects())
        if (ranks.emplace(a->name, next).second) ++next;
    return ranks;
}

class WovenProgram {
public:
    WovenProgram(Program program, std::vector<AdviceBinding> bindings)
        : program_(std::move(program)), bindings_(std::move(bindings)) {
        for (std::size_t i = 0; i < bindings_.size(); ++i) {
            const auto& jp = bindings_[i].joinpoint;
            auto [it, fresh] = index_.try_emplace({jp.owner, jp.path}, i, i + 1);
            if (!fresh) it->second.second = i + 1;
        }
    }

    const Program& program() const { return program_; }

    /// Sorted by (join point order, precedence rank, advice ordinal).
    const std::vector<AdviceBinding>& bindings() const { return bindings_; }

    std::span<const AdviceBinding> bindings_at(const std::string& owner,
                                               const std::vector<int>& path) const {
        const auto it = index_.find({owner, path});
        if (it == index_.end()) return {};
        return std::span(bindings_).subspan(it->second.first, it->second.second - it->second.first);
    }

    std::size_t bound_count(const std::string& aspect) const {
        return static_cast<std::size_t>(std::count_if(
            bindings_.begin(), bindings_.end(), [&](const auto& b) { return b.aspect == aspect; }));
    }

    bool operator==(const WovenProgram& other) const {
        return program_ == other.program_ && bindings_ == other.bindings_;
    }

private:
    Program program_;
    std::vector<AdviceBinding> bindings_;
    std::map<std::pair<std::string, std::vector<int>>, std::pair<std::size_t, std::size_t>> index_;
};

/// Binds every matching advice to every call join point. Advice never
/// applies to join points inside its own aspect.
inline WovenProgram weave(const Program& prog) {
    const auto ranks = precedence_ranks(prog);
    const auto joinpoints = enumerate_join_points(prog);
    const auto aspects = prog.aspects();

    struct Keyed {
        std::size_t jp;
        AdviceBinding binding;
    };
    std::vector<Keyed> found;
    for (std::size_t j = 0; j < joinpoints.size(); ++j) {
        const auto& jp = joinpoints[j];
        for (const auto* a : aspects) {
            if (jp.owner_aspect == a->name) continue;
            for (std::size_t i = 0; i < a->advice.size(); ++i) {
                const auto& adv = a->advice[i];
                const auto* pattern = a->pattern_of(adv);
                if (!pattern) throw UnknownPointcut(std::get<PointcutRef>(adv.target).name,
                                                    adv.pos.line, adv.pos.col);
                if (!match(*pattern, jp.signature)) continue;
                found.push_back({j, {jp, a->name, static_cast<int>(i), adv.kind, ranks.at(a->name)}});
            }
        }
    }
    std::stable_sort(found.begin(), found.end(), [](const Keyed& x, const Keyed& y) {
        return std::tie(x.jp, x.binding.precedence_rank, x.binding.advice_ordinal) <
               std::tie(y.jp, y.binding.precedence_rank, y.binding.advice_ordinal);
    });
    std::vector<AdviceBinding> bindings;
    bindings.reserve(found.size());
    for (auto& k : found) bindings.push_back(std::move(k.binding));
    return WovenProgram(prog, std::move(bindings));
}

/// Order in which the advice at one join point executes: before-advice by
/// precedence, then the around chain (outermost first), then after-advice in
/// reverse precedence.
inline std::vector<AdviceBinding> execution_order(std::span<const AdviceBinding> at_joinpoint) {
    std::vector<AdviceBinding> sorted(at_joinpoint.begin(), at_joinpoint.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
        return std::tie(x.precedence_rank, x.advice_ordinal) <
               std::tie(y.precedence_rank, y.advice_ordinal);
    });
    std::vector<AdviceBinding> out;
    for (const auto& b : sorted)
        if (b.kind == AdviceKind::Before) out.push_back(b);
    for (const auto& b : sorted)
        if (b.kind == AdviceKind::Around) out.push_back(b);
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it)
        if (it->kind == AdviceKind::After) out.push_back(*it);
    return out;
}

/// Which concerns are actually woven. An alias key may name an aspect (true
/// iff it has at least one binding) or a type (true iff it declares a
/// method). Unaliased aspects are keyed by their own name; several names
/// mapping to one id are or-ed.
inline ConcernValuation presence_valuation(const WovenProgram& woven,
                                           const std::map<std::string, std::string>& aliases,
                                           const std::string& core_id = "P") {
    const Program& prog = woven.program();
    for (const auto& [name, id] : aliases) {
        (void)id;
        if (!prog.find_aspect(name) && !prog.find_type(name)) throw AliasError(name);
    }
    ConcernValuation v;
    auto set = [&](const std::string& id, bool present) { v.values[id] = v.values[id] || present; };

    bool core = false;
    for (const auto* t : prog.types()) {
        if (!t->methods.empty()) core = true;
        if (const auto it = aliases.find(t->name); it != aliases.end())
            set(it->second, !t->methods.empty());
    }
    set(core_id, core);

    for (const auto* a : prog.aspects()) {
        const auto it = aliases.find(a->name);
        set(it == aliases.end() ? a->name : it->second, woven.bound_count(a->name) > 0);
    }
    return v;
}

} // namespace osm
