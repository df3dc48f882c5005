#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace osm {

/// Location of a declaration or statement in its source file.
struct SourcePos {
    int line = 0;
    int col = 0;

    // Positions are diagnostic metadata; structural equality ignores them so
    // that a reparsed pretty-print compares equal to the original.
    friend constexpr bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

enum class AdviceKind { Before, After, Around };

inline std::string_view to_string(AdviceKind k) {
    switch (k) {
    case AdviceKind::Before: return "before";
    case AdviceKind::After: return "after";
    case AdviceKind::Around: return "around";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// statements

struct CallExpr {
    std::string receiver;
    std::string method;
    int arg_count = 0;
    SourcePos pos;
    bool operator==(const CallExpr&) const = default;
};

struct CondLabel {
    std::string label;
    bool operator==(const CondLabel&) const = default;
};

using Condition = std::variant<CallExpr, CondLabel>;

struct Stmt;
using Block = std::vector<Stmt>;

struct IfStmt {
    Condition cond;
    Block then_branch;
    std::optional<Block> else_branch;
    bool operator==(const IfStmt&) const = default;
};

struct WhileStmt {
    Condition cond;
    Block body;
    bool operator==(const WhileStmt&) const = default;
};

struct ThrowStmt {
    std::string exception;
    bool operator==(const ThrowStmt&) const = default;
};

struct ReturnStmt {
    bool operator==(const ReturnStmt&) const = default;
};

struct AtomicStmt {
    std::string label;
    bool operator==(const AtomicStmt&) const = default;
};

struct ProceedStmt {
    bool operator==(const ProceedStmt&) const = default;
};

struct Stmt {
    std::variant<CallExpr, IfStmt, WhileStmt, ThrowStmt, ReturnStmt, AtomicStmt, ProceedStmt> node;
    SourcePos pos;
    bool operator==(const Stmt&) const = default;
};

// ---------------------------------------------------------------------------
// declarations

/// `call(R.m(..))` selector. `arity == nullopt` means any arity.
struct CallPattern {
    std::string receiver_glob;
    std::string method_glob;
    std::optional<int> arity;
    bool operator==(const CallPattern&) const = default;
};

struct PointcutDecl {
    std::string name;
    CallPattern pattern;
    SourcePos pos;
    bool operator==(const PointcutDecl&) const = default;
};

struct PointcutRef {
    std::string name;
    bool operator==(const PointcutRef&) const = default;
};

struct AdviceDecl {
    AdviceKind kind = AdviceKind::Before;
    std::variant<PointcutRef, CallPattern> target;
    Block body;
    SourcePos pos;
    bool operator==(const AdviceDecl&) const = default;
};

struct AspectDecl {
    std::string name;
    std::vector<PointcutDecl> pointcuts;
    std::vector<AdviceDecl> advice;
    SourcePos pos;
    bool operator==(const AspectDecl&) const = default;

    const PointcutDecl* find_pointcut(std::string_view n) const {
        for (const auto& pc : pointcuts)
            if (pc.name == n) return &pc;
        return nullptr;
    }

    /// Pattern an advice applies to, resolving named pointcuts.
    const CallPattern* pattern_of(const AdviceDecl& adv) const {
        if (const auto* inline_pattern = std::get_if<CallPattern>(&adv.target)) return inline_pattern;
        const auto* pc = find_pointcut(std::get<PointcutRef>(adv.target).name);
        return pc ? &pc->pattern : nullptr;
    }
};

struct MethodDecl {
    std::string name;
    int arity = 0;
    std::set<std::string> annotations;
    Block body;
    SourcePos pos;
    bool operator==(const MethodDecl&) const = default;
};

struct TypeDecl {
    std::string name;
    std::vector<MethodDecl> methods;
    SourcePos pos;
    bool operator==(const TypeDecl&) const = default;

    const MethodDecl* find_method(std::string_view n) const {
        for (const auto& m : methods)
            if (m.name == n) return &m;
        return nullptr;
    }
};

using Declaration = std::variant<TypeDecl, AspectDecl>;

inline const std::string& name_of(const Declaration& d) {
    return std::visit([](const auto& decl) -> const std::string& { return decl.name; }, d);
}

inline SourcePos pos_of(const Declaration& d) {
    return std::visit([](const auto& decl) { return decl.pos; }, d);
}

struct Program {
    std::vector<Declaration> declarations;
    std::optional<std::vector<std::string>> precedence;
    SourcePos precedence_pos;
    bool operator==(const Program&) const = default;

    const TypeDecl* find_type(std::string_view n) const {
        for (const auto& d : declarations)
            if (const auto* t = std::get_if<TypeDecl>(&d); t && t->name == n) return t;
        return nullptr;
    }

    const AspectDecl* find_aspect(std::string_view n) const {
        for (const auto& d : declarations)
            if (const auto* a = std::get_if<AspectDecl>(&d); a && a->name == n) return a;
        return nullptr;
    }

    /// Looks up `Type.method`.
    const MethodDecl* find_method(std::string_view qualified) const {
        const auto dot = qualified.find('.');
        if (dot == std::string_view::npos) return nullptr;
        const auto* t = find_type(qualified.substr(0, dot));
        return t ? t->find_method(qualified.substr(dot + 1)) : nullptr;
    }

    std::vector<const AspectDecl*> aspects() const {
        std::vector<const AspectDecl*> out;
        for (const auto& d : declarations)
            if (const auto* a = std::get_if<AspectDecl>(&d)) out.push_back(a);
        return out;
    }

    std::vector<const TypeDecl*> types() const {
        std::vector<const TypeDecl*> out;
        for (const auto& d : declarations)
            if (const auto* t = std::get_if<TypeDecl>(&d)) out.push_back(t);
        return out;
    }
};

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

} // namespace osm
