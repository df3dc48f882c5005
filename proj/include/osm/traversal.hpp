#pragma once

#include <string>
#include <vector>

#include "osm/ast.hpp"

namespace osm {

/// Walks a Program in declaration order, invoking whichever of the
/// following callbacks the visitor provides:
///   on_type(const TypeDecl&), on_method(const TypeDecl&, const MethodDecl&),
///   on_aspect(const AspectDecl&), on_pointcut(const AspectDecl&, const PointcutDecl&),
///   on_advice(const AspectDecl&, const AdviceDecl&), on_stmt(const Stmt&)
template <class Visitor>
void traverse(const Program& prog, Visitor&& v) {
    auto walk_block = [&](const Block& b, auto&& self) -> void {
        for (const auto& s : b) {
            if constexpr (requires { v.on_stmt(s); }) v.on_stmt(s);
            if (const auto* st = std::get_if<IfStmt>(&s.node)) {
                self(st->then_branch, self);
                if (st->else_branch) self(*st->else_branch, self);
            } else if (const auto* wh = std::get_if<WhileStmt>(&s.node)) {
                self(wh->body, self);
            }
        }
    };
    for (const auto& d : prog.declarations) {
        if (const auto* t = std::get_if<TypeDecl>(&d)) {
            if constexpr (requires { v.on_type(*t); }) v.on_type(*t);
            for (const auto& m : t->methods) {
                if constexpr (requires { v.on_method(*t, m); }) v.on_method(*t, m);
                walk_block(m.body, walk_block);
            }
        } else {
            const auto& a = std::get<AspectDecl>(d);
            if constexpr (requires { v.on_aspect(a); }) v.on_aspect(a);
            for (const auto& pc : a.pointcuts)
                if constexpr (requires { v.on_pointcut(a, pc); }) v.on_pointcut(a, pc);
            for (const auto& adv : a.advice) {
                if constexpr (requires { v.on_advice(a, adv); }) v.on_advice(a, adv);
                walk_block(adv.body, walk_block);
            }
        }
    }
}

struct AspectInfo {
    std::string name;
    int pointcuts = 0;
    int before = 0;
    int after = 0;
    int around = 0;
    bool operator==(const AspectInfo&) const = default;
};

inline std::vector<AspectInfo> collect_aspect_info(const Program& prog) {
    struct Collector {
        std::vector<AspectInfo> out;
        void on_aspect(const AspectDecl& a) { out.push_back({a.name}); }
        void on_pointcut(const AspectDecl&, const PointcutDecl&) { ++out.back().pointcuts; }
        void on_advice(const AspectDecl&, const AdviceDecl& adv) {
            auto& rec = out.back();
            switch (adv.kind) {
            case AdviceKind::Before: ++rec.before; break;
            case AdviceKind::After: ++rec.after; break;
            case AdviceKind::Around: ++rec.around; break;
            }
        }
    } c;
    traverse(prog, c);
    return std::move(c.out);
}

} // namespace osm
