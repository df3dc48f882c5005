#pragma once

#include <sstream>
#include <string>

#include "osm/ast.hpp"

namespace osm {

namespace detail {

class Printer {
public:
    std::string run(const Program& prog) {
        bool first = true;
        auto separate = [&] {
            if (!first) os_ << '\n';
            first = false;
        };
        if (prog.precedence) {
            separate();
            os_ << "precedence ";
            for (std::size_t i = 0; i < prog.precedence->size(); ++i)
                os_ << (i ? ", " : "") << (*prog.precedence)[i];
            os_ << ";\n";
        }
        for (const auto& d : prog.declarations) {
            separate();
            std::visit([this](const auto& decl) { print(decl); }, d);
        }
        return os_.str();
    }

private:
    std::ostringstream os_;
    int depth_ = 0;

    void indent() {
        for (int i = 0; i < depth_; ++i) os_ << "  ";
    }

    static std::string call(const CallExpr& c) {
        std::string out = c.receiver + "." + c.method + "(";
        if (c.arg_count) out += std::to_string(c.arg_count);
        return out + ")";
    }

    static std::string cond(const Condition& c) {
        return std::visit(overloaded{[](const CallExpr& e) { return call(e); },
                                     [](const CondLabel& l) { return l.label; }},
                          c);
    }

    static std::string pattern(const CallPattern& p) {
        std::string out = "call(* " + p.receiver_glob + "." + p.method_glob + "(";
        if (!p.arity) {
            out += "..";
        } else if (*p.arity) {
            out += std::to_string(*p.arity);
        }
        return out + "))";
    }

    // Emits `{ ... }` starting on the current line; leaves the cursor after `}`.
    void block(const Block& b) {
        if (b.empty()) {
            os_ << "{}";
            return;
        }
        os_ << "{\n";
        ++depth_;
        for (const auto& s : b) stmt(s);
        --depth_;
        indent();
        os_ << '}';
    }

    void stmt(const Stmt& s) {
        indent();
        std::visit(overloaded{
                       [&](const CallExpr& c) { os_ << call(c) << ';'; },
                       [&](const IfStmt& st) {
                           os_ << "if (" << cond(st.cond) << ") ";
                           block(st.then_branch);
                           if (st.else_branch) {
                               os_ << " else ";
                               block(*st.else_branch);
                           }
                       },
                       [&](const WhileStmt& st) {
                           os_ << "while (" << cond(st.cond) << ") ";
                           block(st.body);
                       },
                       [&](const ThrowStmt& st) { os_ << "throw " << st.exception << ';'; },
                       [&](const ReturnStmt&) { os_ << "return;"; },
                       [&](const AtomicStmt& st) { os_ << "atomic " << st.label << ';'; },
                       [&](const ProceedStmt&) { os_ << "proceed();"; },
                   },
                   s.node);
        os_ << '\n';
    }

    void print(const TypeDecl& t) {
        os_ << "class " << t.name << ' ';
        if (t.methods.empty()) {
            os_ << "{}\n";
            return;
        }
        os_ << "{\n";
        ++depth_;
        for (const auto& m : t.methods) {
            for (const auto& a : m.annotations) {
                indent();
                os_ << "@prop(" << a << ")\n";
            }
            indent();
            os_ << m.name << '(';
            if (m.arity) os_ << m.arity;
            os_ << ") ";
            block(m.body);
            os_ << '\n';
        }
        --depth_;
        os_ << "}\n";
    }

    void print(const AspectDecl& a) {
        os_ << "aspect " << a.name << ' ';
        if (a.pointcuts.empty() && a.advice.empty()) {
            os_ << "{}\n";
            return;
        }
        os_ << "{\n";
        ++depth_;
        for (const auto& pc : a.pointcuts) {
            indent();
            os_ << "pointcut " << pc.name << ": " << pattern(pc.pattern) << ";\n";
        }
        for (const auto& adv : a.advice) {
            indent();
            os_ << to_string(adv.kind) << "(): ";
            std::visit(overloaded{[&](const PointcutRef& r) { os_ << r.name; },
                                  [&](const CallPattern& p) { os_ << pattern(p); }},
                       adv.target);
            os_ << ' ';
            block(adv.body);
            os_ << '\n';
        }
        --depth_;
        os_ << "}\n";
    }
};

} // namespace detail

/// Canonical rendering; `parse(pretty_print(p)) == p`.
inline std::string pretty_print(const Program& prog) { return detail::Printer{}.run(prog); }

} // namespace osm
