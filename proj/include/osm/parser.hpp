#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "osm/ast.hpp"
#include "osm/error.hpp"
#include "osm/lexer.hpp"

namespace osm {

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view source) : toks_(tokenize(source)) {}

    Program program() {
        Program prog;
        while (!at_end()) {
            if (peek().is_keyword("class")) {
                prog.declarations.emplace_back(type_decl());
            } else if (peek().is_keyword("aspect")) {
                prog.declarations.emplace_back(aspect_decl());
            } else if (peek().is_keyword("precedence")) {
                const Token kw = advance();
                if (prog.precedence)
                    throw ParseError(kw.line, kw.col, "duplicate precedence directive");
                prog.precedence_pos = pos(kw);
                std::vector<std::string> names{ident("aspect name")};
                while (accept_symbol(",")) names.push_back(ident("aspect name"));
                expect_symbol(";");
                prog.precedence = std::move(names);
            } else {
                fail({"'class'", "'aspect'", "'precedence'", "end of input"});
            }
        }
        return prog;
    }

private:
    std::vector<Token> toks_;
    std::size_t cur_ = 0;

    static SourcePos pos(const Token& t) { return {t.line, t.col}; }

    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(cur_ + ahead, toks_.size() - 1)];
    }
    bool at_end() const { return peek().kind == TokenKind::EndOfInput; }
    Token advance() {
        Token t = peek();
        if (!at_end()) ++cur_;
        return t;
    }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        const Token& t = peek();
        const std::string found =
            t.kind == TokenKind::EndOfInput ? std::string("end of input") : "'" + t.lexeme + "'";
        throw ParseError(t.line, t.col, std::move(expected), found);
    }

    bool accept_symbol(std::string_view s) {
        if (!peek().is_symbol(s)) return false;
        ++cur_;
        return true;
    }
    Token expect_symbol(std::string_view s) {
        if (!peek().is_symbol(s)) fail({"'" + std::string(s) + "'"});
        return advance();
    }
    Token expect_keyword(std::string_view s) {
        if (!peek().is_keyword(s)) fail({"'" + std::string(s) + "'"});
        return advance();
    }
    std::string ident(const char* what) {
        if (peek().kind != TokenKind::Identifier) fail({what});
        return advance().lexeme;
    }
    int integer() {
        if (peek().kind != TokenKind::Integer) fail({"integer"});
        const Token t = advance();
        try {
            return std::stoi(t.lexeme);
        } catch (const std::out_of_range&) {
            throw ParseError(t.line, t.col, "integer out of range");
        }
    }
    // Optional `()` after a pointcut name, as in AspectJ's `name()`.
    void empty_parens() {
        if (peek().is_symbol("(") && peek(1).is_symbol(")")) cur_ += 2;
    }

    TypeDecl type_decl() {
        const Token kw = expect_keyword("class");
        TypeDecl t;
        t.pos = pos(kw);
        t.name = ident("type name");
        expect_symbol("{");
        while (!peek().is_symbol("}")) {
            if (peek().kind != TokenKind::Identifier && !peek().is_keyword("@prop"))
                fail({"method", "'@prop'", "'}'"});
            t.methods.push_back(method_decl());
        }
        expect_symbol("}");
        return t;
    }

    MethodDecl method_decl() {
        MethodDecl m;
        m.pos = pos(peek());
        while (peek().is_keyword("@prop")) {
            advance();
            expect_symbol("(");
            m.annotations.insert(ident("proposition name"));
            expect_symbol(")");
        }
        m.name = ident("method name");
        expect_symbol("(");
        if (peek().kind == TokenKind::Integer) m.arity = integer();
        expect_symbol(")");
        m.body = block();
        return m;
    }

    Block block() {
        expect_symbol("{");
        Block out;
        while (!peek().is_symbol("}")) out.push_back(statement());
        expect_symbol("}");
        return out;
    }

    CallExpr call_expr() {
        CallExpr c;
        c.pos = pos(peek());
        c.receiver = ident("receiver name");
        expect_symbol(".");
        c.method = ident("method name");
        expect_symbol("(");
        if (peek().kind == TokenKind::Integer) c.arg_count = integer();
        expect_symbol(")");
        return c;
    }

    Condition condition() {
        if (peek().kind == TokenKind::Identifier && peek(1).is_symbol(".")) return call_expr();
        return CondLabel{ident("condition")};
    }

    Stmt statement() {
        const Token& t = peek();
        Stmt s;
        s.pos = pos(t);
        if (t.kind == TokenKind::Identifier) {
            s.node = call_expr();
            expect_symbol(";");
        } else if (t.is_keyword("if")) {
            advance();
            expect_symbol("(");
            IfStmt st;
            st.cond = condition();
            expect_symbol(")");
            st.then_branch = block();
            if (peek().is_keyword("else")) {
                advance();
                st.else_branch = block();
            }
            s.node = std::move(st);
        } else if (t.is_keyword("while")) {
            advance();
            expect_symbol("(");
            WhileStmt st;
            st.cond = condition();
            expect_symbol(")");
            st.body = block();
            s.node = std::move(st);
        } else if (t.is_keyword("throw")) {
            advance();
            s.node = ThrowStmt{ident("exception name")};
            expect_symbol(";");
        } else if (t.is_keyword("return")) {
            advance();
            s.node = ReturnStmt{};
            expect_symbol(";");
        } else if (t.is_keyword("atomic")) {
            advance();
            s.node = AtomicStmt{ident("action label")};
            expect_symbol(";");
        } else if (t.is_keyword("proceed")) {
            advance();
            expect_symbol("(");
            expect_symbol(")");
            expect_symbol(";");
            s.node = ProceedStmt{};
        } else {
            fail({"call", "'if'", "'while'", "'throw'", "'return'", "'atomic'", "'proceed'", "'}'"});
        }
        return s;
    }

    // Consecutive, whitespace-free run of identifiers and `*`.
    std::string glob() {
        const auto glob_token = [](const Token& t) {
            return t.kind == TokenKind::Identifier || t.is_symbol("*");
        };
        if (!glob_token(peek())) fail({"name pattern"});
        std::string out = advance().lexeme;
        while (glob_token(peek()) && toks_[cur_ - 1].adjacent_to(peek())) out += advance().lexeme;
        return out;
    }

    CallPattern pattern() {
        // A leading `*` separated by whitespace is the (ignored) return type.
        if (peek().is_symbol("*") && !peek().adjacent_to(peek(1))) advance();
        CallPattern p;
        p.receiver_glob = glob();
        expect_symbol(".");
        p.method_glob = glob();
        expect_symbol("(");
        if (accept_symbol("..")) {
            p.arity.reset();
        } else if (peek().kind == TokenKind::Integer) {
            p.arity = integer();
        } else {
            p.arity = 0;
        }
        expect_symbol(")");
        return p;
    }

    CallPattern call_pattern() {
        expect_keyword("call");
        expect_symbol("(");
        auto p = pattern();
        expect_symbol(")");
        return p;
    }

    AspectDecl aspect_decl() {
        const Token kw = expect_keyword("aspect");
        AspectDecl a;
        a.pos = pos(kw);
        a.name = ident("aspect name");
        expect_symbol("{");
        while (!peek().is_symbol("}")) {
            const Token& t = peek();
            if (t.is_keyword("pointcut")) {
                advance();
                PointcutDecl pc;
                pc.pos = pos(t);
                pc.name = ident("pointcut name");
                empty_parens();
                expect_symbol(":");
                pc.pattern = call_pattern();
                expect_symbol(";");
                a.pointcuts.push_back(std::move(pc));
            } else if (t.is_keyword("before") || t.is_keyword("after") || t.is_keyword("around")) {
                AdviceDecl adv;
                adv.pos = pos(t);
                adv.kind = t.lexeme == "before"  ? AdviceKind::Before
                           : t.lexeme == "after" ? AdviceKind::After
                                                 : AdviceKind::Around;
                advance();
                expect_symbol("(");
                expect_symbol(")");
                expect_symbol(":");
                if (peek().is_keyword("call")) {
                    adv.target = call_pattern();
                } else {
                    adv.target = PointcutRef{ident("pointcut name")};
                    empty_parens();
                }
                adv.body = block();
                a.advice.push_back(std::move(adv));
            } else {
                fail({"'pointcut'", "'before'", "'after'", "'around'", "'}'"});
            }
        }
        expect_symbol("}");
        return a;
    }
};

inline void collect_proceeds(const Block& body, std::vector<const Stmt*>& out) {
    for (const auto& s : body) {
        std::visit(overloaded{
                       [&](const ProceedStmt&) { out.push_back(&s); },
                       [&](const IfStmt& st) {
                           collect_proceeds(st.then_branch, out);
                           if (st.else_branch) collect_proceeds(*st.else_branch, out);
                       },
                       [&](const WhileStmt& st) { collect_proceeds(st.body, out); },
                       [](const auto&) {},
                   },
                   s.node);
    }
}

inline std::vector<const Stmt*> proceeds_in(const Block& body) {
    std::vector<const Stmt*> out;
    collect_proceeds(body, out);
    return out;
}

} // namespace detail

/// Checks the Program invariants: unique names at every level, resolvable
/// pointcut references, `proceed` placement and the precedence directive.
inline void validate(const Program& prog) {
    std::set<std::string> decl_names;
    for (const auto& d : prog.declarations) {
        const auto p = pos_of(d);
        if (!decl_names.insert(name_of(d)).second) throw DuplicateName(name_of(d), p.line, p.col);
    }
    for (const auto* t : prog.types()) {
        std::set<std::string> seen;
        for (const auto& m : t->methods) {
            if (!seen.insert(m.name).second) throw DuplicateName(m.name, m.pos.line, m.pos.col);
            if (const auto found = detail::proceeds_in(m.body); !found.empty())
                throw ParseError(found[0]->pos.line, found[0]->pos.col,
                                 "proceed() outside around advice");
        }
    }
    for (const auto* a : prog.aspects()) {
        std::set<std::string> seen;
        for (const auto& pc : a->pointcuts)
            if (!seen.insert(pc.name).second) throw DuplicateName(pc.name, pc.pos.line, pc.pos.col);
        for (const auto& adv : a->advice) {
            if (const auto* ref = std::get_if<PointcutRef>(&adv.target); ref && !a->find_pointcut(ref->name))
                throw UnknownPointcut(ref->name, adv.pos.line, adv.pos.col);
            const auto found = detail::proceeds_in(adv.body);
            if (adv.kind != AdviceKind::Around && !found.empty())
                throw ParseError(found[0]->pos.line, found[0]->pos.col,
                                 "proceed() in " + std::string(to_string(adv.kind)) + " advice");
            if (found.size() > 1)
                throw ParseError(found[1]->pos.line, found[1]->pos.col,
                                 "around advice may proceed() at most once");
        }
    }
    if (prog.precedence) {
        std::set<std::string> seen;
        for (const auto& n : *prog.precedence) {
            if (!seen.insert(n).second)
                throw DuplicateName(n, prog.precedence_pos.line, prog.precedence_pos.col);
            if (!prog.find_aspect(n)) throw PrecedenceError(n);
        }
    }
}

/// Parses and validates one source text.
inline Program parse(std::string_view source) {
    detail::Parser p(source);
    Program prog = p.program();
    validate(prog);
    return prog;
}

} // namespace osm
