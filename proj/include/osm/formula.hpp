#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "osm/error.hpp"

namespace osm {

enum class Op { True, False, Atom, Not, And, Or, Implies, Iff, EX, AX, EF, AF, EG, AG, EU, AU };

/// Propositional or CTL formula tree. Binary operators (and EU/AU) have two
/// arguments, unary ones one, leaves none.
struct Formula {
    Op op = Op::True;
    std::string atom;
    std::vector<Formula> args;
    bool operator==(const Formula&) const = default;

    static Formula constant(bool v) { return {v ? Op::True : Op::False, {}, {}}; }
    static Formula var(std::string name) { return {Op::Atom, std::move(name), {}}; }
    static Formula unary(Op op, Formula a) { return {op, {}, {std::move(a)}}; }
    static Formula binary(Op op, Formula a, Formula b) { return {op, {}, {std::move(a), std::move(b)}}; }

    const Formula& lhs() const { return args.at(0); }
    const Formula& rhs() const { return args.at(1); }

    bool temporal() const {
        switch (op) {
        case Op::EX: case Op::AX: case Op::EF: case Op::AF:
        case Op::EG: case Op::AG: case Op::EU: case Op::AU:
            return true;
        default:
            return false;
        }
    }
};

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
    if (f.op == Op::Atom) out.insert(f.atom);
    for (const auto& a : f.args) collect_atoms(a, out);
}

inline std::set<std::string> atoms_of(const Formula& f) {
    std::set<std::string> out;
    collect_atoms(f, out);
    return out;
}

inline bool has_temporal(const Formula& f) {
    if (f.temporal()) return true;
    for (const auto& a : f.args)
        if (has_temporal(a)) return true;
    return false;
}

/// Canonical fully-parenthesized ASCII rendering; reparses to an equal tree.
inline std::string to_string(const Formula& f) {
    switch (f.op) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Atom: return f.atom;
    case Op::Not: return "!" + to_string(f.lhs());
    case Op::And: return "(" + to_string(f.lhs()) + " & " + to_string(f.rhs()) + ")";
    case Op::Or: return "(" + to_string(f.lhs()) + " | " + to_string(f.rhs()) + ")";
    case Op::Implies: return "(" + to_string(f.lhs()) + " -> " + to_string(f.rhs()) + ")";
    case Op::Iff: return "(" + to_string(f.lhs()) + " <-> " + to_string(f.rhs()) + ")";
    case Op::EX: return "EX " + to_string(f.lhs());
    case Op::AX: return "AX " + to_string(f.lhs());
    case Op::EF: return "EF " + to_string(f.lhs());
    case Op::AF: return "AF " + to_string(f.lhs());
    case Op::EG: return "EG " + to_string(f.lhs());
    case Op::AG: return "AG " + to_string(f.lhs());
    case Op::EU: return "E[" + to_string(f.lhs()) + " U " + to_string(f.rhs()) + "]";
    case Op::AU: return "A[" + to_string(f.lhs()) + " U " + to_string(f.rhs()) + "]";
    }
    return "?";
}

namespace detail {

// Precedence, loosest first: <->, ->, |, &, then the unaries. -> and <->
// associate to the right.
class FormulaParser {
public:
    FormulaParser(std::string_view text, bool temporal) : text_(text), temporal_(temporal) {}

    Formula run() {
        Formula f = iff();
        skip_ws();
        if (pos_ < text_.size()) fail("operator or end of formula");
        return f;
    }

private:
    std::string_view text_;
    bool temporal_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected) const {
        throw FormulaParseError(pos_ + 1, expected, std::string(text_));
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool accept(std::string_view tok) {
        skip_ws();
        if (text_.substr(pos_, tok.size()) != tok) return false;
        pos_ += tok.size();
        return true;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) fail("'" + std::string(tok) + "'");
    }

    static bool atom_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }
    static bool atom_char(char c) {
        return atom_start(c) || (c >= '0' && c <= '9') || c == '.' || c == ':' || c == '-';
    }

    // Scans an atom-shaped word without consuming it. A '-' that begins
    // '->' terminates the word.
    std::string_view peek_word() {
        skip_ws();
        if (pos_ >= text_.size() || !atom_start(text_[pos_])) return {};
        std::size_t j = pos_ + 1;
        while (j < text_.size() && atom_char(text_[j])) {
            if (text_[j] == '-' && j + 1 < text_.size() && text_[j + 1] == '>') break;
            ++j;
        }
        return text_.substr(pos_, j - pos_);
    }

    // True when the next non-blank character after the current word is '['.
    bool bracket_follows(std::size_t word_len) const {
        std::size_t j = pos_ + word_len;
        while (j < text_.size() && (text_[j] == ' ' || text_[j] == '\t')) ++j;
        return j < text_.size() && text_[j] == '[';
    }

    Formula iff() {
        Formula lhs = implies();
        if (accept("<->")) return Formula::binary(Op::Iff, std::move(lhs), iff());
        return lhs;
    }

    Formula implies() {
        Formula lhs = disjunction();
        if (accept("->")) return Formula::binary(Op::Implies, std::move(lhs), implies());
        return lhs;
    }

    Formula disjunction() {
        Formula lhs = conjunction();
        while (accept("|")) lhs = Formula::binary(Op::Or, std::move(lhs), conjunction());
        return lhs;
    }

    Formula conjunction() {
        Formula lhs = unary();
        while (accept("&")) lhs = Formula::binary(Op::And, std::move(lhs), unary());
        return lhs;
    }

    Formula unary() {
        if (accept("!")) return Formula::unary(Op::Not, unary());
        const auto word = peek_word();
        if (temporal_) {
            static constexpr std::pair<std::string_view, Op> kUnary[] = {
                {"EX", Op::EX}, {"AX", Op::AX}, {"EF", Op::EF},
                {"AF", Op::AF}, {"EG", Op::EG}, {"AG", Op::AG},
            };
            for (const auto& [kw, op] : kUnary) {
                if (word == kw) {
                    pos_ += word.size();
                    return Formula::unary(op, unary());
                }
            }
            if ((word == "E" || word == "A") && bracket_follows(word.size())) {
                const Op op = word == "E" ? Op::EU : Op::AU;
                pos_ += word.size();
                expect("[");
                Formula lhs = iff();
                if (peek_word() != "U") fail("'U'");
                pos_ += 1;
                Formula rhs = iff();
                expect("]");
                return Formula::binary(op, std::move(lhs), std::move(rhs));
            }
        }
        return primary();
    }

    Formula primary() {
        if (accept("(")) {
            Formula f = iff();
            expect(")");
            return f;
        }
        const auto word = peek_word();
        if (word.empty()) fail("atom, constant, '!' or '('");
        pos_ += word.size();
        if (word == "true") return Formula::constant(true);
        if (word == "false") return Formula::constant(false);
        return Formula::var(std::string(word));
    }
};

} // namespace detail

/// Propositional formula: atoms, true/false, ! & | -> <->.
inline Formula parse_prop(std::string_view text) { return detail::FormulaParser(text, false).run(); }

/// CTL formula: the propositional syntax plus AX EX AF EF AG EG, A[f U g], E[f U g].
inline Formula parse_ctl(std::string_view text) { return detail::FormulaParser(text, true).run(); }

} // namespace osm
