#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "osm/error.hpp"

namespace osm {

enum class TokenKind { Keyword, Identifier, Integer, Symbol, EndOfInput };

struct Token {
    TokenKind kind = TokenKind::EndOfInput;
    std::string lexeme;
    int line = 1;
    int col = 1;

    bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
    bool is_symbol(std::string_view text) const { return is(TokenKind::Symbol, text); }
    bool is_keyword(std::string_view text) const { return is(TokenKind::Keyword, text); }

    /// True when `next` starts immediately after this token on the same line.
    bool adjacent_to(const Token& next) const {
        return next.line == line &&
               next.col == col + static_cast<int>(lexeme.size());
    }
};

inline constexpr std::array<std::string_view, 16> kKeywords = {
    "class",  "aspect", "pointcut", "before",  "after",  "around",     "call",  "if",
    "else",   "while",  "throw",    "return",  "atomic", "proceed",    "precedence", "@prop",
};

inline bool is_keyword(std::string_view word) {
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

namespace detail {

inline bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
inline bool digit(char c) { return c >= '0' && c <= '9'; }

// Length of the UTF-8 sequence starting with `lead` (1 for invalid leads).
inline std::size_t utf8_length(unsigned char lead) {
    if (lead >= 0xF0 && lead < 0xF8) return 4;
    if (lead >= 0xE0) return lead < 0xF0 ? 3 : 1;
    if (lead >= 0xC0) return 2;
    return 1;
}

} // namespace detail

/// Splits mini-DSL source into tokens. Whitespace and `//` comments are
/// dropped; identifiers may contain interior hyphens (`log-start`). The end
/// token sits on the last character of the input (1:1 for empty input).
inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    int last_line = 1;
    int last_col = 1;
    std::size_t i = 0;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            last_line = line;
            last_col = col;
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto emit = [&](TokenKind kind, std::size_t len) {
        out.push_back(Token{kind, std::string(src.substr(i, len)), line, col});
        advance(len);
    };

    while (i < src.size()) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (detail::ident_start(c)) {
            std::size_t j = i + 1;
            while (j < src.size()) {
                if (detail::ident_char(src[j])) {
                    ++j;
                } else if (src[j] == '-' && j + 1 < src.size() && detail::ident_char(src[j + 1])) {
                    j += 2;
                } else {
                    break;
                }
            }
            const auto word = src.substr(i, j - i);
            emit(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, j - i);
            continue;
        }
        if (detail::digit(c)) {
            std::size_t j = i;
            while (j < src.size() && detail::digit(src[j])) ++j;
            emit(TokenKind::Integer, j - i);
            continue;
        }
        if (c == '@' && src.substr(i, 5) == "@prop" &&
            (i + 5 == src.size() || !detail::ident_char(src[i + 5]))) {
            emit(TokenKind::Keyword, 5);
            continue;
        }
        if (c == '.' && i + 1 < src.size() && src[i + 1] == '.') {
            emit(TokenKind::Symbol, 2);
            continue;
        }
        switch (c) {
        case '{': case '}': case '(': case ')': case ';':
        case ':': case ',': case '.': case '*':
            emit(TokenKind::Symbol, 1);
            continue;
        default:
            break;
        }
        const auto len = std::min(detail::utf8_length(static_cast<unsigned char>(c)), src.size() - i);
        throw LexError(line, col, std::string(src.substr(i, len)));
    }

    Token end;
    end.kind = TokenKind::EndOfInput;
    end.line = src.empty() ? 1 : last_line;
    end.col = src.empty() ? 1 : last_col;
    out.push_back(end);
    return out;
}

} // namespace osm
