#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace osm {

/// Base of every diagnostic raised by the toolchain.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string at(int line, int col, const std::string& msg) {
    std::ostringstream os;
    os << line << ':' << col << ": " << msg;
    return os.str();
}

inline std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// front end

class LexError : public Error {
public:
    LexError(int line, int col, std::string character)
        : Error(detail::at(line, col, "unexpected character '" + character + "'")),
          line(line), col(col), character(std::move(character)) {}
    int line;
    int col;
    std::string character;
};

class ParseError : public Error {
public:
    ParseError(int line, int col, std::vector<std::string> expected, const std::string& found)
        : Error(detail::at(line, col,
                           "expected " + describe(expected) + " but found " + found)),
          line(line), col(col), expected(std::move(expected)) {}

    // For semantic violations that have no meaningful expected-set.
    ParseError(int line, int col, const std::string& message)
        : Error(detail::at(line, col, message)), line(line), col(col) {}

    int line;
    int col;
    std::vector<std::string> expected;

private:
    static std::string describe(const std::vector<std::string>& expected) {
        if (expected.size() == 1) return expected.front();
        return "one of " + detail::join(expected, ", ");
    }
};

class DuplicateName : public Error {
public:
    DuplicateName(std::string name, int line, int col)
        : Error(detail::at(line, col, "duplicate name '" + name + "'")),
          name(std::move(name)), line(line), col(col) {}
    std::string name;
    int line;
    int col;
};

class UnknownPointcut : public ParseError {
public:
    UnknownPointcut(std::string name, int line, int col)
        : ParseError(line, col, "unknown pointcut '" + name + "'"), name(std::move(name)) {}
    std::string name;
};

// ---------------------------------------------------------------------------
// weaving

class PrecedenceError : public Error {
public:
    explicit PrecedenceError(std::string name)
        : Error("precedence directive names undeclared aspect '" + name + "'"),
          name(std::move(name)) {}
    PrecedenceError(std::string name, const std::string& message)
        : Error(message), name(std::move(name)) {}
    std::string name;
};

class AliasError : public Error {
public:
    explicit AliasError(std::string name)
        : Error("alias refers to unknown aspect '" + name + "'"), name(std::move(name)) {}
    std::string name;
};

// ---------------------------------------------------------------------------
// control flow

class UnknownMethod : public Error {
public:
    explicit UnknownMethod(std::string name)
        : Error("unknown method '" + name + "'"), name(std::move(name)) {}
    std::string name;
};

class RecursionError : public Error {
public:
    explicit RecursionError(std::vector<std::string> cycle)
        : Error("recursive inlining: " + detail::join(cycle, " -> ")), cycle(std::move(cycle)) {}
    std::vector<std::string> cycle;
};

class DepthError : public Error {
public:
    DepthError(std::string method, int limit)
        : Error("inline depth limit " + std::to_string(limit) + " exceeded at '" + method + "'"),
          method(std::move(method)), limit(limit) {}
    std::string method;
    int limit;
};

// ---------------------------------------------------------------------------
// models

class SchemaError : public Error {
public:
    using Error::Error;
};

class TotalityError : public Error {
public:
    explicit TotalityError(std::size_t state)
        : Error("state " + std::to_string(state) + " has no successor"), state(state) {}
    std::size_t state;
};

class EmptyInitialError : public Error {
public:
    EmptyInitialError() : Error("model has no initial state") {}
};

// ---------------------------------------------------------------------------
// logic

class FormulaParseError : public Error {
public:
    FormulaParseError(std::size_t position, std::string expected, const std::string& text)
        : Error("formula position " + std::to_string(position) + ": expected " + expected +
                " in '" + text + "'"),
          position(position), expected(std::move(expected)) {}
    std::size_t position; // 1-based column
    std::string expected;
};

class UnknownAtom : public Error {
public:
    explicit UnknownAtom(std::string name)
        : Error("unknown atom '" + name + "'"), name(std::move(name)) {}
    std::string name;
};

// ---------------------------------------------------------------------------
// pipeline

class EmptyTrace : public Error {
public:
    explicit EmptyTrace(std::size_t index)
        : Error("trace " + std::to_string(index) + " is empty"), index(index) {}
    std::size_t index;
};

/// Malformed property file line.
class PropertyFileError : public Error {
public:
    PropertyFileError(int line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line(line) {}
    int line;
};

/// Wraps a diagnostic with the input file it came from.
class InputError : public Error {
public:
    using Error::Error;
};

} // namespace osm
