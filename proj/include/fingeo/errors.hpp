#pragma once

#include <stdexcept>
#include <string>

namespace fingeo {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid construction parameters: non-prime characteristic, reducible
/// modulus, inconsistent spec declarations, bad ranks.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Operands belong to different field towers.
class FieldMismatchError : public Error {
public:
    using Error::Error;
};

/// Mathematically invalid operation: inversion of zero, dimension
/// mismatch, non-direct-sum projection frame.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A configured size cap (enumeration count, dual ambient dimension)
/// would be exceeded.
class CapError : public Error {
public:
    using Error::Error;
};

/// Text could not be parsed; carries a 0-based column offset and the
/// offending token when available.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t column, std::string token = {})
        : Error(what + " (column " + std::to_string(column) +
                (token.empty() ? std::string{} : ", near '" + token + "'") + ")"),
          column_(column),
          token_(std::move(token)) {}

    std::size_t column() const { return column_; }
    const std::string& token() const { return token_; }

private:
    std::size_t column_;
    std::string token_;
};

/// Violation of an internal contract that should be unreachable via the
/// public API; indicates a bug, not bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace fingeo
