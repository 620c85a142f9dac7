#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cges {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CyclicGraph : public Error {
public:
    CyclicGraph() : Error("graph contains a directed cycle") {}
};

class NoConsistentExtension : public Error {
public:
    NoConsistentExtension() : Error("PDAG admits no consistent DAG extension") {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

// Dataset loading
class DataError : public Error {
public:
    using Error::Error;
};
class RaggedRow : public DataError {
public:
    using DataError::DataError;
};
class EmptyColumn : public DataError {
public:
    using DataError::DataError;
};
class MissingValueFound : public DataError {
public:
    using DataError::DataError;
};
class CardinalityError : public DataError {
public:
    using DataError::DataError;
};

class ZeroInstances : public Error {
public:
    ZeroInstances() : Error("score normalization requires at least one instance") {}
};

class DegreeCapExceeded : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class VariableMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace cges
