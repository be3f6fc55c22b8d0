#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssdpp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: schema, parameters, data content that cannot be used.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public ConfigurationError {
public:
    ParseError(std::size_t row, std::string column, const std::string& what)
        : ConfigurationError(what), row_(row), column_(std::move(column)) {}

    std::size_t row() const { return row_; }
    const std::string& column() const { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

// Row indices are 1-based data rows (the header is row 0).
class MissingValue : public ParseError {
public:
    MissingValue(std::size_t row, std::string column)
        : ParseError(row, column,
                     "missing value at row " + std::to_string(row) + ", column '" + column + "'") {}
};

// A numeric subgroup whose target slice has fewer than two distinct values.
class DegenerateSubgroup : public Error {
public:
    using Error::Error;
};

// An argument outside the domain of a code-length function.
class DomainError : public Error {
public:
    using Error::Error;
};

// Oracle inputs exceeding the enumeration / quadrature budget.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace ssdpp
