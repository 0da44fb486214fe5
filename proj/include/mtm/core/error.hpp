#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mtm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input columns do not match the feature schema.
class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& column)
        : Error("schema error: missing column '" + column + "'"), column_(column) {}
    const std::string& column() const { return column_; }

private:
    std::string column_;
};

/// A cell could not be parsed; `row` is the 1-based data row index.
class ParseError : public Error {
public:
    ParseError(std::size_t row, const std::string& what)
        : Error("parse error at row " + std::to_string(row) + ": " + what), row_(row) {}
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

class InvariantError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Shapes or lengths of two structures disagree.
class ShapeError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

class NoJumpFound : public Error {
public:
    NoJumpFound() : Error("no jump found") {}
    explicit NoJumpFound(const std::string& why) : Error("no jump found: " + why) {}
};

class InconsistencyError : public Error {
public:
    explicit InconsistencyError(double ratio)
        : Error("AHP matrix inconsistent: CR = " + std::to_string(ratio) + " > 0.1"), ratio_(ratio) {}
    double consistency_ratio() const { return ratio_; }

private:
    double ratio_;
};

class UnknownPlayerError : public Error {
public:
    explicit UnknownPlayerError(const std::string& player)
        : Error("unknown player '" + player + "'"), player_(player) {}
    const std::string& player() const { return player_; }

private:
    std::string player_;
};

class DivergenceError : public Error {
public:
    explicit DivergenceError(std::size_t epoch)
        : Error("training diverged (non-finite loss) at epoch " + std::to_string(epoch)), epoch_(epoch) {}
    std::size_t epoch() const { return epoch_; }

private:
    std::size_t epoch_;
};

class CorruptFileError : public Error {
public:
    using Error::Error;
};

class VersionError : public Error {
public:
    using Error::Error;
};

class UnresolvedTieError : public Error {
public:
    using Error::Error;
};

} // namespace mtm
