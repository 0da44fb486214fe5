#include "mtm/core/series.hpp"

#include "mtm/core/error.hpp"

#include <cmath>

namespace mtm {

MultivariateSeries::MultivariateSeries(std::vector<double> values,
                                       std::size_t rows,
                                       std::size_t cols,
                                       std::vector<double> time_index,
                                       std::vector<std::string> variable_names)
    : values_(std::move(values)),
      rows_(rows),
      cols_(cols),
      time_index_(std::move(time_index)),
      names_(std::move(variable_names)) {
    if (rows_ < 2) {
        throw InvariantError("series needs at least 2 time points, got " + std::to_string(rows_));
    }
    if (cols_ < 1) {
        throw InvariantError("series needs at least one variable");
    }
    if (values_.size() != rows_ * cols_) {
        throw ShapeError("series values hold " + std::to_string(values_.size()) +
                         " entries, expected " + std::to_string(rows_ * cols_));
    }
    if (time_index_.size() != rows_) {
        throw ShapeError("time index length does not match row count");
    }
    if (names_.size() != cols_) {
        throw ShapeError("variable name count does not match column count");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InvariantError("non-finite entry at row " + std::to_string(i / cols_) +
                                 ", column " + std::to_string(i % cols_));
        }
    }
    for (std::size_t t = 1; t < rows_; ++t) {
        if (!(time_index_[t] > time_index_[t - 1])) {
            throw InvariantError("time index not strictly increasing at row " + std::to_string(t));
        }
    }
}

MultivariateSeries MultivariateSeries::from_columns(const std::vector<std::vector<double>>& columns,
                                                    std::vector<double> time_index,
                                                    std::vector<std::string> variable_names) {
    const std::size_t cols = columns.size();
    const std::size_t rows = cols == 0 ? 0 : columns.front().size();
    std::vector<double> values(rows * cols);
    for (std::size_t d = 0; d < cols; ++d) {
        if (columns[d].size() != rows) {
            throw ShapeError("column " + std::to_string(d) + " has a different length");
        }
        for (std::size_t t = 0; t < rows; ++t) {
            values[t * cols + d] = columns[d][t];
        }
    }
    return MultivariateSeries(std::move(values), rows, cols, std::move(time_index),
                              std::move(variable_names));
}

std::vector<double> MultivariateSeries::column(std::size_t d) const {
    std::vector<double> out(rows_);
    for (std::size_t t = 0; t < rows_; ++t) {
        out[t] = values_[t * cols_ + d];
    }
    return out;
}

MultivariateSeries MultivariateSeries::with_values(std::vector<double> values) const {
    return MultivariateSeries(std::move(values), rows_, cols_, time_index_, names_);
}

} // namespace mtm
