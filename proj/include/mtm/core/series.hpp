#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mtm {

/// T x D real matrix of a match time series, row-major (one row per point).
///
/// Invariants (checked on construction): T >= 2, D >= 1, all entries finite,
/// time_index strictly increasing, one name per column.
class MultivariateSeries {
public:
    MultivariateSeries(std::vector<double> values,
                       std::size_t rows,
                       std::size_t cols,
                       std::vector<double> time_index,
                       std::vector<std::string> variable_names);

    /// Builds from column vectors of equal length.
    static MultivariateSeries from_columns(const std::vector<std::vector<double>>& columns,
                                           std::vector<double> time_index,
                                           std::vector<std::string> variable_names);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t t, std::size_t d) const { return values_[t * cols_ + d]; }
    std::span<const double> row(std::size_t t) const {
        return {values_.data() + t * cols_, cols_};
    }
    std::vector<double> column(std::size_t d) const;

    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& time_index() const { return time_index_; }
    const std::vector<std::string>& variable_names() const { return names_; }

    /// Same shape, time index and names with new values.
    MultivariateSeries with_values(std::vector<double> values) const;

    bool operator==(const MultivariateSeries&) const = default;

private:
    std::vector<double> values_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> time_index_;
    std::vector<std::string> names_;
};

} // namespace mtm
