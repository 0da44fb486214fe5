#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mtm::momentum {

/// Reciprocal pairwise-comparison matrix over named criteria.
class AhpMatrix {
public:
    /// Row-major n x n; throws InvariantError unless A_ii = 1, A_ij > 0 and
    /// |A_ij * A_ji - 1| < 1e-9.
    AhpMatrix(std::vector<double> values, std::size_t n, std::vector<std::string> names = {});

    /// CSV: header `feature,<name>...`, then one row per criterion. Cells are
    /// numbers or fractions such as `1/3`.
    static AhpMatrix from_csv(std::istream& in);
    static AhpMatrix from_csv(const std::filesystem::path& path);

    /// Shipped defaults over the standard schema's ten features.
    static AhpMatrix default_own();
    static AhpMatrix default_opponent();

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
    const std::vector<std::string>& names() const { return names_; }

    /// Copy with rows and columns reordered: out(i, j) = A(perm[i], perm[j]).
    AhpMatrix permuted(const std::vector<std::size_t>& perm) const;

private:
    std::vector<double> values_;
    std::size_t n_;
    std::vector<std::string> names_;
};

struct AhpResult {
    std::vector<double> weights; ///< principal eigenvector, sums to 1
    double lambda_max = 0.0;
    double consistency_index = 0.0;
    double consistency_ratio = 0.0;
    std::size_t iterations = 0;
};

/// Saaty random index for matrices of order n (0 for n <= 2).
double random_index(std::size_t n);

/// Power iteration (tolerance 1e-10, at most 1000 iterations). Throws
/// InconsistencyError when CR exceeds `max_cr`.
AhpResult ahp_weights(const AhpMatrix& a, double max_cr = 0.1);

} // namespace mtm::momentum
