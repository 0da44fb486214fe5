#include "mtm/momentum/ahp.hpp"

#include "mtm/core/csv.hpp"
#include "mtm/core/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mtm::momentum {

namespace {

constexpr const char* kDefaultOwn =
    "feature,p_sets,p_games,server,point_victor,p_ace,p_double_fault,p_break_pt_missed,p_break_pt_won,"
    "p_distance_run,psychological_factor\n"
    "p_sets,1,1/2,1/2,1/7,1/4,1/3,1/3,1/5,1,1/9\n"
    "p_games,2,1,1,1/4,1/2,1/2,1/2,1/3,2,1/5\n"
    "server,2,1,1,1/4,1/2,1/2,1/2,1/3,2,1/5\n"
    "point_victor,7,4,4,1,2,2,2,1,7,1\n"
    "p_ace,4,2,2,1/2,1,1,1,1,4,1/2\n"
    "p_double_fault,3,2,2,1/2,1,1,1,1/2,3,1/3\n"
    "p_break_pt_missed,3,2,2,1/2,1,1,1,1/2,3,1/3\n"
    "p_break_pt_won,5,3,3,1,1,2,2,1,5,1/2\n"
    "p_distance_run,1,1/2,1/2,1/7,1/4,1/3,1/3,1/5,1,1/9\n"
    "psychological_factor,9,5,5,1,2,3,3,2,9,1\n";

constexpr const char* kDefaultOpponent =
    "feature,p_sets,p_games,server,point_victor,p_ace,p_double_fault,p_break_pt_missed,p_break_pt_won,"
    "p_distance_run,psychological_factor\n"
    "p_sets,1,1/2,1/2,1/7,1/3,1/3,1/4,1/5,1,1/9\n"
    "p_games,2,1,1,1/4,1/2,1/2,1/2,1/3,2,1/5\n"
    "server,2,1,1,1/4,1/2,1/2,1/2,1/3,2,1/5\n"
    "point_victor,7,4,4,1,2,2,2,1,7,1\n"
    "p_ace,3,2,2,1/2,1,1,1,1/2,3,1/3\n"
    "p_double_fault,3,2,2,1/2,1,1,1,1/2,3,1/3\n"
    "p_break_pt_missed,4,2,2,1/2,1,1,1,1,4,1/2\n"
    "p_break_pt_won,5,3,3,1,2,2,1,1,5,1/2\n"
    "p_distance_run,1,1/2,1/2,1/7,1/3,1/3,1/4,1/5,1,1/9\n"
    "psychological_factor,9,5,5,1,3,3,2,2,9,1\n";

double parse_judgement(const std::string& cell) {
    const auto slash = cell.find('/');
    if (slash == std::string::npos) return parse_double(cell);
    const double num = parse_double(std::string_view(cell).substr(0, slash));
    const double den = parse_double(std::string_view(cell).substr(slash + 1));
    if (den == 0.0) throw std::invalid_argument("zero denominator");
    return num / den;
}

} // namespace

AhpMatrix::AhpMatrix(std::vector<double> values, std::size_t n, std::vector<std::string> names)
    : values_(std::move(values)), n_(n), names_(std::move(names)) {
    if (n_ == 0) throw InvariantError("AHP matrix is empty");
    if (values_.size() != n_ * n_) throw ShapeError("AHP matrix needs n*n entries");
    if (names_.empty()) {
        for (std::size_t i = 0; i < n_; ++i) names_.push_back("c" + std::to_string(i));
    }
    if (names_.size() != n_) throw ShapeError("AHP matrix needs one name per criterion");
    for (std::size_t i = 0; i < n_; ++i) {
        if ((*this)(i, i) != 1.0) throw InvariantError("AHP diagonal entry " + names_[i] + " is not 1");
        for (std::size_t j = 0; j < n_; ++j) {
            const double a = (*this)(i, j);
            if (!(a > 0.0) || !std::isfinite(a)) {
                throw InvariantError("AHP entry (" + names_[i] + ", " + names_[j] + ") must be positive");
            }
            if (std::abs(a * (*this)(j, i) - 1.0) >= 1e-9) {
                throw InvariantError("AHP entries (" + names_[i] + ", " + names_[j] + ") are not reciprocal");
            }
        }
    }
}

AhpMatrix AhpMatrix::from_csv(std::istream& in) {
    const CsvTable table = read_csv(in);
    const std::size_t n = table.header.size() - 1;
    if (table.header.size() < 2 || table.rows.size() != n) {
        throw ShapeError("AHP CSV must have a header and one row per criterion");
    }
    std::vector<std::string> names(table.header.begin() + 1, table.header.end());
    std::vector<double> values;
    values.reserve(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& row = table.rows[r];
        if (row.size() != n + 1) throw ParseError(r + 1, "expected " + std::to_string(n + 1) + " cells");
        if (row[0] != names[r]) throw ParseError(r + 1, "row label '" + row[0] + "' does not match header");
        for (std::size_t c = 1; c <= n; ++c) {
            try {
                values.push_back(parse_judgement(row[c]));
            } catch (const std::invalid_argument&) {
                throw ParseError(r + 1, "bad judgement '" + row[c] + "'");
            }
        }
    }
    return AhpMatrix(std::move(values), n, std::move(names));
}

AhpMatrix AhpMatrix::from_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open AHP matrix " + path.string());
    return from_csv(in);
}

AhpMatrix AhpMatrix::default_own() {
    std::istringstream in(kDefaultOwn);
    return from_csv(in);
}

AhpMatrix AhpMatrix::default_opponent() {
    std::istringstream in(kDefaultOpponent);
    return from_csv(in);
}

AhpMatrix AhpMatrix::permuted(const std::vector<std::size_t>& perm) const {
    if (perm.size() != n_) throw ShapeError("permutation size differs from matrix order");
    std::vector<double> v(n_ * n_);
    std::vector<std::string> names(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        names[i] = names_.at(perm[i]);
        for (std::size_t j = 0; j < n_; ++j) v[i * n_ + j] = (*this)(perm[i], perm[j]);
    }
    return AhpMatrix(std::move(v), n_, std::move(names));
}

double random_index(std::size_t n) {
    static constexpr double kRi[] = {0.0, 0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45,
                                     1.49, 1.51, 1.48, 1.56, 1.57, 1.59};
    if (n < std::size(kRi)) return kRi[n];
    return kRi[std::size(kRi) - 1];
}

AhpResult ahp_weights(const AhpMatrix& a, double max_cr) {
    const std::size_t n = a.size();
    AhpResult res;
    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    std::vector<double> av(n);
    for (std::size_t it = 1; it <= 1000; ++it) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += a(i, j) * v[j];
            av[i] = s;
            sum += s;
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double next = av[i] / sum;
            delta = std::max(delta, std::abs(next - v[i]));
            v[i] = next;
        }
        res.iterations = it;
        if (delta < 1e-10) break;
    }
    double lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += a(i, j) * v[j];
        lambda += s / v[i];
    }
    res.lambda_max = lambda / static_cast<double>(n);
    res.weights = std::move(v);
    if (n > 2) {
        res.consistency_index = std::max(0.0, (res.lambda_max - static_cast<double>(n)) / static_cast<double>(n - 1));
        res.consistency_ratio = res.consistency_index / random_index(n);
    }
    if (res.consistency_ratio > max_cr) throw InconsistencyError(res.consistency_ratio);
    return res;
}

} // namespace mtm::momentum
