#pragma once

#include "mtm/core/records.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mtm::eval {

struct EloConfig {
    double initial = 1500.0;
    double k = 32.0;
    double base = 10.0;
    double scale = 400.0;

    void validate() const;
};

/// 1 / (1 + base^((r_b - r_a) / scale)).
double elo_predict(double r_a, double r_b, const EloConfig& cfg = {});

/// r' = r + K (score - E); the sum of the two ratings is unchanged.
std::pair<double, double> elo_update(double r_a, double r_b, double score_a, const EloConfig& cfg = {});

class EloRatings {
public:
    explicit EloRatings(EloConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }
    double rating(const std::string& player) const;
    /// Updates both players for a result of `a` against `b`.
    void record(const std::string& a, const std::string& b, double score_a);
    double predict(const std::string& a, const std::string& b) const;
    const EloConfig& config() const { return cfg_; }

private:
    EloConfig cfg_;
    std::map<std::string, double> ratings_;
};

struct LogisticConfig {
    double learning_rate = 0.5;
    std::size_t epochs = 300;
    double l2 = 1e-4;
    std::uint64_t seed = 7;
};

/// Standardised linear model on log-loss; weights[0] is the intercept.
struct LogisticModel {
    std::vector<double> weights;
    std::vector<double> mean;
    std::vector<double> scale;

    double predict_proba(std::span<const double> x) const;
};

/// Full-batch gradient descent from zero weights. Throws EmptyInputError on
/// no rows and DivergenceError on a non-finite loss.
LogisticModel logistic_train(const std::vector<std::vector<double>>& features, std::span<const int> labels,
                             const LogisticConfig& cfg = {});

/// The 18 raw feature columns of a record: the eight per-player statistics
/// of player 1, then of player 2, then server and point victor as
/// player-1 indicators.
std::vector<double> record_features(const MatchPointRecord& r);

} // namespace mtm::eval
