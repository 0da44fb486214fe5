#include "mtm/eval/baselines.hpp"

#include "mtm/core/error.hpp"

#include <cmath>

namespace mtm::eval {

void EloConfig::validate() const {
    if (!(k > 0.0)) throw ConfigError("ELO K-factor must be > 0");
    if (!(scale > 0.0)) throw ConfigError("ELO scale must be > 0");
    if (!(base > 1.0)) throw ConfigError("ELO logistic base must be > 1");
}

double elo_predict(double r_a, double r_b, const EloConfig& cfg) {
    return 1.0 / (1.0 + std::pow(cfg.base, (r_b - r_a) / cfg.scale));
}

std::pair<double, double> elo_update(double r_a, double r_b, double score_a, const EloConfig& cfg) {
    const double e_a = elo_predict(r_a, r_b, cfg);
    const double delta = cfg.k * (score_a - e_a);
    return {r_a + delta, r_b - delta};
}

double EloRatings::rating(const std::string& player) const {
    const auto it = ratings_.find(player);
    return it == ratings_.end() ? cfg_.initial : it->second;
}

void EloRatings::record(const std::string& a, const std::string& b, double score_a) {
    const auto [ra, rb] = elo_update(rating(a), rating(b), score_a, cfg_);
    ratings_[a] = ra;
    ratings_[b] = rb;
}

double EloRatings::predict(const std::string& a, const std::string& b) const {
    return elo_predict(rating(a), rating(b), cfg_);
}

double LogisticModel::predict_proba(std::span<const double> x) const {
    double z = weights[0];
    for (std::size_t i = 0; i < x.size(); ++i) z += weights[i + 1] * (x[i] - mean[i]) / scale[i];
    return 1.0 / (1.0 + std::exp(-z));
}

LogisticModel logistic_train(const std::vector<std::vector<double>>& features, std::span<const int> labels,
                             const LogisticConfig& cfg) {
    if (features.empty()) throw EmptyInputError("logistic regression needs at least one row");
    if (features.size() != labels.size()) throw ShapeError("feature and label counts differ");
    const std::size_t n = features.size();
    const std::size_t d = features[0].size();
    LogisticModel m;
    m.mean.assign(d, 0.0);
    m.scale.assign(d, 0.0);
    for (const auto& row : features) {
        if (row.size() != d) throw ShapeError("feature rows differ in length");
        for (std::size_t k = 0; k < d; ++k) m.mean[k] += row[k];
    }
    for (double& v : m.mean) v /= static_cast<double>(n);
    for (const auto& row : features) {
        for (std::size_t k = 0; k < d; ++k) m.scale[k] += (row[k] - m.mean[k]) * (row[k] - m.mean[k]);
    }
    for (double& v : m.scale) {
        v = std::sqrt(v / static_cast<double>(n));
        if (v < 1e-12) v = 1.0; // constant column: leave it centred only
    }
    std::vector<std::vector<double>> z(n, std::vector<double>(d));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) z[i][k] = (features[i][k] - m.mean[k]) / m.scale[k];
    }
    m.weights.assign(d + 1, 0.0);
    std::vector<double> grad(d + 1);
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = m.weights[0];
            for (std::size_t k = 0; k < d; ++k) s += m.weights[k + 1] * z[i][k];
            const double p = 1.0 / (1.0 + std::exp(-s));
            const double y = labels[i] != 0 ? 1.0 : 0.0;
            // log(1 + e^s) - y s, evaluated without overflow.
            loss += (s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s))) - y * s;
            const double e = p - y;
            grad[0] += e;
            for (std::size_t k = 0; k < d; ++k) grad[k + 1] += e * z[i][k];
        }
        loss /= static_cast<double>(n);
        for (std::size_t k = 1; k <= d; ++k) loss += 0.5 * cfg.l2 * m.weights[k] * m.weights[k];
        if (!std::isfinite(loss)) throw DivergenceError(epoch);
        for (std::size_t k = 0; k <= d; ++k) {
            double g = grad[k] / static_cast<double>(n);
            if (k > 0) g += cfg.l2 * m.weights[k];
            m.weights[k] -= cfg.learning_rate * g;
        }
    }
    return m;
}

std::vector<double> record_features(const MatchPointRecord& r) {
    std::vector<double> x;
    x.reserve(18);
    for (Side s : {Side::P1, Side::P2}) {
        const auto& p = r.of(s);
        x.insert(x.end(), {p.sets, p.games, p.ace, p.double_fault, p.break_pt_missed, p.break_pt_won,
                           p.distance_run, p.psychological_factor});
    }
    x.push_back(r.server == Side::P1 ? 1.0 : 0.0);
    x.push_back(r.point_victor == Side::P1 ? 1.0 : 0.0);
    return x;
}

} // namespace mtm::eval
