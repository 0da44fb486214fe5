#include "mtm/momentum/momentum.hpp"

#include "mtm/core/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace mtm::momentum {

namespace {

bool is_distance_feature(const std::string& name) { return name.find("distance") != std::string::npos; }

void check_unit_weights(const std::vector<double>& v, const char* what) {
    double sum = 0.0;
    for (double x : v) {
        if (!(x >= 0.0)) throw InvariantError(std::string(what) + " weights must be non-negative");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InvariantError(std::string(what) + " weights must sum to 1");
}

} // namespace

void IndicatorWeights::validate() const {
    if (g.empty()) throw InvariantError("indicator weights are empty");
    if (g_bar.size() != g.size() || k.size() != g.size()) throw ShapeError("indicator weight vectors differ in length");
    check_unit_weights(g, "own");
    check_unit_weights(g_bar, "opponent");
    if (!(d > 0.0 && d <= 1.0)) throw InvariantError("limiting factor d must lie in (0, 1]");
    for (double e : k) {
        if (e != 1.0 && e != 2.0) throw InvariantError("exponent k must be 1 or 2");
    }
}

IndicatorWeights IndicatorWeights::from_ahp(const AhpResult& own, const AhpResult& opponent,
                                            const FeatureSchema& schema, double d) {
    if (own.weights.size() != schema.size() || opponent.weights.size() != schema.size()) {
        throw ShapeError("AHP order differs from the feature count");
    }
    IndicatorWeights w;
    w.g = own.weights;
    w.g_bar = opponent.weights;
    w.d = d;
    for (const auto& f : schema.features()) w.k.push_back(is_distance_feature(f.name) ? 2.0 : 1.0);
    w.validate();
    return w;
}

IndicatorWeights IndicatorWeights::defaults(const FeatureSchema& schema) {
    auto own = AhpMatrix::default_own();
    auto opp = AhpMatrix::default_opponent();
    // Reorder the shipped matrices to the schema's feature order.
    std::vector<std::size_t> perm;
    for (const auto& f : schema.features()) {
        const auto& names = own.names();
        const auto it = std::find(names.begin(), names.end(), f.name);
        if (it == names.end()) throw ConfigError("no default AHP judgement for feature '" + f.name + "'");
        perm.push_back(static_cast<std::size_t>(it - names.begin()));
    }
    return from_ahp(ahp_weights(own.permuted(perm)), ahp_weights(opp.permuted(perm)), schema);
}

double indicator_weight(std::size_t z, std::size_t t, double r, const IndicatorWeights& w, IndicatorSide side) {
    const double g = side == IndicatorSide::Own ? w.g.at(z) : w.g_bar.at(z);
    return w.d * g * w.k.at(z) * std::log(std::max(r, kLogFloor)) + 1.0 / (static_cast<double>(t) + 1.0);
}

double momentum_at(std::span<const double> xi, std::span<const double> xj, std::span<const double> ri,
                   std::span<const double> rj, std::size_t t, const IndicatorWeights& w, double m_ij) {
    const double decay = 1.0 / (static_cast<double>(t) + 1.0);
    double sum = 0.0;
    for (std::size_t z = 0; z < xi.size(); ++z) {
        const double di = w.d * w.g[z] * w.k[z] * std::log(std::max(ri[z], kLogFloor)) + decay;
        const double dj = w.d * w.g_bar[z] * w.k[z] * std::log(std::max(rj[z], kLogFloor)) + decay;
        sum += di * xi[z] - dj * xj[z];
    }
    return m_ij * sum;
}

MomentumSeries momentum(const MultivariateSeries& xi, const MultivariateSeries& xj, const IndicatorWeights& w,
                        double m_ij, const std::string& i, const std::string& j, const MultivariateSeries* raw_i,
                        const MultivariateSeries* raw_j) {
    if (xi.rows() != xj.rows() || xi.cols() != xj.cols()) throw ShapeError("player series differ in shape");
    if (xi.cols() != w.size()) throw ShapeError("feature count differs from the weight count");
    const MultivariateSeries& ri = raw_i ? *raw_i : xi;
    const MultivariateSeries& rj = raw_j ? *raw_j : xj;
    if (ri.rows() != xi.rows() || ri.cols() != xi.cols() || rj.rows() != xj.rows() || rj.cols() != xj.cols()) {
        throw ShapeError("raw series differ in shape from the reconstructed series");
    }
    MomentumSeries out{std::vector<double>(xi.rows()), i, j};
    for (std::size_t t = 0; t < xi.rows(); ++t) {
        out.values[t] = momentum_at(xi.row(t), xj.row(t), ri.row(t), rj.row(t), t, w, m_ij);
    }
    return out;
}

MomentumSeries momentum(const MultivariateSeries& xi, const MultivariateSeries& xj, const IndicatorWeights& w,
                        const PressureMatrix& m, const std::string& i, const std::string& j) {
    return momentum(xi, xj, w, m.at(i, j), i, j);
}

std::string weights_json(const AhpResult& own, const AhpResult& opponent, const std::vector<std::string>& names) {
    auto block = [&](const AhpResult& r) {
        nlohmann::ordered_json b;
        nlohmann::ordered_json weights = nlohmann::ordered_json::object();
        for (std::size_t z = 0; z < r.weights.size() && z < names.size(); ++z) weights[names[z]] = r.weights[z];
        b["weights"] = weights;
        b["lambda_max"] = r.lambda_max;
        b["consistency_index"] = r.consistency_index;
        b["consistency_ratio"] = r.consistency_ratio;
        b["iterations"] = r.iterations;
        return b;
    };
    nlohmann::ordered_json j;
    j["own"] = block(own);
    j["opponent"] = block(opponent);
    return j.dump(2);
}

} // namespace mtm::momentum
