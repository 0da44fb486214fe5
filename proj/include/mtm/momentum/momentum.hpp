#pragma once

#include "mtm/core/schema.hpp"
#include "mtm/core/series.hpp"
#include "mtm/momentum/ahp.hpp"
#include "mtm/momentum/pressure.hpp"

#include <span>
#include <string>
#include <vector>

namespace mtm::momentum {

/// Per-feature weights of the time-decayed indicator terms.
struct IndicatorWeights {
    std::vector<double> g;     ///< own-effect importance, sums to 1
    std::vector<double> g_bar; ///< opponent-effect importance, sums to 1
    std::vector<double> k;     ///< per-feature exponent, 1 or 2
    double d = 1.0;            ///< limiting factor in (0, 1]

    std::size_t size() const { return g.size(); }
    void validate() const;

    /// g and g_bar from the two AHP results; k = 2 for distance features.
    static IndicatorWeights from_ahp(const AhpResult& own, const AhpResult& opponent, const FeatureSchema& schema,
                                     double d = 1.0);
    /// Shipped default AHP matrices over the standard schema.
    static IndicatorWeights defaults(const FeatureSchema& schema = FeatureSchema::standard());
};

enum class IndicatorSide { Own, Opponent };

inline constexpr double kLogFloor = 1e-6;

/// d * g_z * k_z * ln(max(r, 1e-6)) + 1/(t+1), with g_bar on the opponent side.
double indicator_weight(std::size_t z, std::size_t t, double r, const IndicatorWeights& w, IndicatorSide side);

struct MomentumSeries {
    std::vector<double> values;
    std::string player;
    std::string opponent;
};

/// M_i(t) = m_ij * sum_z (delta_z(t) xi(t,z) - delta_bar_z(t) xj(t,z)).
/// The log argument r is the series value itself unless raw series are
/// supplied, in which case the raw values enter the log and the
/// reconstructed values stay as multipliers.
MomentumSeries momentum(const MultivariateSeries& xi, const MultivariateSeries& xj, const IndicatorWeights& w,
                        double m_ij, const std::string& i = {}, const std::string& j = {},
                        const MultivariateSeries* raw_i = nullptr, const MultivariateSeries* raw_j = nullptr);

/// Pressure looked up with PressureMatrix::at (throws UnknownPlayerError).
MomentumSeries momentum(const MultivariateSeries& xi, const MultivariateSeries& xj, const IndicatorWeights& w,
                        const PressureMatrix& m, const std::string& i, const std::string& j);

/// Momentum of one point from single feature rows; `t` is the point index.
double momentum_at(std::span<const double> xi, std::span<const double> xj, std::span<const double> ri,
                   std::span<const double> rj, std::size_t t, const IndicatorWeights& w, double m_ij);

/// JSON report of both weight vectors and their consistency figures.
std::string weights_json(const AhpResult& own, const AhpResult& opponent, const std::vector<std::string>& names);

} // namespace mtm::momentum
