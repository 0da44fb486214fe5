#pragma once

#include "mtm/core/records.hpp"
#include "mtm/core/schema.hpp"
#include "mtm/llsa/llsa.hpp"
#include "mtm/momentum/momentum.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mtm::pipeline {

struct EncoderConfig {
    llsa::ChangePointConfig change_points;
    std::string filter = "haar";
    /// Trailing points used for each causal reconstruction.
    std::size_t history = 128;
    /// false: reconstruct each full match at once (looks ahead; inspection only).
    bool causal = true;
    /// Raw feature values inside the log term; false uses the reconstruction.
    bool log_of_raw = true;

    void validate() const;
};

/// Value at t of the LLSA reconstruction of the trailing `history` points,
/// mirrored so the circular boundary joins smoothly. Row 0 is copied.
MultivariateSeries causal_reconstruct(const MultivariateSeries& x, const llsa::ChangePointConfig& config,
                                      const wavelet::WaveletFilter& filter, std::size_t history);

/// Scalar version of causal_reconstruct.
std::vector<double> causal_reconstruct_column(std::span<const double> x, const llsa::ChangePointConfig& config,
                                              const wavelet::WaveletFilter& filter, std::size_t history);

struct MatchMomentum {
    std::string match_id;
    std::array<std::string, 2> players;
    std::array<std::vector<double>, 2> momentum; ///< indexed by Side
    std::vector<Side> victor;                    ///< point victor per point
    std::vector<double> time_index;
};

/// Momentum of both players over one match.
MatchMomentum encode_match(const Match& match, const FeatureSchema& schema, const momentum::IndicatorWeights& weights,
                           const momentum::PressureMatrix& pressure, const EncoderConfig& config);

/// CSV with columns t,elapsed_time,point_victor,<player1>,<player2>.
void write_momentum_csv(std::ostream& out, const MatchMomentum& m);

} // namespace mtm::pipeline
