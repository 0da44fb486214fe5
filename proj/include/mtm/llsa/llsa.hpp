#pragma once

#include "mtm/core/series.hpp"
#include "mtm/wavelet/modwt.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace mtm::llsa {

struct ChangePointConfig {
    std::optional<std::size_t> top_level;        ///< J; default_levels(T) when unset
    std::optional<std::size_t> refinement_depth; ///< Lambda; J - 1 when unset
    std::size_t max_jumps = 10;                  ///< K
    double threshold = 3.0;                      ///< tau, in units of the MAD noise scale
    double min_peak = 1e-10;                     ///< absolute floor for a significant coefficient

    std::size_t levels_for(std::size_t length) const;
    std::size_t depth_for(std::size_t levels) const;
    /// Throws ConfigError when a field is out of range for a series of `length`.
    void validate(std::size_t length) const;
};

/// Jump extent on one level, in time-aligned coefficient indices.
struct JumpRegion {
    std::size_t level = 0;
    std::size_t location = 0; ///< l
    std::size_t alpha = 0;
    std::size_t beta = 0;
    std::size_t n_alpha = 0;
    std::size_t n_beta = 0;
    bool refinement_miss = false;

    bool contains(std::size_t t) const { return t >= alpha && t <= beta; }
    bool operator==(const JumpRegion&) const = default;
};

/// Detection parameters that do not depend on the transform.
struct DetectOptions {
    double threshold = 3.0;
    double min_peak = 1e-10;
    /// Optional per-index mask of coefficients allowed as peaks (nonzero = allowed).
    std::span<const unsigned char> candidates{};
    /// Precomputed noise_scale(w); negative means compute it.
    double noise = -1.0;
};

/// median(|w|) / 0.6745.
double noise_scale(std::span<const double> w);

/// Peak of |w| (Eq. 1 argmax), sign-flip counts either side within the
/// support, and the bounds reached by the outward scan. Throws NoJumpFound
/// when the peak is not above max(threshold * noise_scale, min_peak).
JumpRegion detect_first_jump(std::span<const double> w, const DetectOptions& opts = {});

/// Same, with argmax over indices outside every excluded region and bounds
/// confined to the unexcluded gap holding the peak.
JumpRegion detect_kth_jump(std::span<const double> w, std::span<const JumpRegion> excluded,
                           const DetectOptions& opts = {});

/// Aligned detail coefficients per level, index 0 = level 1.
struct AlignedDetails {
    std::vector<std::vector<double>> levels;
    std::vector<std::size_t> shifts;
    std::vector<std::vector<unsigned char>> interior; ///< 0 where the filter wraps the boundary
    std::vector<double> noise;                       ///< noise_scale per level
};

AlignedDetails align_details(const wavelet::WaveletDecomposition& d);

/// Regions at levels J-1 .. J-depth restricted to the parent region (Eq. 6).
/// `same_level` holds earlier jumps' regions per level (index 0 = level 1)
/// and is excluded from each refined region. Returned list starts with
/// `region` itself and continues towards finer levels.
std::vector<JumpRegion> refine_across_scales(const AlignedDetails& aligned, const JumpRegion& region,
                                             std::size_t depth,
                                             const std::vector<std::vector<JumpRegion>>& same_level = {},
                                             double min_peak = 1e-10);

/// Overload that aligns `d` itself.
std::vector<JumpRegion> refine_across_scales(const wavelet::WaveletDecomposition& d, const JumpRegion& region,
                                             std::size_t depth, double min_peak = 1e-10);

/// All refined regions of every detected jump in one column.
struct ColumnJumps {
    std::vector<std::vector<JumpRegion>> jumps; ///< per jump: top level first
    std::vector<JumpRegion> top() const;
};

/// Detects up to K jumps in a scalar series. Coefficients whose filter
/// wraps around the circular boundary are never taken as peaks.
ColumnJumps detect_jumps(std::span<const double> x, const ChangePointConfig& config,
                         const wavelet::WaveletFilter& filter);

struct ReconstructedSeries {
    MultivariateSeries values;
    std::vector<ColumnJumps> regions; ///< per column
    ChangePointConfig config;
};

/// Column-wise LLSA reconstruction: details outside jump regions zeroed at
/// levels J-Lambda..J, other levels, wrapped boundary coefficients and the
/// smooth kept, then inverted.
ReconstructedSeries reconstruct(const MultivariateSeries& x, const ChangePointConfig& config,
                                const wavelet::WaveletFilter& filter);

/// Scalar version; returns the input unchanged when no jump is found.
std::vector<double> reconstruct_column(std::span<const double> x, const ChangePointConfig& config,
                                       const wavelet::WaveletFilter& filter, ColumnJumps* jumps_out = nullptr);

/// CSV report with columns column,jump,level,l,alpha,beta,n_alpha,n_beta,refinement_miss.
void write_regions_csv(std::ostream& out, const ReconstructedSeries& r);

} // namespace mtm::llsa
