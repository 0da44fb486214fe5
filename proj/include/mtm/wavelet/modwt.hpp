#pragma once

#include "mtm/wavelet/filter.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace mtm::wavelet {

/// MODWT of a length-T series: J detail vectors W_1..W_J and the level-J
/// smooth V_J, all of length T.
struct WaveletDecomposition {
    std::vector<std::vector<double>> details; ///< details[j-1] = W_j
    std::vector<double> smooth;               ///< V_J
    WaveletFilter filter = WaveletFilter::haar();

    std::size_t levels() const { return details.size(); }
    std::size_t length() const { return smooth.size(); }
    const std::vector<double>& detail(std::size_t level) const { return details.at(level - 1); }
};

/// floor(log2(T)) capped at 4, at least 1.
std::size_t default_levels(std::size_t length);

/// Pyramid algorithm with circular filtering. Throws ConfigError for
/// levels < 1 or length < 2; warns when T < L * 2^(J-1).
WaveletDecomposition modwt_forward(std::span<const double> x, const WaveletFilter& filter, std::size_t levels);

/// Inverse pyramid; throws ShapeError for inconsistent level lengths.
std::vector<double> modwt_inverse(const WaveletDecomposition& d);

/// Level-j detail series D_j; x = sum_j D_j + S_J.
std::vector<double> detail_reconstruct(const WaveletDecomposition& d, std::size_t level);
/// Smooth series S_J.
std::vector<double> smooth_reconstruct(const WaveletDecomposition& d);

/// Copy of `d` with W_level replaced.
WaveletDecomposition replace_details(const WaveletDecomposition& d, std::size_t level, std::vector<double> new_w);

/// Circular advance that lines W_j up with the time axis: coefficient
/// W_{j,(t + shift) mod T} sits at time t. Floor of the energy centre of the
/// level-j wavelet filter (2^(j-1) - 1 for Haar).
std::size_t phase_shift(const WaveletFilter& filter, std::size_t level);

/// Time-aligned copy: out[t] = w[(t + shift) mod T].
std::vector<double> align(std::span<const double> w, std::size_t shift);

/// CSV dump with columns t, W_1..W_J, V_J.
void write_coefficients_csv(std::ostream& out, const WaveletDecomposition& d);

} // namespace mtm::wavelet
