#include "mtm/wavelet/filter.hpp"

#include "mtm/core/error.hpp"

#include <cmath>

namespace mtm::wavelet {

WaveletFilter::WaveletFilter(std::string name, std::vector<double> scaling)
    : name_(std::move(name)), scaling_(std::move(scaling)) {
    const std::size_t L = scaling_.size();
    if (L < 2 || L % 2 != 0) {
        throw ConfigError("wavelet filter needs an even number of taps");
    }
    wavelet_.resize(L);
    for (std::size_t l = 0; l < L; ++l) {
        const double sign = l % 2 == 0 ? 1.0 : -1.0;
        wavelet_[l] = sign * scaling_[L - 1 - l];
    }
    const double r = std::sqrt(2.0);
    for (std::size_t l = 0; l < L; ++l) {
        modwt_scaling_.push_back(scaling_[l] / r);
        modwt_wavelet_.push_back(wavelet_[l] / r);
    }
}

WaveletFilter WaveletFilter::haar() {
    const double c = 1.0 / std::sqrt(2.0);
    return WaveletFilter("haar", {c, c});
}

WaveletFilter WaveletFilter::daubechies4() {
    const double s3 = std::sqrt(3.0);
    const double n = 4.0 * std::sqrt(2.0);
    return WaveletFilter("d4", {(1.0 + s3) / n, (3.0 + s3) / n, (3.0 - s3) / n, (1.0 - s3) / n});
}

WaveletFilter WaveletFilter::by_name(const std::string& name) {
    if (name == "haar") return haar();
    if (name == "d4" || name == "db4" || name == "daubechies4") return daubechies4();
    throw ConfigError("unknown wavelet filter '" + name + "' (expected haar or d4)");
}

} // namespace mtm::wavelet
