#pragma once

#include <string>
#include <vector>

namespace mtm::wavelet {

/// Orthonormal wavelet filter pair in DWT normalisation (sum of scaling taps
/// is sqrt(2)). Wavelet taps follow h_l = (-1)^l g_{L-1-l}. The MODWT uses
/// both divided by sqrt(2) at level 1.
class WaveletFilter {
public:
    WaveletFilter(std::string name, std::vector<double> scaling);

    static WaveletFilter haar();
    static WaveletFilter daubechies4();
    /// "haar" or "d4"/"db4"/"daubechies4"; throws ConfigError otherwise.
    static WaveletFilter by_name(const std::string& name);

    const std::string& name() const { return name_; }
    const std::vector<double>& scaling() const { return scaling_; }
    const std::vector<double>& wavelet() const { return wavelet_; }
    std::size_t length() const { return scaling_.size(); }

    /// Level-1 MODWT taps (DWT taps / sqrt(2)).
    const std::vector<double>& modwt_scaling() const { return modwt_scaling_; }
    const std::vector<double>& modwt_wavelet() const { return modwt_wavelet_; }

    bool operator==(const WaveletFilter& o) const { return name_ == o.name_ && scaling_ == o.scaling_; }

private:
    std::string name_;
    std::vector<double> scaling_;
    std::vector<double> wavelet_;
    std::vector<double> modwt_scaling_;
    std::vector<double> modwt_wavelet_;
};

} // namespace mtm::wavelet
