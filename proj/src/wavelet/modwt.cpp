#include "mtm/wavelet/modwt.hpp"

#include "mtm/core/csv.hpp"
#include "mtm/core/error.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace mtm::wavelet {

namespace {

/// One analysis step at stride `stride`: w[t] = sum_l h[l] v[t - stride*l].
void analysis_step(std::span<const double> v, const WaveletFilter& f, std::size_t stride,
                   std::vector<double>& w, std::vector<double>& s) {
    const std::size_t n = v.size();
    const auto& h = f.modwt_wavelet();
    const auto& g = f.modwt_scaling();
    w.assign(n, 0.0);
    s.assign(n, 0.0);
    const std::size_t step = stride % n;
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t idx = t;
        double wa = 0.0;
        double sa = 0.0;
        for (std::size_t l = 0; l < h.size(); ++l) {
            wa += h[l] * v[idx];
            sa += g[l] * v[idx];
            idx = idx >= step ? idx - step : idx + n - step;
        }
        w[t] = wa;
        s[t] = sa;
    }
}

/// Adjoint of analysis_step: v[t] = sum_l h[l] w[t + stride*l] + g[l] s[t + stride*l].
/// Either input may be empty (treated as zero).
std::vector<double> synthesis_step(std::span<const double> w, std::span<const double> s, const WaveletFilter& f,
                                   std::size_t stride, std::size_t n) {
    const auto& h = f.modwt_wavelet();
    const auto& g = f.modwt_scaling();
    std::vector<double> v(n, 0.0);
    const std::size_t step = stride % n;
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t idx = t;
        double acc = 0.0;
        for (std::size_t l = 0; l < h.size(); ++l) {
            if (!w.empty()) acc += h[l] * w[idx];
            if (!s.empty()) acc += g[l] * s[idx];
            idx += step;
            if (idx >= n) idx -= n;
        }
        v[t] = acc;
    }
    return v;
}

void check_consistent(const WaveletDecomposition& d) {
    const std::size_t n = d.smooth.size();
    if (d.details.empty()) {
        throw ShapeError("wavelet decomposition has no levels");
    }
    for (std::size_t j = 0; j < d.details.size(); ++j) {
        if (d.details[j].size() != n) {
            throw ShapeError("level " + std::to_string(j + 1) + " has length " +
                             std::to_string(d.details[j].size()) + ", smooth has " + std::to_string(n));
        }
    }
    if (n == 0) {
        throw ShapeError("wavelet decomposition is empty");
    }
}

/// Runs the inverse pyramid from level `top` down to 0 using the detail at
/// `only_level` (0 = all details) and optionally the smooth.
std::vector<double> synthesize(const WaveletDecomposition& d, std::size_t only_level, bool use_smooth) {
    check_consistent(d);
    const std::size_t n = d.length();
    const std::size_t J = d.levels();
    std::vector<double> v;
    if (use_smooth) v = d.smooth;
    for (std::size_t j = J; j >= 1; --j) {
        const bool use_detail = only_level == 0 || only_level == j;
        const std::size_t stride = std::size_t{1} << (j - 1);
        std::span<const double> w = use_detail ? std::span<const double>(d.details[j - 1]) : std::span<const double>();
        if (w.empty() && v.empty()) continue;
        v = synthesis_step(w, v, d.filter, stride, n);
    }
    if (v.empty()) v.assign(n, 0.0);
    return v;
}

} // namespace

std::size_t default_levels(std::size_t length) {
    std::size_t j = 0;
    while ((std::size_t{2} << j) <= length) ++j;
    return std::clamp<std::size_t>(j, 1, 4);
}

WaveletDecomposition modwt_forward(std::span<const double> x, const WaveletFilter& filter, std::size_t levels) {
    if (levels < 1) {
        throw ConfigError("MODWT needs at least one level");
    }
    if (x.size() < 2) {
        throw ConfigError("MODWT needs a series of length >= 2");
    }
    const std::size_t needed = filter.length() << (levels - 1);
    if (x.size() < needed) {
        spdlog::debug("MODWT: series length {} below L*2^(J-1) = {}; circular wrap dominates", x.size(), needed);
    }
    WaveletDecomposition d;
    d.filter = filter;
    d.details.resize(levels);
    std::vector<double> v(x.begin(), x.end());
    std::vector<double> s;
    for (std::size_t j = 1; j <= levels; ++j) {
        analysis_step(v, filter, std::size_t{1} << (j - 1), d.details[j - 1], s);
        v.swap(s);
    }
    d.smooth = std::move(v);
    return d;
}

std::vector<double> modwt_inverse(const WaveletDecomposition& d) { return synthesize(d, 0, true); }

std::vector<double> detail_reconstruct(const WaveletDecomposition& d, std::size_t level) {
    if (level < 1 || level > d.levels()) {
        throw ConfigError("detail level " + std::to_string(level) + " outside 1.." + std::to_string(d.levels()));
    }
    return synthesize(d, level, false);
}

std::vector<double> smooth_reconstruct(const WaveletDecomposition& d) {
    check_consistent(d);
    WaveletDecomposition only_smooth = d;
    for (auto& w : only_smooth.details) std::fill(w.begin(), w.end(), 0.0);
    return synthesize(only_smooth, 0, true);
}

WaveletDecomposition replace_details(const WaveletDecomposition& d, std::size_t level, std::vector<double> new_w) {
    if (level < 1 || level > d.levels()) {
        throw ConfigError("detail level " + std::to_string(level) + " outside 1.." + std::to_string(d.levels()));
    }
    if (new_w.size() != d.length()) {
        throw ShapeError("replacement coefficients have length " + std::to_string(new_w.size()) + ", expected " +
                         std::to_string(d.length()));
    }
    WaveletDecomposition out = d;
    out.details[level - 1] = std::move(new_w);
    return out;
}

std::size_t phase_shift(const WaveletFilter& filter, std::size_t level) {
    // Equivalent level-j filter = response of W_j to a unit impulse.
    const std::size_t width = (((std::size_t{1} << level) - 1) * (filter.length() - 1)) + 1;
    std::vector<double> impulse(width + 1, 0.0);
    impulse[0] = 1.0;
    const auto d = modwt_forward(impulse, filter, level);
    const auto& h = d.details[level - 1];
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = 0; t < h.size(); ++t) {
        num += static_cast<double>(t) * h[t] * h[t];
        den += h[t] * h[t];
    }
    return static_cast<std::size_t>(std::floor(num / den));
}

std::vector<double> align(std::span<const double> w, std::size_t shift) {
    const std::size_t n = w.size();
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) out[t] = w[(t + shift) % n];
    return out;
}

void write_coefficients_csv(std::ostream& out, const WaveletDecomposition& d) {
    out << "t";
    for (std::size_t j = 1; j <= d.levels(); ++j) out << ",W_" << j;
    out << ",V_" << d.levels() << '\n';
    for (std::size_t t = 0; t < d.length(); ++t) {
        out << t;
        for (const auto& w : d.details) out << ',' << format_double(w[t]);
        out << ',' << format_double(d.smooth[t]) << '\n';
    }
}

} // namespace mtm::wavelet
