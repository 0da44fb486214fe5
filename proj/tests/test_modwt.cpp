#include "mtm/core/error.hpp"
#include "mtm/wavelet/modwt.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

using namespace mtm;
using namespace mtm::wavelet;

namespace {

std::vector<double> random_series(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(n);
    for (double& v : x) v = g(rng);
    return x;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
    return out;
}

std::vector<double> upsample(const std::vector<double>& taps, std::size_t factor) {
    std::vector<double> out((taps.size() - 1) * factor + 1, 0.0);
    for (std::size_t l = 0; l < taps.size(); ++l) out[l * factor] = taps[l];
    return out;
}

// Equivalent level-j filter built by cascading upsampled level-1 taps.
std::vector<double> equivalent(const WaveletFilter& f, std::size_t j, bool wavelet) {
    std::vector<double> acc{1.0};
    for (std::size_t k = 1; k < j; ++k) acc = convolve(acc, upsample(f.modwt_scaling(), std::size_t{1} << (k - 1)));
    return convolve(acc, upsample(wavelet ? f.modwt_wavelet() : f.modwt_scaling(), std::size_t{1} << (j - 1)));
}

std::vector<double> circular_filter(const std::vector<double>& x, const std::vector<double>& taps) {
    const std::size_t T = x.size();
    std::vector<double> out(T, 0.0);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t l = 0; l < taps.size(); ++l) out[t] += taps[l] * x[(t + T * taps.size() - l) % T];
    return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double energy(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

} // namespace

TEST_CASE("filters satisfy the quadrature relations", "[modwt]") {
    for (const auto& f : {WaveletFilter::haar(), WaveletFilter::daubechies4()}) {
        double sg = 0.0, sh = 0.0, eg = 0.0;
        for (double v : f.scaling()) sg += v, eg += v * v;
        for (double v : f.wavelet()) sh += v;
        CHECK(sg == Catch::Approx(std::sqrt(2.0)).margin(1e-14));
        CHECK(std::abs(sh) < 1e-14);
        CHECK(eg == Catch::Approx(1.0).margin(1e-14));
        const std::size_t L = f.length();
        for (std::size_t l = 0; l < L; ++l) {
            const double sign = l % 2 == 0 ? 1.0 : -1.0;
            CHECK(f.wavelet()[l] == Catch::Approx(sign * f.scaling()[L - 1 - l]).margin(1e-15));
            CHECK(f.modwt_wavelet()[l] == Catch::Approx(f.wavelet()[l] / std::sqrt(2.0)).margin(1e-15));
        }
    }
    CHECK(WaveletFilter::by_name("db4") == WaveletFilter::daubechies4());
    CHECK_THROWS_AS(WaveletFilter::by_name("coif6"), ConfigError);
}

TEST_CASE("constant input gives zero details at level 1", "[modwt]") {
    const std::vector<double> x{5, 5, 5, 5};
    const auto d = modwt_forward(x, WaveletFilter::haar(), 1);
    for (double w : d.detail(1)) CHECK(std::abs(w) < 1e-15);
}

TEST_CASE("alternating input under Haar level 1", "[modwt]") {
    const std::vector<double> x{1, -1, 1, -1};
    const auto d = modwt_forward(x, WaveletFilter::haar(), 1);
    const std::vector<double> expected{1, -1, 1, -1};
    CHECK(max_abs_diff(d.detail(1), expected) < 1e-15);
}

TEST_CASE("pyramid matches direct equivalent-filter convolution", "[modwt][oracle]") {
    std::mt19937_64 rng(21);
    for (const auto& f : {WaveletFilter::haar(), WaveletFilter::daubechies4()}) {
        for (std::size_t T : {16u, 37u, 64u}) {
            const auto x = random_series(rng, T);
            const auto d = modwt_forward(x, f, 3);
            for (std::size_t j = 1; j <= 3; ++j) {
                CHECK(max_abs_diff(d.detail(j), circular_filter(x, equivalent(f, j, true))) < 1e-12);
            }
            CHECK(max_abs_diff(d.smooth, circular_filter(x, equivalent(f, 3, false))) < 1e-12);
        }
    }
}

TEST_CASE("perfect reconstruction and energy identity", "[modwt][property]") {
    std::mt19937_64 rng(5);
    for (const auto& f : {WaveletFilter::haar(), WaveletFilter::daubechies4()}) {
        for (std::size_t J = 1; J <= 4; ++J) {
            const auto x = random_series(rng, 64);
            const auto d = modwt_forward(x, f, J);
            CHECK(max_abs_diff(modwt_inverse(d), x) < 1e-10);
            double e = energy(d.smooth);
            for (const auto& w : d.details) e += energy(w);
            CHECK(std::abs(e - energy(x)) / energy(x) < 1e-8);
        }
    }
}

TEST_CASE("circular shift commutes with the transform", "[modwt][property]") {
    std::mt19937_64 rng(6);
    const auto x = random_series(rng, 40);
    const std::size_t k = 7;
    std::vector<double> shifted(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) shifted[(t + k) % x.size()] = x[t];
    const auto f = WaveletFilter::daubechies4();
    const auto a = modwt_forward(x, f, 3);
    const auto b = modwt_forward(shifted, f, 3);
    for (std::size_t j = 1; j <= 3; ++j) {
        for (std::size_t t = 0; t < x.size(); ++t) {
            CHECK(std::abs(b.detail(j)[(t + k) % x.size()] - a.detail(j)[t]) < 1e-12);
        }
    }
}

TEST_CASE("transform is linear", "[modwt][property]") {
    std::mt19937_64 rng(8);
    const auto x = random_series(rng, 50);
    const auto y = random_series(rng, 50);
    const double a = 1.7, b = -0.4;
    std::vector<double> z(50);
    for (std::size_t t = 0; t < 50; ++t) z[t] = a * x[t] + b * y[t];
    const auto f = WaveletFilter::haar();
    const auto dx = modwt_forward(x, f, 4), dy = modwt_forward(y, f, 4), dz = modwt_forward(z, f, 4);
    for (std::size_t j = 1; j <= 4; ++j)
        for (std::size_t t = 0; t < 50; ++t)
            CHECK(std::abs(dz.detail(j)[t] - (a * dx.detail(j)[t] + b * dy.detail(j)[t])) < 1e-10);
}

TEST_CASE("multiresolution additivity", "[modwt]") {
    std::mt19937_64 rng(9);
    const auto x = random_series(rng, 64);
    for (const auto& f : {WaveletFilter::haar(), WaveletFilter::daubechies4()}) {
        const auto d = modwt_forward(x, f, 4);
        auto sum = smooth_reconstruct(d);
        for (std::size_t j = 1; j <= 4; ++j) {
            const auto dj = detail_reconstruct(d, j);
            for (std::size_t t = 0; t < 64; ++t) sum[t] += dj[t];
        }
        CHECK(max_abs_diff(sum, x) < 1e-10);

        const auto zeroed = modwt_inverse(replace_details(d, 1, std::vector<double>(64, 0.0)));
        const auto d1 = detail_reconstruct(d, 1);
        for (std::size_t t = 0; t < 64; ++t) CHECK(std::abs((x[t] - zeroed[t]) - d1[t]) < 1e-10);

        auto all_zero = d;
        for (std::size_t j = 1; j <= 4; ++j) all_zero = replace_details(all_zero, j, std::vector<double>(64, 0.0));
        CHECK(max_abs_diff(modwt_inverse(all_zero), smooth_reconstruct(d)) < 1e-12);
        CHECK(max_abs_diff(modwt_inverse(replace_details(d, 2, d.detail(2))), modwt_inverse(d)) == 0.0);
    }
    CHECK_THROWS_AS(detail_reconstruct(modwt_forward(x, WaveletFilter::haar(), 2), 3), ConfigError);
}

TEST_CASE("replace_details leaves its input unchanged", "[modwt]") {
    std::mt19937_64 rng(10);
    const auto x = random_series(rng, 16);
    const auto d = modwt_forward(x, WaveletFilter::haar(), 2);
    const auto before = d.details;
    const auto r = replace_details(d, 1, std::vector<double>(16, 0.0));
    CHECK(d.details == before);
    CHECK_THROWS_AS(replace_details(d, 1, std::vector<double>(15, 0.0)), ShapeError);
}

TEST_CASE("zero coefficients and constant input", "[modwt]") {
    WaveletDecomposition d;
    d.details.assign(3, std::vector<double>(32, 0.0));
    d.smooth.assign(32, 0.0);
    for (double v : modwt_inverse(d)) CHECK(v == 0.0);

    const std::vector<double> c(32, 2.5);
    const auto dc = modwt_forward(c, WaveletFilter::daubechies4(), 3);
    for (std::size_t j = 1; j <= 3; ++j)
        for (double v : detail_reconstruct(dc, j)) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("level-1 detail of a step peaks at the step", "[modwt]") {
    std::vector<double> x(64, 0.0);
    for (std::size_t t = 30; t < 64; ++t) x[t] = 1.0;
    const auto d = modwt_forward(x, WaveletFilter::haar(), 2);
    const auto d1 = detail_reconstruct(d, 1);
    std::size_t arg = 3;
    for (std::size_t t = 3; t < 61; ++t)
        if (std::abs(d1[t]) > std::abs(d1[arg])) arg = t;
    CHECK(std::abs(static_cast<long>(arg) - 30) <= 2);
}

TEST_CASE("invalid arguments", "[modwt]") {
    const std::vector<double> x{1, 2, 3, 4};
    CHECK_THROWS_AS(modwt_forward(x, WaveletFilter::haar(), 0), ConfigError);
    CHECK_THROWS_AS(modwt_forward(std::vector<double>{1.0}, WaveletFilter::haar(), 1), ConfigError);
    auto d = modwt_forward(x, WaveletFilter::haar(), 2);
    d.details[1].pop_back();
    CHECK_THROWS_AS(modwt_inverse(d), ShapeError);
}

TEST_CASE("default level count", "[modwt]") {
    CHECK(default_levels(2) == 1);
    CHECK(default_levels(7) == 2);
    CHECK(default_levels(8) == 3);
    CHECK(default_levels(500) == 4);
}

TEST_CASE("phase shift aligns Haar coefficients with the step", "[modwt]") {
    CHECK(phase_shift(WaveletFilter::haar(), 1) == 0);
    CHECK(phase_shift(WaveletFilter::haar(), 3) == 3);
    std::vector<double> x(128, 0.0);
    for (std::size_t t = 70; t < 128; ++t) x[t] = 1.0;
    const auto d = modwt_forward(x, WaveletFilter::haar(), 3);
    const auto a = align(d.detail(3), phase_shift(WaveletFilter::haar(), 3));
    std::size_t arg = 20;
    for (std::size_t t = 20; t < 120; ++t)
        if (std::abs(a[t]) > std::abs(a[arg])) arg = t;
    CHECK(std::abs(static_cast<long>(arg) - 70) <= 1);
}

TEST_CASE("coefficient csv lists every level", "[modwt]") {
    const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8};
    std::ostringstream out;
    write_coefficients_csv(out, modwt_forward(x, WaveletFilter::haar(), 2));
    const auto text = out.str();
    CHECK(text.rfind("t,W_1,W_2,V_2\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 9);
}
