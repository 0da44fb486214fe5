#include "mtm/core/error.hpp"
#include "mtm/decompose/decompose.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace mtm;
using namespace mtm::decompose;

namespace {

// Literal centered average with clamped indices.
std::vector<double> brute_ma(const std::vector<double>& x, std::size_t k) {
    const long h = static_cast<long>(k / 2);
    const long n = static_cast<long>(x.size());
    std::vector<double> out(x.size());
    for (long t = 0; t < n; ++t) {
        double s = 0.0;
        for (long o = -h; o <= h; ++o) s += x[static_cast<std::size_t>(std::clamp(t + o, 0L, n - 1))];
        out[static_cast<std::size_t>(t)] = s / static_cast<double>(k);
    }
    return out;
}

std::vector<double> random_series(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 3.0);
    std::vector<double> x(n);
    for (double& v : x) v = g(rng);
    return x;
}

} // namespace

TEST_CASE("moving average matches the literal definition", "[decompose][oracle]") {
    std::mt19937_64 rng(1);
    for (std::size_t k : {3u, 5u, 13u, 25u}) {
        const auto x = random_series(rng, 60);
        const auto ma = moving_average(x, k);
        const auto ref = brute_ma(x, k);
        for (std::size_t t = 0; t < x.size(); ++t) CHECK(ma[t] == Catch::Approx(ref[t]).margin(1e-12));
    }
}

TEST_CASE("constant series has zero seasonal part", "[decompose]") {
    const std::vector<double> x(30, 4.2);
    const std::vector<double> logits{0.3, -1.0, 2.0};
    const auto d = decompose::decompose(x, kDefaultKernels, logits);
    for (std::size_t t = 0; t < x.size(); ++t) {
        CHECK(d.trend[t] == Catch::Approx(4.2).margin(1e-12));
        CHECK(std::abs(d.seasonal[t]) < 1e-12);
    }
}

TEST_CASE("single kernel is a plain moving average", "[decompose]") {
    std::mt19937_64 rng(2);
    const auto x = random_series(rng, 40);
    const std::vector<std::size_t> k{7};
    const std::vector<double> logits{-3.7};
    const auto d = decompose::decompose(x, k, logits);
    CHECK(d.weights == std::vector<double>{1.0});
    const auto ma = moving_average(x, 7);
    for (std::size_t t = 0; t < x.size(); ++t) CHECK(d.trend[t] == Catch::Approx(ma[t]).margin(1e-13));
}

TEST_CASE("ramp interior is reproduced exactly", "[decompose]") {
    std::vector<double> x(40);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = 0.5 * static_cast<double>(t) - 3.0;
    const std::vector<std::size_t> k{3, 5};
    const std::vector<double> logits{0.2, 0.9};
    const auto d = decompose::decompose(x, k, logits);
    for (std::size_t t = 2; t + 2 < x.size(); ++t) {
        CHECK(d.trend[t] == Catch::Approx(x[t]).margin(1e-12));
        CHECK(std::abs(d.seasonal[t]) < 1e-12);
    }
}

TEST_CASE("additivity is exact and weights normalise", "[decompose][property]") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_series(rng, 30 + static_cast<std::size_t>(trial));
        const std::vector<double> logits{g(rng), g(rng), g(rng)};
        const auto d = decompose::decompose(x, kDefaultKernels, logits);
        for (std::size_t t = 0; t < x.size(); ++t) CHECK(std::abs(d.trend[t] + d.seasonal[t] - x[t]) <= 1e-12);
        double s = 0.0;
        for (double w : d.weights) {
            CHECK(w > 0.0);
            s += w;
        }
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
}

TEST_CASE("softmax ignores a common logit offset", "[decompose][property]") {
    const std::vector<double> a{0.1, -2.0, 3.0};
    const std::vector<double> b{100.1, 98.0, 103.0};
    const auto sa = softmax(a), sb = softmax(b);
    for (std::size_t i = 0; i < 3; ++i) CHECK(sa[i] == Catch::Approx(sb[i]).margin(1e-14));
    const std::vector<double> big{1000.0, 0.0};
    const auto s = softmax(big);
    CHECK(std::isfinite(s[1]));
    CHECK(s[0] == 1.0);
}

TEST_CASE("decomposition is linear for fixed weights", "[decompose][property]") {
    std::mt19937_64 rng(4);
    const auto x = random_series(rng, 50);
    std::vector<double> y(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) y[t] = -2.5 * x[t];
    const std::vector<double> logits{0.5, 0.1, -0.3};
    const auto dx = decompose::decompose(x, kDefaultKernels, logits);
    const auto dy = decompose::decompose(y, kDefaultKernels, logits);
    for (std::size_t t = 0; t < x.size(); ++t) {
        CHECK(dy.trend[t] == Catch::Approx(-2.5 * dx.trend[t]).margin(1e-11));
        CHECK(dy.seasonal[t] == Catch::Approx(-2.5 * dx.seasonal[t]).margin(1e-11));
    }
}

TEST_CASE("logit gradient matches finite differences", "[decompose][oracle]") {
    std::mt19937_64 rng(5);
    const auto x = random_series(rng, 40);
    const auto probe = random_series(rng, 40);
    std::vector<double> logits{0.3, -0.2, 0.7};
    auto loss = [&](const std::vector<double>& l) {
        const auto d = decompose::decompose(x, kDefaultKernels, l);
        double s = 0.0;
        for (std::size_t t = 0; t < x.size(); ++t) s += probe[t] * d.trend[t];
        return s;
    };
    const auto d = decompose::decompose(x, kDefaultKernels, logits);
    const auto g = logit_gradient(probe, candidate_trends(x, kDefaultKernels), d.weights);
    for (std::size_t f = 0; f < logits.size(); ++f) {
        auto up = logits, down = logits;
        up[f] += 1e-6;
        down[f] -= 1e-6;
        CHECK(g[f] == Catch::Approx((loss(up) - loss(down)) / 2e-6).epsilon(1e-6).margin(1e-8));
    }
}

TEST_CASE("kernel validation", "[decompose]") {
    const std::vector<double> x(20, 1.0);
    const std::vector<double> one{0.0};
    CHECK_THROWS_AS(decompose::decompose(x, std::vector<std::size_t>{4}, one), ConfigError);
    CHECK_THROWS_AS(decompose::decompose(x, std::vector<std::size_t>{1}, one), ConfigError);
    CHECK_THROWS_AS(decompose::decompose(x, std::vector<std::size_t>{21}, one), ConfigError);
    CHECK_THROWS_AS(decompose::decompose(x, std::vector<std::size_t>{3, 5}, one), ConfigError);
    CHECK_NOTHROW(decompose::decompose(x, std::vector<std::size_t>{19}, one));
}
