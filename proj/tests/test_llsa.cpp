#include "mtm/core/error.hpp"
#include "mtm/llsa/llsa.hpp"
#include "mtm/wavelet/modwt.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

using namespace mtm;
using namespace mtm::llsa;
using wavelet::WaveletFilter;

namespace {

std::vector<double> step_signal(std::size_t T, std::size_t at, double height, double sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, sigma);
    std::vector<double> x(T);
    for (std::size_t t = 0; t < T; ++t) x[t] = (t >= at ? height : 0.0) + (sigma > 0 ? g(rng) : 0.0);
    return x;
}

// Brute-force sign-flip count, sign(0) = +1.
std::size_t count_flips(const std::vector<double>& w, std::size_t from, std::size_t to) {
    std::size_t n = 0;
    for (std::size_t t = from; t < to; ++t) {
        const int a = w[t] < 0 ? -1 : 1;
        const int b = w[t + 1] < 0 ? -1 : 1;
        n += static_cast<std::size_t>(std::abs(b - a) / 2);
    }
    return n;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

TEST_CASE("noise scale is the normalised median absolute value", "[llsa]") {
    const std::vector<double> w{1, -2, 3, -4, 5};
    CHECK(noise_scale(w) == Catch::Approx(3.0 / 0.6745).epsilon(1e-15));
    const std::vector<double> even{1, -2, 3, -4};
    CHECK(noise_scale(even) == Catch::Approx(2.5 / 0.6745).epsilon(1e-15));
}

TEST_CASE("single nonzero coefficient is its own region", "[llsa]") {
    std::vector<double> w(20, 0.0);
    w[7] = 2.0;
    const auto r = detect_first_jump(w);
    CHECK(r.location == 7);
    CHECK(r.alpha == 7);
    CHECK(r.beta == 7);
    CHECK(r.n_alpha == 0);
    CHECK(r.n_beta == 0);
}

TEST_CASE("constant coefficients yield no jump", "[llsa]") {
    CHECK_THROWS_AS(detect_first_jump(std::vector<double>(32, 0.0)), NoJumpFound);
    const auto x = std::vector<double>(64, 4.0);
    CHECK(detect_jumps(x, {}, WaveletFilter::haar()).jumps.empty());
}

TEST_CASE("peak, support and flip counts match a brute-force scan", "[llsa][oracle]") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> w(80);
        for (double& v : w) v = 0.2 * g(rng);
        const std::size_t at = 10 + static_cast<std::size_t>(trial % 60);
        for (int k = -3; k <= 3; ++k) w[at + k] += (k % 2 == 0 ? 6.0 : -4.0) / (1 + std::abs(k));
        DetectOptions opts;
        opts.threshold = 3.0;
        const auto r = detect_first_jump(w, opts);

        std::size_t arg = 0;
        for (std::size_t t = 1; t < w.size(); ++t)
            if (std::abs(w[t]) > std::abs(w[arg])) arg = t;
        CHECK(r.location == arg);

        const double eta = noise_scale(w);
        std::size_t lo = arg, hi = arg;
        while (lo > 0 && std::abs(w[lo - 1]) > eta) --lo;
        while (hi + 1 < w.size() && std::abs(w[hi + 1]) > eta) ++hi;
        CHECK(r.alpha == lo);
        CHECK(r.beta == hi);
        CHECK(r.n_alpha == count_flips(w, lo, arg));
        CHECK(r.n_beta == count_flips(w, arg, hi));
        CHECK(r.alpha <= r.location);
        CHECK(r.location <= r.beta);
    }
}

TEST_CASE("kth jump ignores excluded regions", "[llsa]") {
    std::vector<double> w(60, 0.0);
    w[10] = 5.0;
    w[11] = 4.0;
    w[40] = -3.0;
    const auto first = detect_first_jump(w);
    CHECK(first.location == 10);
    CHECK(first.beta == 11);
    const std::vector<JumpRegion> excl{first};
    const auto second = detect_kth_jump(w, excl);
    CHECK(second.location == 40);
    CHECK_FALSE(first.contains(second.location));

    CHECK(detect_kth_jump(w, {}) == detect_first_jump(w));

    JumpRegion all;
    all.alpha = 0;
    all.beta = 59;
    const std::vector<JumpRegion> everything{all};
    CHECK_THROWS_AS(detect_kth_jump(w, everything), NoJumpFound);
}

TEST_CASE("bounds stay inside the unexcluded gap", "[llsa]") {
    std::vector<double> w(30, 1.0);
    w[15] = 9.0;
    JumpRegion block;
    block.alpha = 18;
    block.beta = 22;
    const std::vector<JumpRegion> excl{block};
    DetectOptions opts;
    opts.threshold = 1.0;
    opts.noise = 0.5;
    const auto r = detect_kth_jump(w, excl, opts);
    CHECK(r.location == 15);
    CHECK(r.alpha == 0);
    CHECK(r.beta == 17);
}

TEST_CASE("clean step localises at every level", "[llsa]") {
    const auto x = step_signal(256, 100, 3.0, 0.0, 0);
    ChangePointConfig cfg;
    cfg.max_jumps = 1;
    const auto jumps = detect_jumps(x, cfg, WaveletFilter::haar());
    REQUIRE(jumps.jumps.size() == 1);
    const auto& chain = jumps.jumps[0];
    CHECK(chain.size() == 4);
    for (const auto& r : chain) {
        CHECK(r.location == 100);
        CHECK_FALSE(r.refinement_miss);
    }
    CHECK(chain.front().level == 4);
    CHECK(chain.back().level == 1);
}

TEST_CASE("refinement depth zero keeps only the top region", "[llsa]") {
    const auto x = step_signal(128, 60, 3.0, 0.1, 4);
    const auto d = wavelet::modwt_forward(x, WaveletFilter::haar(), 4);
    const auto aligned = align_details(d);
    DetectOptions opts{3.0, 1e-10, aligned.interior[3], aligned.noise[3]};
    auto top = detect_first_jump(aligned.levels[3], opts);
    top.level = 4;
    CHECK(refine_across_scales(d, top, 0).size() == 1);
    const auto chain = refine_across_scales(d, top, 3);
    REQUIRE(chain.size() == 4);
    for (std::size_t k = 1; k < chain.size(); ++k) {
        CHECK(chain[k - 1].contains(chain[k].location));
        CHECK(chain[k].level == 4 - k);
    }
    CHECK_THROWS_AS(refine_across_scales(d, top, 4), ConfigError);
}

TEST_CASE("refinement with no usable coefficient keeps the parent", "[llsa]") {
    wavelet::WaveletDecomposition d;
    d.details = {std::vector<double>(32, 0.0), std::vector<double>(32, 0.0)};
    d.details[1][10] = 1.0;
    d.smooth.assign(32, 0.0);
    JumpRegion top;
    top.level = 2;
    top.location = 11;
    top.alpha = 11;
    top.beta = 11;
    const auto chain = refine_across_scales(d, top, 1);
    REQUIRE(chain.size() == 2);
    CHECK(chain[1].refinement_miss);
    CHECK(chain[1].alpha == top.alpha);
    CHECK(chain[1].beta == top.beta);
}

TEST_CASE("noisy step refines inside the parent region", "[llsa]") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto x = step_signal(512, 200 + seed * 5, 3.0, 0.5, seed);
        const auto jumps = detect_jumps(x, {}, WaveletFilter::haar());
        REQUIRE_FALSE(jumps.jumps.empty());
        for (const auto& chain : jumps.jumps)
            for (std::size_t k = 1; k < chain.size(); ++k) CHECK(chain[k - 1].contains(chain[k].location));
    }
}

TEST_CASE("regions on one level are pairwise disjoint", "[llsa][property]") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 0.3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(400);
        for (std::size_t t = 0; t < x.size(); ++t)
            x[t] = (t >= 100 ? 2.0 : 0.0) - (t >= 250 ? 3.0 : 0.0) + (t >= 330 ? 1.5 : 0.0) + g(rng);
        const auto jumps = detect_jumps(x, {}, WaveletFilter::haar());
        for (std::size_t level = 1; level <= 4; ++level) {
            std::vector<JumpRegion> rs;
            for (const auto& chain : jumps.jumps)
                for (const auto& r : chain)
                    if (r.level == level && !r.refinement_miss) rs.push_back(r);
            for (std::size_t a = 0; a < rs.size(); ++a)
                for (std::size_t b = a + 1; b < rs.size(); ++b)
                    CHECK((rs[a].beta < rs[b].alpha || rs[b].beta < rs[a].alpha));
        }
    }
}

TEST_CASE("raising the threshold never adds jumps", "[llsa][property]") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g(0.0, 0.5);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x(256);
        for (std::size_t t = 0; t < x.size(); ++t) x[t] = (t >= 90 ? 2.0 : 0.0) + (t >= 180 ? -1.0 : 0.0) + g(rng);
        std::size_t prev = 1000;
        for (double tau : {1.0, 2.0, 3.0, 5.0, 8.0, 20.0}) {
            ChangePointConfig cfg;
            cfg.threshold = tau;
            const auto n = detect_jumps(x, cfg, WaveletFilter::haar()).jumps.size();
            CHECK(n <= prev);
            prev = n;
        }
    }
}

TEST_CASE("constant column reconstructs unchanged", "[llsa]") {
    const std::vector<double> x(100, 2.5);
    ColumnJumps jumps;
    const auto y = reconstruct_column(x, {}, WaveletFilter::haar(), &jumps);
    CHECK(jumps.jumps.empty());
    for (std::size_t t = 0; t < x.size(); ++t) CHECK(std::abs(y[t] - x[t]) < 1e-10);
}

TEST_CASE("reconstruction preserves a noisy step", "[llsa]") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto x = step_signal(512, 256, 3.0, 0.1, seed);
        const auto y = reconstruct_column(x, {}, WaveletFilter::haar());
        double left = 0.0, right = 0.0;
        const std::size_t flank = 64;
        for (std::size_t t = 256 - 16 - flank; t < 256 - 16; ++t) left += y[t];
        for (std::size_t t = 256 + 16; t < 256 + 16 + flank; ++t) right += y[t];
        CHECK(std::abs((right - left) / flank - 3.0) < 0.15);
    }
}

TEST_CASE("one permitted jump keeps the larger step", "[llsa]") {
    std::vector<double> x(512, 0.0);
    for (std::size_t t = 150; t < 512; ++t) x[t] += 1.0;
    for (std::size_t t = 350; t < 512; ++t) x[t] += 4.0;
    ChangePointConfig cfg;
    cfg.max_jumps = 1;
    const auto jumps = detect_jumps(x, cfg, WaveletFilter::haar());
    REQUIRE(jumps.jumps.size() == 1);
    CHECK(std::abs(static_cast<long>(jumps.jumps[0].back().location) - 350) <= 1);
}

TEST_CASE("reconstruction is idempotent on piecewise-constant signals", "[llsa][property]") {
    // Zeroing redundant MODWT coefficients is not a projection, so noisy
    // inputs move on a second pass; noiseless steps are fixed points.
    for (std::size_t T : {128u, 256u, 512u}) {
        std::vector<double> x(T, 0.0);
        for (std::size_t t = T / 4; t < T; ++t) x[t] += 3.0;
        for (std::size_t t = (3 * T) / 5; t < T; ++t) x[t] -= 1.5;
        ChangePointConfig cfg;
        const auto once = reconstruct_column(x, cfg, WaveletFilter::haar());
        const auto twice = reconstruct_column(once, cfg, WaveletFilter::haar());
        double err = 0.0;
        for (std::size_t t = 0; t < T; ++t) err = std::max(err, std::abs(once[t] - twice[t]));
        CHECK(err < 1e-6);
    }
}

TEST_CASE("multivariate reconstruction is column-wise", "[llsa]") {
    const auto a = step_signal(128, 40, 3.0, 0.1, 1);
    const std::vector<double> b(128, 1.0);
    std::vector<double> time(128);
    for (std::size_t t = 0; t < 128; ++t) time[t] = static_cast<double>(t);
    const auto series = MultivariateSeries::from_columns({a, b}, time, {"a", "b"});
    const auto rec = reconstruct(series, {}, WaveletFilter::haar());
    CHECK(rec.values.rows() == 128);
    CHECK(rec.regions.size() == 2);
    CHECK(rec.regions[1].jumps.empty());
    CHECK(rec.values.column(0) == reconstruct_column(a, {}, WaveletFilter::haar()));
    CHECK(max_abs(rec.values.column(1)) == Catch::Approx(1.0).margin(1e-10));

    std::ostringstream out;
    write_regions_csv(out, rec);
    CHECK(out.str().rfind("column,jump,level,l,alpha,beta,n_alpha,n_beta,refinement_miss\n", 0) == 0);
}

TEST_CASE("config validation", "[llsa]") {
    ChangePointConfig cfg;
    cfg.refinement_depth = 5;
    CHECK_THROWS_AS(cfg.validate(512), ConfigError);
    cfg.refinement_depth = 4;
    CHECK_NOTHROW(cfg.validate(512));
    CHECK(cfg.depth_for(4) == 3);
    cfg = {};
    cfg.threshold = 0.0;
    CHECK_THROWS_AS(cfg.validate(512), ConfigError);
    cfg = {};
    cfg.max_jumps = 0;
    CHECK_THROWS_AS(cfg.validate(512), ConfigError);
    CHECK(ChangePointConfig{}.depth_for(4) == 3);
}
