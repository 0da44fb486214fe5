#include "mtm/core/error.hpp"
#include "mtm/core/synthetic.hpp"
#include "mtm/pipeline/encoder.hpp"

#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

using namespace mtm;
using namespace mtm::pipeline;
using wavelet::WaveletFilter;

namespace {

std::vector<double> noisy_step(std::size_t T, std::size_t at, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 0.3);
    std::vector<double> x(T);
    for (std::size_t t = 0; t < T; ++t) x[t] = (t >= at ? 2.0 : 0.0) + g(rng);
    return x;
}

Match synthetic_match(std::uint64_t seed, std::size_t points) {
    const std::vector<PlannedJump> jumps{{points / 2, 3.0}};
    return Match{"M", generate_synthetic_match(seed, points, jumps)};
}

} // namespace

TEST_CASE("causal reconstruction never looks ahead", "[encoder][property]") {
    const auto x = noisy_step(200, 90, 1);
    const auto base = causal_reconstruct_column(x, {}, WaveletFilter::haar(), 64);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(0.0, 5.0);
    for (std::size_t cut : {10u, 89u, 120u, 180u}) {
        auto y = x;
        for (std::size_t t = cut + 1; t < y.size(); ++t) y[t] = g(rng);
        const auto alt = causal_reconstruct_column(y, {}, WaveletFilter::haar(), 64);
        for (std::size_t t = 0; t <= cut; ++t) CHECK(alt[t] == base[t]);
    }
}

TEST_CASE("causal value is the last sample of a mirrored window", "[encoder][oracle]") {
    const auto x = noisy_step(150, 70, 3);
    const std::size_t H = 48;
    const auto out = causal_reconstruct_column(x, {}, WaveletFilter::haar(), H);
    CHECK(out[0] == x[0]);
    for (std::size_t t : {5u, 47u, 71u, 100u, 149u}) {
        const std::size_t n = std::min(t + 1, H);
        std::vector<double> w(x.begin() + static_cast<std::ptrdiff_t>(t + 1 - n), x.begin() + static_cast<std::ptrdiff_t>(t + 1));
        for (std::size_t k = n; k-- > 0;) w.push_back(w[k]);
        llsa::ChangePointConfig cfg;
        cfg.top_level = std::min(cfg.levels_for(w.size()), wavelet::default_levels(w.size()));
        CHECK(out[t] == llsa::reconstruct_column(w, cfg, WaveletFilter::haar())[n - 1]);
    }
}

TEST_CASE("constant columns pass through", "[encoder]") {
    const std::vector<double> c(90, 1.25);
    for (double v : causal_reconstruct_column(c, {}, WaveletFilter::daubechies4(), 32)) CHECK(v == Catch::Approx(1.25).margin(1e-12));
}

TEST_CASE("encoded momentum equals the direct momentum of the reconstructions", "[encoder]") {
    const auto match = synthetic_match(4, 120);
    const auto schema = FeatureSchema::standard();
    const auto weights = momentum::IndicatorWeights::defaults(schema);
    const auto pressure = momentum::PressureMatrix::uniform();
    EncoderConfig cfg;
    cfg.history = 64;
    const auto enc = encode_match(match, schema, weights, pressure, cfg);
    REQUIRE(enc.momentum[0].size() == 120);
    REQUIRE(enc.victor.size() == 120);
    const auto filter = WaveletFilter::haar();
    const auto r1 = to_series(match.points, Side::P1, schema), r2 = to_series(match.points, Side::P2, schema);
    const auto c1 = causal_reconstruct(r1, cfg.change_points, filter, 64);
    const auto c2 = causal_reconstruct(r2, cfg.change_points, filter, 64);
    const double m12 = pressure.lookup_or_default(enc.players[0], enc.players[1]);
    const auto direct = momentum::momentum(c1, c2, weights, m12, enc.players[0], enc.players[1], &r1, &r2).values;
    CHECK(direct == enc.momentum[0]);

    EncoderConfig recon = cfg;
    recon.log_of_raw = false;
    const auto alt = encode_match(match, schema, weights, pressure, recon);
    CHECK(alt.momentum[0] == momentum::momentum(c1, c2, weights, m12, enc.players[0], enc.players[1]).values);
}

TEST_CASE("momentum CSV layout", "[encoder]") {
    const auto match = synthetic_match(5, 40);
    const auto schema = FeatureSchema::standard();
    const auto enc = encode_match(match, schema, momentum::IndicatorWeights::defaults(schema),
                                  momentum::PressureMatrix::uniform(), {});
    std::ostringstream out;
    write_momentum_csv(out, enc);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,elapsed_time,point_victor,Player A,Player B");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 40);
}

TEST_CASE("encoder config validation", "[encoder]") {
    EncoderConfig c;
    c.history = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.filter = "coiflet";
    CHECK_THROWS(c.validate());
}
