#include "mtm/pipeline/encoder.hpp"

#include "mtm/core/csv.hpp"
#include "mtm/core/error.hpp"

#include <algorithm>
#include <ostream>

namespace mtm::pipeline {

void EncoderConfig::validate() const {
    if (history < 2) throw ConfigError("causal history must be >= 2 points");
    wavelet::WaveletFilter::by_name(filter);
    if (change_points.max_jumps < 1) throw ConfigError("max_jumps must be >= 1");
    if (!(change_points.threshold > 0.0)) throw ConfigError("detection threshold must be > 0");
}

std::vector<double> causal_reconstruct_column(std::span<const double> x, const llsa::ChangePointConfig& config,
                                              const wavelet::WaveletFilter& filter, std::size_t history) {
    const std::size_t T = x.size();
    std::vector<double> out(T);
    std::vector<double> ext;
    for (std::size_t t = 0; t < T; ++t) {
        const std::size_t n = std::min(t + 1, history);
        if (n < 2) {
            out[t] = x[t];
            continue;
        }
        const std::size_t first = t + 1 - n;
        ext.assign(x.begin() + static_cast<std::ptrdiff_t>(first), x.begin() + static_cast<std::ptrdiff_t>(t + 1));
        ext.insert(ext.end(), ext.rbegin(), ext.rend());
        llsa::ChangePointConfig local = config;
        local.top_level = std::min(config.levels_for(ext.size()), wavelet::default_levels(ext.size()));
        const auto rec = llsa::reconstruct_column(ext, local, filter);
        out[t] = rec[n - 1];
    }
    return out;
}

MultivariateSeries causal_reconstruct(const MultivariateSeries& x, const llsa::ChangePointConfig& config,
                                      const wavelet::WaveletFilter& filter, std::size_t history) {
    const std::size_t T = x.rows();
    const std::size_t D = x.cols();
    std::vector<double> values(T * D);
    for (std::size_t c = 0; c < D; ++c) {
        const auto col = causal_reconstruct_column(x.column(c), config, filter, history);
        for (std::size_t t = 0; t < T; ++t) values[t * D + c] = col[t];
    }
    return x.with_values(std::move(values));
}

MatchMomentum encode_match(const Match& match, const FeatureSchema& schema, const momentum::IndicatorWeights& weights,
                           const momentum::PressureMatrix& pressure, const EncoderConfig& config) {
    config.validate();
    const auto filter = wavelet::WaveletFilter::by_name(config.filter);
    MatchMomentum out;
    out.match_id = match.id;
    out.players = {match.player(Side::P1), match.player(Side::P2)};
    std::array<MultivariateSeries, 2> raw{to_series(match.points, Side::P1, schema),
                                          to_series(match.points, Side::P2, schema)};
    const auto rebuild = [&](const MultivariateSeries& s) {
        if (config.causal) return causal_reconstruct(s, config.change_points, filter, config.history);
        return llsa::reconstruct(s, config.change_points, filter).values;
    };
    std::array<MultivariateSeries, 2> rec{rebuild(raw[0]), rebuild(raw[1])};
    for (Side side : {Side::P1, Side::P2}) {
        const std::size_t i = index_of(side);
        const std::size_t j = index_of(opponent(side));
        const double m = pressure.lookup_or_default(out.players[i], out.players[j]);
        const auto* ri = config.log_of_raw ? &raw[i] : nullptr;
        const auto* rj = config.log_of_raw ? &raw[j] : nullptr;
        out.momentum[i] = momentum::momentum(rec[i], rec[j], weights, m, out.players[i], out.players[j], ri, rj).values;
    }
    for (const auto& p : match.points) out.victor.push_back(p.point_victor);
    out.time_index = raw[0].time_index();
    return out;
}

void write_momentum_csv(std::ostream& out, const MatchMomentum& m) {
    out << "t,elapsed_time,point_victor," << csv_escape(m.players[0]) << ',' << csv_escape(m.players[1]) << '\n';
    for (std::size_t t = 0; t < m.victor.size(); ++t) {
        out << t << ',' << format_double(m.time_index[t]) << ',' << (m.victor[t] == Side::P1 ? 1 : 2) << ','
            << format_double(m.momentum[0][t]) << ',' << format_double(m.momentum[1][t]) << '\n';
    }
}

} // namespace mtm::pipeline
