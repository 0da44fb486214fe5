#include "mtm/outcome/outcome.hpp"

#include "mtm/core/csv.hpp"
#include "mtm/core/error.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

namespace mtm::outcome {

RankingTable RankingTable::from_csv(std::istream& in) {
    const CsvTable table = read_csv(in);
    const auto pcol = table.column("player");
    if (!pcol) throw SchemaError("player");
    const auto rcol = table.column("rank");
    if (!rcol) throw SchemaError("rank");
    const std::size_t pc = *pcol;
    const std::size_t rc = *rcol;
    RankingTable t;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != table.header.size()) throw ParseError(r + 1, "wrong number of cells");
        double v = 0.0;
        try {
            v = parse_double(row[rc]);
        } catch (const std::invalid_argument&) {
            throw ParseError(r + 1, "non-numeric rank '" + row[rc] + "'");
        }
        if (v != std::floor(v)) throw ParseError(r + 1, "rank must be an integer");
        t.set(row[pc], static_cast<int>(v));
    }
    return t;
}

RankingTable RankingTable::from_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open rankings " + path.string());
    return from_csv(in);
}

void RankingTable::set(const std::string& player, int rank) {
    if (rank < 1) throw InvariantError("rank of '" + player + "' must be >= 1");
    ranks_[player] = rank;
}

std::optional<int> RankingTable::find(const std::string& player) const {
    const auto it = ranks_.find(player);
    if (it == ranks_.end()) return std::nullopt;
    return it->second;
}

int RankingTable::at(const std::string& player) const {
    const auto r = find(player);
    if (!r) throw UnknownPlayerError(player);
    return *r;
}

void RankingTable::write_csv(std::ostream& out) const {
    out << "player,rank\n";
    for (const auto& [p, r] : ranks_) out << csv_escape(p) << ',' << r << '\n';
}

OutcomeDecision decide(double p_i, double p_j, const std::string& i, const std::string& j, const RankingTable& ranks) {
    if (!std::isfinite(p_i) || !std::isfinite(p_j)) throw InvariantError("forecasts must be finite");
    OutcomeDecision d;
    d.margin = p_i - p_j;
    if (p_i > p_j) {
        d.winner = 0;
    } else if (p_i < p_j) {
        d.winner = 1;
    } else {
        d.tiebreak_used = true;
        const auto ri = ranks.find(i);
        const auto rj = ranks.find(j);
        if (!ri && !rj) throw UnresolvedTieError("tie between '" + i + "' and '" + j + "' with neither ranked");
        if (ri && rj && *ri == *rj) {
            throw UnresolvedTieError("tie between '" + i + "' and '" + j + "' with equal rank " + std::to_string(*ri));
        }
        if (ri && (!rj || *ri < *rj)) {
            d.winner = 0;
        } else {
            d.winner = 1;
        }
    }
    d.winner_name = d.winner == 0 ? i : j;
    return d;
}

MatchSimulation simulate_match(const Forecaster& forecaster, const pipeline::MatchMomentum& m,
                               const RankingTable& ranks) {
    const std::size_t T = m.victor.size();
    if (T < 2) throw EmptyInputError("match needs at least two points to simulate");
    MatchSimulation sim;
    sim.match_id = m.match_id;
    sim.players = m.players;
    const std::size_t L = forecaster.window();
    std::vector<double> w1, w2;
    for (std::size_t t = 1; t < T; ++t) {
        forecast::padded_window(m.momentum[0], t - 1, L, w1);
        forecast::padded_window(m.momentum[1], t - 1, L, w2);
        PointDecision pd;
        pd.t = t;
        pd.p_i = forecaster.forecast(w1, {m.players[0], m.players[1], t - 1});
        pd.p_j = forecaster.forecast(w2, {m.players[1], m.players[0], t - 1});
        const auto d = decide(pd.p_i, pd.p_j, m.players[0], m.players[1], ranks);
        pd.winner = d.winner == 0 ? Side::P1 : Side::P2;
        pd.tiebreak_used = d.tiebreak_used;
        pd.actual = m.victor[t];
        ++sim.predicted_points[index_of(pd.winner)];
        sim.points.push_back(pd);
    }
    const auto d = decide(static_cast<double>(sim.predicted_points[0]), static_cast<double>(sim.predicted_points[1]),
                          m.players[0], m.players[1], ranks);
    sim.match_winner = d.winner == 0 ? Side::P1 : Side::P2;
    sim.match_tiebreak_used = d.tiebreak_used;
    return sim;
}

MatchSimulation simulate_match(const Forecaster& forecaster, const Match& match, const FeatureSchema& schema,
                               const momentum::IndicatorWeights& weights, const momentum::PressureMatrix& pressure,
                               const pipeline::EncoderConfig& encoder, const RankingTable& ranks) {
    return simulate_match(forecaster, pipeline::encode_match(match, schema, weights, pressure, encoder), ranks);
}

void write_decision_log(std::ostream& out, const MatchSimulation& sim) {
    out << "t,P_i,P_j,winner,tiebreak_used\n";
    for (const auto& p : sim.points) {
        out << p.t << ',' << format_double(p.p_i) << ',' << format_double(p.p_j) << ','
            << (p.winner == Side::P1 ? 1 : 2) << ',' << (p.tiebreak_used ? 1 : 0) << '\n';
    }
}

} // namespace mtm::outcome
