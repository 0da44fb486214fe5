#include "mtm/core/synthetic.hpp"

#include "mtm/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace mtm {

namespace {

double round_to(double v, double step) { return std::round(v / step) * step; }

/// Game/set state machine for one match.
class Scoreboard {
public:
    Side server() const { return server_; }
    const std::array<int, 2>& sets() const { return sets_; }
    const std::array<int, 2>& games() const { return games_; }

    /// True when the receiver is one point from winning the current game.
    bool break_point() const {
        if (tiebreak()) return false;
        const auto r = index_of(opponent(server_));
        const auto s = index_of(server_);
        return points_[r] >= 3 && points_[r] > points_[s];
    }

    void play(Side winner) {
        const auto w = index_of(winner);
        const auto l = 1 - w;
        ++points_[w];
        if (tiebreak()) {
            ++tiebreak_points_;
            if (tiebreak_points_ % 2 == 1) server_ = opponent(server_);
            if (points_[w] >= 7 && points_[w] - points_[l] >= 2) finish_set(winner);
            return;
        }
        if (points_[w] >= 4 && points_[w] - points_[l] >= 2) {
            points_ = {0, 0};
            ++games_[w];
            server_ = opponent(server_);
            if (games_[w] >= 6 && games_[w] - games_[l] >= 2) finish_set(winner);
        }
    }

private:
    bool tiebreak() const { return games_[0] == 6 && games_[1] == 6; }

    void finish_set(Side winner) {
        ++sets_[index_of(winner)];
        games_ = {0, 0};
        points_ = {0, 0};
        tiebreak_points_ = 0;
    }

    Side server_ = Side::P1;
    std::array<int, 2> sets_{0, 0};
    std::array<int, 2> games_{0, 0};
    std::array<int, 2> points_{0, 0};
    int tiebreak_points_ = 0;
};

} // namespace

SyntheticMatch simulate_synthetic_match(std::uint64_t seed, std::size_t n_points,
                                        std::span<const PlannedJump> jumps,
                                        const SyntheticMatchOptions& options) {
    for (const auto& j : jumps) {
        if (j.index >= n_points) {
            throw ConfigError("planted jump index " + std::to_string(j.index) + " >= n_points " +
                              std::to_string(n_points));
        }
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SyntheticMatch out;
    out.records.reserve(n_points);
    out.latent_p1.resize(n_points);
    out.latent_p2.resize(n_points);
    out.p1_win_probability.resize(n_points);

    for (std::size_t t = 0; t < n_points; ++t) {
        double level = options.initial_level;
        for (const auto& j : jumps) {
            if (j.index <= t) level += j.magnitude;
        }
        out.latent_p1[t] = options.skill1 + level;
        out.latent_p2[t] = options.skill2;
    }

    Scoreboard board;
    double clock = 0.0;
    for (std::size_t t = 0; t < n_points; ++t) {
        MatchPointRecord r;
        r.match_id = options.match_id;
        r.player1 = options.player1;
        r.player2 = options.player2;
        r.server = board.server();
        for (std::size_t p = 0; p < 2; ++p) {
            r.stats[p].sets = board.sets()[p];
            r.stats[p].games = board.games()[p];
        }
        const bool break_point = board.break_point();

        const double serve = r.server == Side::P1 ? options.serve_advantage : -options.serve_advantage;
        const double logit = options.form_gain * (out.latent_p1[t] - out.latent_p2[t]) + serve;
        const double p1_win = 1.0 / (1.0 + std::exp(-logit));
        out.p1_win_probability[t] = p1_win;
        r.point_victor = unit(rng) < p1_win ? Side::P1 : Side::P2;

        const auto srv = index_of(r.server);
        const auto rcv = 1 - srv;
        const bool server_won = r.point_victor == r.server;
        const double server_form = srv == 0 ? out.latent_p1[t] : out.latent_p2[t];

        const bool ace = server_won && unit(rng) < std::clamp(0.08 + 0.03 * server_form, 0.01, 0.3);
        const bool double_fault = !server_won && unit(rng) < 0.12;
        r.stats[srv].ace = ace ? 1.0 : 0.0;
        r.stats[srv].double_fault = double_fault ? 1.0 : 0.0;
        if (break_point) {
            r.stats[rcv].break_pt_won = server_won ? 0.0 : 1.0;
            r.stats[rcv].break_pt_missed = server_won ? 1.0 : 0.0;
        }

        double shots = 0.0;
        if (!ace && !double_fault) {
            std::geometric_distribution<int> rally(0.25);
            shots = 1.0 + rally(rng);
        }
        const auto loser = index_of(opponent(r.point_victor));
        for (std::size_t p = 0; p < 2; ++p) {
            double metres = 0.5 + shots * (2.5 + unit(rng));
            if (p == loser) metres *= 1.15;
            r.stats[p].distance_run = round_to(metres, 0.01);
        }

        const double latent[2] = {out.latent_p1[t], out.latent_p2[t]};
        for (std::size_t p = 0; p < 2; ++p) {
            const double psych = options.psych_baseline + options.psych_noise * (latent[p] + gauss(rng));
            r.stats[p].psychological_factor = round_to(std::max(psych, 0.0), 1e-4);
        }

        r.elapsed_time = clock;
        clock += std::round(12.0 + 3.5 * shots + 8.0 * unit(rng));

        board.play(r.point_victor);
        out.records.push_back(std::move(r));
    }
    return out;
}

std::vector<MatchPointRecord> generate_synthetic_match(std::uint64_t seed, std::size_t n_points,
                                                       std::span<const PlannedJump> jumps,
                                                       const SyntheticMatchOptions& options) {
    return simulate_synthetic_match(seed, n_points, jumps, options).records;
}

SyntheticCorpus generate_corpus(const CorpusOptions& options) {
    if (options.players < 2) throw ConfigError("corpus needs at least two players");
    if (options.max_shifts < options.min_shifts) throw ConfigError("max_shifts < min_shifts");
    if (options.points < 2 * options.min_gap + 2) throw ConfigError("corpus matches too short for min_gap");

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SyntheticCorpus corpus;
    for (std::size_t p = 0; p < options.players; ++p) {
        char name[32];
        std::snprintf(name, sizeof(name), "Player %02zu", p + 1);
        corpus.players.emplace_back(name);
        corpus.skills.push_back(options.skill_sd * gauss(rng));
    }

    std::uniform_int_distribution<std::size_t> pick(0, options.players - 1);
    std::uniform_int_distribution<std::size_t> shift_count(options.min_shifts, options.max_shifts);
    std::bernoulli_distribution coin(0.5);

    for (std::size_t m = 0; m < options.matches; ++m) {
        const std::size_t a = pick(rng);
        std::size_t b = pick(rng);
        while (b == a) b = pick(rng);

        const std::size_t shifts = shift_count(rng);
        std::vector<std::size_t> at;
        std::uniform_int_distribution<std::size_t> where(options.min_gap, options.points - options.min_gap - 1);
        for (std::size_t attempt = 0; at.size() < shifts && attempt < 10000; ++attempt) {
            const std::size_t idx = where(rng);
            const bool spaced = std::all_of(at.begin(), at.end(), [&](std::size_t o) {
                return (idx > o ? idx - o : o - idx) >= options.min_gap;
            });
            if (spaced) at.push_back(idx);
        }
        std::sort(at.begin(), at.end());

        double level = coin(rng) ? options.regime_level : -options.regime_level;
        SyntheticMatchOptions mo = options.base;
        char id[32];
        std::snprintf(id, sizeof(id), "M%03zu", m + 1);
        mo.match_id = id;
        mo.player1 = corpus.players[a];
        mo.player2 = corpus.players[b];
        mo.skill1 = corpus.skills[a];
        mo.skill2 = corpus.skills[b];
        mo.initial_level = level;

        std::vector<PlannedJump> jumps;
        for (auto idx : at) {
            jumps.push_back({idx, -2.0 * level});
            level = -level;
        }
        const std::uint64_t match_seed = rng();
        auto sim = simulate_synthetic_match(match_seed, options.points, jumps, mo);
        corpus.matches.push_back(Match{mo.match_id, std::move(sim.records)});
        corpus.planted.push_back(std::move(jumps));
    }
    return corpus;
}

} // namespace mtm
