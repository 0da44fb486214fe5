#pragma once

#include "mtm/core/records.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mtm {

/// Level shift planted in player 1's latent form, in units of the
/// psychological-factor noise standard deviation.
struct PlannedJump {
    std::size_t index = 0;
    double magnitude = 0.0;
};

struct SyntheticMatchOptions {
    std::string match_id = "synthetic";
    std::string player1 = "Player A";
    std::string player2 = "Player B";
    double skill1 = 0.0;        ///< persistent latent offset of player 1
    double skill2 = 0.0;
    double initial_level = 0.0; ///< player 1 latent level before any jump
    double psych_baseline = 5.0;
    double psych_noise = 1.0;   ///< sigma of the observed psychological factor
    double form_gain = 1.2;     ///< point-win logit per unit of latent difference
    double serve_advantage = 0.3;
};

/// Records plus the hidden signals that produced them.
struct SyntheticMatch {
    std::vector<MatchPointRecord> records;
    std::vector<double> latent_p1; ///< latent form, noise-sigma units
    std::vector<double> latent_p2;
    std::vector<double> p1_win_probability;
};

/// Simulates a match point by point. The latent form of each player drives
/// the point-win probability (logistic in the form difference plus a serve
/// bonus) and is observed with Gaussian noise through psychological_factor.
/// Scoring follows games/sets with 6-6 tiebreaks; the match runs for exactly
/// `n_points` points. Pure function of its arguments.
SyntheticMatch simulate_synthetic_match(std::uint64_t seed, std::size_t n_points,
                                        std::span<const PlannedJump> jumps,
                                        const SyntheticMatchOptions& options = {});

std::vector<MatchPointRecord> generate_synthetic_match(std::uint64_t seed, std::size_t n_points,
                                                       std::span<const PlannedJump> jumps,
                                                       const SyntheticMatchOptions& options = {});

struct CorpusOptions {
    std::uint64_t seed = 7;
    std::size_t matches = 40;
    std::size_t points = 500;
    std::size_t players = 16;
    double skill_sd = 0.3;
    std::size_t min_shifts = 2;
    std::size_t max_shifts = 4;
    double regime_level = 1.5; ///< |player 1 latent level| inside a regime
    std::size_t min_gap = 60;  ///< minimum spacing of regime shifts (and from the ends)
    SyntheticMatchOptions base;
};

struct SyntheticCorpus {
    std::vector<Match> matches;
    std::vector<std::vector<PlannedJump>> planted; ///< per match
    std::vector<std::string> players;
    std::vector<double> skills;                    ///< per player, same order
};

/// Matches between randomly paired players whose form flips between
/// +regime_level and -regime_level at random shift points.
SyntheticCorpus generate_corpus(const CorpusOptions& options);

} // namespace mtm
