#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace mtm {

enum class Side : int { P1 = 0, P2 = 1 };

inline Side opponent(Side s) { return s == Side::P1 ? Side::P2 : Side::P1; }
inline std::size_t index_of(Side s) { return static_cast<std::size_t>(s); }

/// Per-player counters and indicators of one point. Booleans are stored as 0/1.
struct PlayerPointStats {
    double sets = 0.0;
    double games = 0.0;
    double ace = 0.0;
    double double_fault = 0.0;
    double break_pt_missed = 0.0;
    double break_pt_won = 0.0;
    double distance_run = 0.0;
    double psychological_factor = 0.0;

    bool operator==(const PlayerPointStats&) const = default;
};

/// One row of point-by-point match data.
struct MatchPointRecord {
    std::string match_id;
    std::string player1;
    std::string player2;
    double elapsed_time = 0.0; ///< seconds since the first point started
    Side server = Side::P1;
    Side point_victor = Side::P1;
    std::array<PlayerPointStats, 2> stats{};

    const std::string& player(Side s) const { return s == Side::P1 ? player1 : player2; }
    const PlayerPointStats& of(Side s) const { return stats[index_of(s)]; }

    bool operator==(const MatchPointRecord&) const = default;
};

/// All points of one match in play order.
struct Match {
    std::string id;
    std::vector<MatchPointRecord> points;

    const std::string& player(Side s) const { return points.front().player(s); }
};

/// Checks the per-match invariants: one match id and player pair, counters
/// consistent, distances non-negative, elapsed time strictly increasing.
/// Throws InvariantError naming the offending row.
void validate_match(std::span<const MatchPointRecord> records);

/// Groups records by match id, preserving first-appearance order of matches
/// and file order within a match.
std::vector<Match> group_matches(std::span<const MatchPointRecord> records);

std::vector<MatchPointRecord> flatten(std::span<const Match> matches);

} // namespace mtm
