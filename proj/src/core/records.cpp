#include "mtm/core/records.hpp"

#include "mtm/core/error.hpp"

#include <cmath>
#include <unordered_map>

namespace mtm {

namespace {

std::string at_row(std::size_t i) { return " at row " + std::to_string(i); }

} // namespace

void validate_match(std::span<const MatchPointRecord> records) {
    if (records.empty()) {
        return;
    }
    const auto& first = records.front();
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.match_id != first.match_id || r.player1 != first.player1 || r.player2 != first.player2) {
            throw InvariantError("mixed match id or players" + at_row(i));
        }
        for (const auto& s : r.stats) {
            if (!(s.distance_run >= 0.0)) {
                throw InvariantError("negative distance_run" + at_row(i));
            }
        }
        if (i == 0) {
            continue;
        }
        const auto& prev = records[i - 1];
        if (!(r.elapsed_time > prev.elapsed_time)) {
            throw InvariantError("elapsed_time not increasing" + at_row(i));
        }
        bool new_set = false;
        for (std::size_t p = 0; p < 2; ++p) {
            if (r.stats[p].sets < prev.stats[p].sets) {
                throw InvariantError("sets counter decreased" + at_row(i));
            }
            new_set = new_set || r.stats[p].sets > prev.stats[p].sets;
        }
        // games count within the current set; they reset when a set is won
        if (!new_set) {
            for (std::size_t p = 0; p < 2; ++p) {
                if (r.stats[p].games < prev.stats[p].games) {
                    throw InvariantError("games counter decreased within a set" + at_row(i));
                }
            }
        }
    }
}

std::vector<Match> group_matches(std::span<const MatchPointRecord> records) {
    std::vector<Match> matches;
    std::unordered_map<std::string, std::size_t> slot;
    for (const auto& r : records) {
        auto [it, inserted] = slot.try_emplace(r.match_id, matches.size());
        if (inserted) {
            matches.push_back(Match{r.match_id, {}});
        }
        matches[it->second].points.push_back(r);
    }
    return matches;
}

std::vector<MatchPointRecord> flatten(std::span<const Match> matches) {
    std::vector<MatchPointRecord> out;
    for (const auto& m : matches) {
        out.insert(out.end(), m.points.begin(), m.points.end());
    }
    return out;
}

} // namespace mtm
