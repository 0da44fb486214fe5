#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace mtm::momentum {

/// Player-pair pressure factors m(i, j) with unit diagonal.
class PressureMatrix {
public:
    /// Row-major n x n over `players`; throws InvariantError for a diagonal
    /// other than 1 or a non-positive entry.
    PressureMatrix(std::vector<std::string> players, std::vector<double> values);

    /// Matrix that knows no players and answers 1 for every pair silently.
    static PressureMatrix uniform();

    /// CSV: header `player,<name>...`, one row per player in the same order.
    static PressureMatrix from_csv(std::istream& in);
    static PressureMatrix from_csv(const std::filesystem::path& path);

    bool is_uniform() const { return uniform_; }
    bool contains(const std::string& player) const { return index_.count(player) != 0; }
    const std::vector<std::string>& players() const { return players_; }

    /// m(i, j); throws UnknownPlayerError.
    double at(const std::string& i, const std::string& j) const;
    /// m(i, j), or 1 with a one-time warning per pair when either is unknown.
    double lookup_or_default(const std::string& i, const std::string& j) const;

    void write_csv(std::ostream& out) const;

private:
    PressureMatrix() = default;

    std::vector<std::string> players_;
    std::vector<double> values_;
    std::map<std::string, std::size_t> index_;
    bool uniform_ = false;
};

} // namespace mtm::momentum
