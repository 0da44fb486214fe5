#include "mtm/momentum/pressure.hpp"

#include "mtm/core/csv.hpp"
#include "mtm/core/error.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>

namespace mtm::momentum {

PressureMatrix::PressureMatrix(std::vector<std::string> players, std::vector<double> values)
    : players_(std::move(players)), values_(std::move(values)) {
    const std::size_t n = players_.size();
    if (values_.size() != n * n) throw ShapeError("pressure matrix needs n*n entries");
    for (std::size_t i = 0; i < n; ++i) {
        if (!index_.emplace(players_[i], i).second) {
            throw InvariantError("duplicate player '" + players_[i] + "' in pressure matrix");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (values_[i * n + i] != 1.0) {
            throw InvariantError("pressure diagonal for '" + players_[i] + "' is not 1");
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double v = values_[i * n + j];
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw InvariantError("pressure (" + players_[i] + ", " + players_[j] + ") must be positive");
            }
        }
    }
}

PressureMatrix PressureMatrix::uniform() {
    PressureMatrix m;
    m.uniform_ = true;
    return m;
}

PressureMatrix PressureMatrix::from_csv(std::istream& in) {
    const CsvTable table = read_csv(in);
    if (table.header.size() < 2) throw ShapeError("pressure CSV needs a header with player names");
    std::vector<std::string> players(table.header.begin() + 1, table.header.end());
    const std::size_t n = players.size();
    if (table.rows.size() != n) {
        throw InvariantError("pressure CSV has " + std::to_string(table.rows.size()) + " rows for " +
                             std::to_string(n) + " players");
    }
    std::vector<double> values;
    values.reserve(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& row = table.rows[r];
        if (row.size() != n + 1) throw ParseError(r + 1, "missing pressure entries");
        if (row[0] != players[r]) {
            throw InvariantError("row label '" + row[0] + "' does not match column label '" + players[r] + "'");
        }
        for (std::size_t c = 1; c <= n; ++c) {
            if (row[c].empty()) throw ParseError(r + 1, "missing pressure for pair (" + row[0] + ", " + players[c - 1] + ")");
            try {
                values.push_back(parse_double(row[c]));
            } catch (const std::invalid_argument&) {
                throw ParseError(r + 1, "non-numeric pressure '" + row[c] + "'");
            }
        }
    }
    return PressureMatrix(std::move(players), std::move(values));
}

PressureMatrix PressureMatrix::from_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open pressure matrix " + path.string());
    return from_csv(in);
}

double PressureMatrix::at(const std::string& i, const std::string& j) const {
    if (uniform_) return 1.0;
    const auto a = index_.find(i);
    if (a == index_.end()) throw UnknownPlayerError(i);
    const auto b = index_.find(j);
    if (b == index_.end()) throw UnknownPlayerError(j);
    return values_[a->second * players_.size() + b->second];
}

double PressureMatrix::lookup_or_default(const std::string& i, const std::string& j) const {
    if (uniform_) return 1.0;
    if (contains(i) && contains(j)) return at(i, j);
    static std::mutex mu;
    static std::set<std::pair<std::string, std::string>> warned;
    std::lock_guard lock(mu);
    if (warned.emplace(i, j).second) {
        spdlog::warn("no pressure value for ({}, {}); using 1.0", i, j);
    }
    return 1.0;
}

void PressureMatrix::write_csv(std::ostream& out) const {
    out << "player";
    for (const auto& p : players_) out << ',' << csv_escape(p);
    out << '\n';
    const std::size_t n = players_.size();
    for (std::size_t i = 0; i < n; ++i) {
        out << csv_escape(players_[i]);
        for (std::size_t j = 0; j < n; ++j) out << ',' << format_double(values_[i * n + j]);
        out << '\n';
    }
}

} // namespace mtm::momentum
