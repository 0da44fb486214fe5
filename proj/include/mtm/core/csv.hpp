#pragma once

#include "mtm/core/records.hpp"
#include "mtm/core/schema.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mtm {

/// Header plus string cells of a comma-separated file. Quoted fields may
/// contain commas and doubled quotes.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name, std::nullopt when absent.
    std::optional<std::size_t> column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

/// Shortest text that parses back to the same double.
std::string format_double(double v);
/// Throws std::invalid_argument when `text` is not entirely a finite number.
double parse_double(std::string_view text);

/// "H:MM:SS" (or "MM:SS", or plain seconds) to seconds.
double parse_elapsed(std::string_view text);
/// Integral seconds as "H:MM:SS"; other values as plain seconds.
std::string format_elapsed(double seconds);

/// Reads point-by-point records. Required columns: match_id, player1,
/// player2, elapsed_time and every schema column except the optional
/// psychological_factor pair (absent -> 0).
std::vector<MatchPointRecord> ingest_csv(const std::filesystem::path& path, const FeatureSchema& schema);
std::vector<MatchPointRecord> ingest_csv(std::istream& in, const FeatureSchema& schema);

void write_csv(std::ostream& out, std::span<const MatchPointRecord> records, const FeatureSchema& schema);
void write_csv(const std::filesystem::path& path, std::span<const MatchPointRecord> records,
               const FeatureSchema& schema);

} // namespace mtm
