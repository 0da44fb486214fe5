#include "mtm/core/csv.hpp"

#include "mtm/core/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mtm {

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cell));
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    out.push_back(std::move(cell));
    return out;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path.string() + "'");
    }
    return read_csv(in);
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return v;
}

double parse_elapsed(std::string_view text) {
    if (text.find(':') == std::string_view::npos) {
        return parse_double(text);
    }
    double total = 0.0;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(':', start);
        const auto part = text.substr(start, pos == std::string_view::npos ? text.size() - start : pos - start);
        total = total * 60.0 + parse_double(part);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return total;
}

std::string format_elapsed(double seconds) {
    if (seconds >= 0.0 && seconds == std::floor(seconds) && seconds < 1e9) {
        const auto s = static_cast<long long>(seconds);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld:%02lld:%02lld", s / 3600, (s / 60) % 60, s % 60);
        return buf;
    }
    return format_double(seconds);
}

namespace {

struct ColumnMap {
    std::size_t match_id, player1, player2, elapsed;
    // per schema feature: [p1, p2] for per-player features, [shared, shared] otherwise;
    // optional features that are absent hold npos
    std::vector<std::array<std::size_t, 2>> features;
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

ColumnMap map_columns(const CsvTable& table, const FeatureSchema& schema) {
    auto require = [&](const std::string& name) {
        auto c = table.column(name);
        if (!c) throw SchemaError(name);
        return *c;
    };
    ColumnMap map{require("match_id"), require("player1"), require("player2"), require("elapsed_time"), {}};
    for (const auto& f : schema.features()) {
        if (f.kind == FeatureKind::SharedFlag) {
            const auto c = require(f.name);
            map.features.push_back({c, c});
            continue;
        }
        const auto c1 = table.column(f.name + "_p1");
        const auto c2 = table.column(f.name + "_p2");
        if (f.name == "psychological_factor" && !c1 && !c2) {
            map.features.push_back({npos, npos});
            continue;
        }
        if (!c1) throw SchemaError(f.name + "_p1");
        if (!c2) throw SchemaError(f.name + "_p2");
        map.features.push_back({*c1, *c2});
    }
    return map;
}

Side parse_side(std::string_view text, std::size_t row, const std::string& column) {
    double v = 0.0;
    try {
        v = parse_double(text);
    } catch (const std::invalid_argument&) {
        throw ParseError(row, "column '" + column + "' expects 1 or 2, got '" + std::string(text) + "'");
    }
    if (v == 1.0) return Side::P1;
    if (v == 2.0) return Side::P2;
    throw ParseError(row, "column '" + column + "' expects 1 or 2, got '" + std::string(text) + "'");
}

} // namespace

std::vector<MatchPointRecord> ingest_csv(std::istream& in, const FeatureSchema& schema) {
    const CsvTable table = read_csv(in);
    const ColumnMap map = map_columns(table, schema);
    std::vector<MatchPointRecord> records;
    records.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& cells = table.rows[i];
        const std::size_t row = i + 1;
        if (cells.size() != table.header.size()) {
            throw ParseError(row, "expected " + std::to_string(table.header.size()) + " cells, got " +
                                      std::to_string(cells.size()));
        }
        MatchPointRecord r;
        r.match_id = cells[map.match_id];
        r.player1 = cells[map.player1];
        r.player2 = cells[map.player2];
        try {
            r.elapsed_time = parse_elapsed(cells[map.elapsed]);
        } catch (const std::invalid_argument&) {
            throw ParseError(row, "column 'elapsed_time' is not a time: '" + cells[map.elapsed] + "'");
        }
        for (std::size_t k = 0; k < schema.size(); ++k) {
            const auto& f = schema.features()[k];
            const auto [c1, c2] = map.features[k];
            if (f.kind == FeatureKind::SharedFlag) {
                const Side s = parse_side(cells[c1], row, f.name);
                (f.name == "server" ? r.server : r.point_victor) = s;
                continue;
            }
            if (c1 == npos) continue;
            for (std::size_t p = 0; p < 2; ++p) {
                const std::size_t c = p == 0 ? c1 : c2;
                try {
                    *player_field(r.stats[p], f.name) = parse_double(cells[c]);
                } catch (const std::invalid_argument&) {
                    throw ParseError(row, "column '" + table.header[c] + "' is not numeric: '" + cells[c] + "'");
                }
            }
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<MatchPointRecord> ingest_csv(const std::filesystem::path& path, const FeatureSchema& schema) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path.string() + "'");
    }
    return ingest_csv(in, schema);
}

void write_csv(std::ostream& out, std::span<const MatchPointRecord> records, const FeatureSchema& schema) {
    out << "match_id,player1,player2,elapsed_time";
    for (const auto& c : schema.csv_columns()) out << ',' << c;
    out << '\n';
    for (const auto& r : records) {
        out << csv_escape(r.match_id) << ',' << csv_escape(r.player1) << ',' << csv_escape(r.player2) << ','
            << format_elapsed(r.elapsed_time);
        for (const auto& f : schema.features()) {
            if (f.kind == FeatureKind::SharedFlag) {
                const Side s = f.name == "server" ? r.server : r.point_victor;
                out << ',' << (s == Side::P1 ? 1 : 2);
            } else {
                out << ',' << format_double(*player_field(r.stats[0], f.name)) << ','
                    << format_double(*player_field(r.stats[1], f.name));
            }
        }
        out << '\n';
    }
}

void write_csv(const std::filesystem::path& path, std::span<const MatchPointRecord> records,
               const FeatureSchema& schema) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    write_csv(out, records, schema);
}

} // namespace mtm
