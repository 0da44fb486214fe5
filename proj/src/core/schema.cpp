#include "mtm/core/schema.hpp"

#include "mtm/core/error.hpp"

namespace mtm {

double* player_field(PlayerPointStats& s, const std::string& name) {
    if (name == "p_sets") return &s.sets;
    if (name == "p_games") return &s.games;
    if (name == "p_ace") return &s.ace;
    if (name == "p_double_fault") return &s.double_fault;
    if (name == "p_break_pt_missed") return &s.break_pt_missed;
    if (name == "p_break_pt_won") return &s.break_pt_won;
    if (name == "p_distance_run") return &s.distance_run;
    if (name == "psychological_factor") return &s.psychological_factor;
    return nullptr;
}

const double* player_field(const PlayerPointStats& s, const std::string& name) {
    return player_field(const_cast<PlayerPointStats&>(s), name);
}

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> features) : features_(std::move(features)) {
    PlayerPointStats probe;
    for (const auto& f : features_) {
        const bool ok = f.kind == FeatureKind::PerPlayer
                            ? player_field(probe, f.name) != nullptr
                            : (f.name == "server" || f.name == "point_victor");
        if (!ok) {
            throw SchemaError(f.name);
        }
    }
}

FeatureSchema FeatureSchema::standard() {
    return FeatureSchema({
        {"p_sets", FeatureKind::PerPlayer},
        {"p_games", FeatureKind::PerPlayer},
        {"server", FeatureKind::SharedFlag},
        {"point_victor", FeatureKind::SharedFlag},
        {"p_ace", FeatureKind::PerPlayer},
        {"p_double_fault", FeatureKind::PerPlayer},
        {"p_break_pt_missed", FeatureKind::PerPlayer},
        {"p_break_pt_won", FeatureKind::PerPlayer},
        {"p_distance_run", FeatureKind::PerPlayer},
        {"psychological_factor", FeatureKind::PerPlayer},
    });
}

std::vector<std::string> FeatureSchema::names() const {
    std::vector<std::string> out;
    for (const auto& f : features_) out.push_back(f.name);
    return out;
}

std::vector<std::string> FeatureSchema::csv_columns() const {
    std::vector<std::string> out;
    for (const auto& f : features_) {
        if (f.kind == FeatureKind::PerPlayer) {
            out.push_back(f.name + "_p1");
            out.push_back(f.name + "_p2");
        } else {
            out.push_back(f.name);
        }
    }
    return out;
}

double FeatureSchema::value(const MatchPointRecord& r, std::size_t k, Side player) const {
    const auto& f = features_[k];
    if (f.kind == FeatureKind::SharedFlag) {
        const Side flag = f.name == "server" ? r.server : r.point_victor;
        return flag == player ? 1.0 : 0.0;
    }
    return *player_field(r.of(player), f.name);
}

std::size_t FeatureSchema::find(const std::string& name) const {
    for (std::size_t k = 0; k < features_.size(); ++k) {
        if (features_[k].name == name) return k;
    }
    return features_.size();
}

MultivariateSeries to_series(std::span<const MatchPointRecord> records, Side player,
                             const FeatureSchema& schema) {
    if (records.empty()) {
        throw EmptyInputError("to_series: no records");
    }
    const std::string& match = records.front().match_id;
    const std::size_t rows = records.size();
    const std::size_t cols = schema.size();
    std::vector<double> values(rows * cols);
    std::vector<double> times(rows);
    for (std::size_t t = 0; t < rows; ++t) {
        if (records[t].match_id != match) {
            throw InvariantError("to_series: records span more than one match");
        }
        times[t] = records[t].elapsed_time;
        for (std::size_t k = 0; k < cols; ++k) {
            values[t * cols + k] = schema.value(records[t], k, player);
        }
    }
    return MultivariateSeries(std::move(values), rows, cols, std::move(times), schema.names());
}

} // namespace mtm
