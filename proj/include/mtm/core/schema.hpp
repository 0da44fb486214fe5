#pragma once

#include "mtm/core/records.hpp"
#include "mtm/core/series.hpp"

#include <span>
#include <string>
#include <vector>

namespace mtm {

enum class FeatureKind {
    PerPlayer,  ///< recorded separately for each player: `<name>_p1`, `<name>_p2`
    SharedFlag, ///< one column holding 1 or 2; becomes a per-player 0/1 indicator
};

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::PerPlayer;
};

/// Ordered feature list used to turn records into per-player series.
class FeatureSchema {
public:
    /// Throws SchemaError if a name does not resolve to a record field.
    explicit FeatureSchema(std::vector<FeatureSpec> features);

    /// The ten retained point-level variables (18 CSV feature columns).
    static FeatureSchema standard();

    const std::vector<FeatureSpec>& features() const { return features_; }
    std::size_t size() const { return features_.size(); }
    /// Number of per-player momentum features (one per schema entry).
    std::size_t momentum_feature_count() const { return features_.size(); }
    std::vector<std::string> names() const;

    /// CSV feature columns in file order, e.g. `p_ace_p1, p_ace_p2, server`.
    std::vector<std::string> csv_columns() const;

    /// Value of feature `k` from `player`'s point of view.
    double value(const MatchPointRecord& r, std::size_t k, Side player) const;

    /// Index of a feature by name, or size() when absent.
    std::size_t find(const std::string& name) const;

private:
    std::vector<FeatureSpec> features_;
};

/// T x D series of one player's features, column order = schema order.
/// Throws EmptyInputError on no records and InvariantError when the records
/// mix matches or violate the series invariants.
MultivariateSeries to_series(std::span<const MatchPointRecord> records, Side player,
                             const FeatureSchema& schema);

/// Value accessor for a stored per-player field; nullptr for unknown names.
double* player_field(PlayerPointStats& s, const std::string& name);
const double* player_field(const PlayerPointStats& s, const std::string& name);

} // namespace mtm
