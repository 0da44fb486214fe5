#pragma once

#include "mtm/core/records.hpp"
#include "mtm/forecast/model.hpp"
#include "mtm/pipeline/encoder.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mtm::outcome {

/// Historical ranking, 1 = best.
class RankingTable {
public:
    RankingTable() = default;

    /// CSV with columns player,rank.
    static RankingTable from_csv(std::istream& in);
    static RankingTable from_csv(const std::filesystem::path& path);

    /// Throws InvariantError for rank < 1.
    void set(const std::string& player, int rank);
    std::optional<int> find(const std::string& player) const;
    /// Throws UnknownPlayerError.
    int at(const std::string& player) const;
    std::size_t size() const { return ranks_.size(); }
    const std::map<std::string, int>& entries() const { return ranks_; }

    void write_csv(std::ostream& out) const;

private:
    std::map<std::string, int> ranks_;
};

struct OutcomeDecision {
    int winner = 0;          ///< 0 = player i, 1 = player j
    std::string winner_name;
    double margin = 0.0;     ///< P_i - P_j
    bool tiebreak_used = false;
};

/// Higher forecast wins; exact equality goes to the better-ranked player (a
/// ranked player beats an unranked one). Throws UnresolvedTieError when
/// neither is ranked or both hold the same rank.
OutcomeDecision decide(double p_i, double p_j, const std::string& i, const std::string& j, const RankingTable& ranks);

struct ForecastContext {
    std::string player;
    std::string opponent;
    std::size_t t = 0; ///< index of the last point in the window
};

/// Anything that maps a momentum window to the next value.
class Forecaster {
public:
    virtual ~Forecaster() = default;
    virtual std::size_t window() const = 0;
    virtual double forecast(std::span<const double> window, const ForecastContext& ctx) const = 0;
};

class ModelForecaster : public Forecaster {
public:
    explicit ModelForecaster(const forecast::ForecastModel& model) : model_(&model) {}
    std::size_t window() const override { return model_->config().window; }
    double forecast(std::span<const double> window, const ForecastContext&) const override {
        return model_->forecast_next(window);
    }

private:
    const forecast::ForecastModel* model_;
};

struct PointDecision {
    std::size_t t = 0;  ///< predicted point
    double p_i = 0.0;   ///< forecast for player 1
    double p_j = 0.0;   ///< forecast for player 2
    Side winner = Side::P1;
    bool tiebreak_used = false;
    Side actual = Side::P1;
};

struct MatchSimulation {
    std::string match_id;
    std::array<std::string, 2> players;
    std::vector<PointDecision> points;
    std::array<std::size_t, 2> predicted_points{0, 0};
    Side match_winner = Side::P1;
    bool match_tiebreak_used = false;
};

/// Rolls forward over points 1..T-1: each player's momentum window up to
/// t-1 (left-padded with the first value) is forecast and the two forecasts
/// decided. The match goes to the player with more predicted points.
MatchSimulation simulate_match(const Forecaster& forecaster, const pipeline::MatchMomentum& momentum,
                               const RankingTable& ranks);

/// Encodes the match first.
MatchSimulation simulate_match(const Forecaster& forecaster, const Match& match, const FeatureSchema& schema,
                               const momentum::IndicatorWeights& weights, const momentum::PressureMatrix& pressure,
                               const pipeline::EncoderConfig& encoder, const RankingTable& ranks);

/// CSV with columns t,P_i,P_j,winner,tiebreak_used (winner is 1 or 2).
void write_decision_log(std::ostream& out, const MatchSimulation& sim);

} // namespace mtm::outcome
