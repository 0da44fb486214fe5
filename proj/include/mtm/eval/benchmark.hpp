#pragma once

#include "mtm/core/records.hpp"
#include "mtm/core/schema.hpp"
#include "mtm/eval/baselines.hpp"
#include "mtm/eval/metrics.hpp"
#include "mtm/forecast/model.hpp"
#include "mtm/momentum/momentum.hpp"
#include "mtm/outcome/outcome.hpp"
#include "mtm/pipeline/encoder.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mtm::eval {

/// Predictions for points 1..T-1 of one match; labels are 1 (player 1) or 2.
struct MatchPredictions {
    std::vector<int> predicted;
    std::vector<int> truth;
    std::vector<double> regression_pred;
    std::vector<double> regression_truth;
    int predicted_match_winner = 1;
};

/// One trained instance of a model.
class BenchmarkModel {
public:
    virtual ~BenchmarkModel() = default;
    virtual void fit(std::span<const Match> matches, std::span<const std::size_t> train) = 0;
    virtual MatchPredictions predict(std::span<const Match> matches, std::size_t index) const = 0;
};

/// Factory for a model family. `prepare` runs once on the full corpus for
/// label-free caching; `create` builds a fresh instance per repetition.
class ModelSpec {
public:
    virtual ~ModelSpec() = default;
    virtual std::string name() const = 0;
    virtual void prepare(std::span<const Match>) {}
    virtual std::unique_ptr<BenchmarkModel> create(std::uint64_t seed) const = 0;
};

/// Player 1 if they won more points, else player 2; a tie goes to the
/// winner of the last point.
int actual_match_winner(const Match& m);

/// Baseline: ratings fitted on training-match winners, frozen for testing.
class EloSpec : public ModelSpec {
public:
    explicit EloSpec(EloConfig cfg = {}) : cfg_(cfg) {}
    std::string name() const override { return "elo"; }
    std::unique_ptr<BenchmarkModel> create(std::uint64_t seed) const override;

private:
    EloConfig cfg_;
};

/// Baseline: logistic regression from the 18 raw features at t to the
/// victor at t + 1.
class LogisticSpec : public ModelSpec {
public:
    explicit LogisticSpec(LogisticConfig cfg = {}) : cfg_(cfg) {}
    std::string name() const override { return "logistic"; }
    std::unique_ptr<BenchmarkModel> create(std::uint64_t seed) const override;

private:
    LogisticConfig cfg_;
};

struct Tm2Options {
    FeatureSchema schema = FeatureSchema::standard();
    momentum::IndicatorWeights weights = momentum::IndicatorWeights::defaults();
    momentum::PressureMatrix pressure = momentum::PressureMatrix::uniform();
    pipeline::EncoderConfig encoder;
    forecast::ModelConfig model;
    forecast::TrainConfig train;
    outcome::RankingTable ranks;
    std::size_t sample_stride = 1; ///< keep every n-th training window
};

/// The full pipeline: causal momentum, forecaster, decision layer.
class Tm2Spec : public ModelSpec {
public:
    explicit Tm2Spec(Tm2Options options) : options_(std::make_shared<Tm2Options>(std::move(options))) {}
    std::string name() const override { return "tm2"; }
    /// Encodes every match once; momentum depends on features only.
    void prepare(std::span<const Match> matches) override;
    std::unique_ptr<BenchmarkModel> create(std::uint64_t seed) const override;

    const std::vector<pipeline::MatchMomentum>& momentum() const { return *cache_; }

private:
    std::shared_ptr<Tm2Options> options_;
    std::shared_ptr<std::vector<pipeline::MatchMomentum>> cache_;
};

struct BenchmarkConfig {
    std::size_t repetitions = 100;
    double train_fraction = 0.8;
    std::uint64_t split_seed = 7;
    std::size_t min_matches = 10;

    void validate() const;
};

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Random match-level split for repetition `rep`; sorted index lists.
Split split_matches(std::size_t n, double train_fraction, std::uint64_t split_seed, std::size_t rep);

struct RepetitionResult {
    std::size_t repetition = 0;
    std::string model;
    MetricsReport metrics;
};

struct ModelSummary {
    std::string model;
    MetricsReport mean;
};

struct BenchmarkReport {
    BenchmarkConfig config;
    std::size_t matches = 0;
    std::vector<ModelSummary> summary;
    std::vector<RepetitionResult> repetitions;

    const ModelSummary& find(const std::string& model) const;
};

/// Metrics of one model on the test matches: regression on its continuous
/// output, classification on point victors (positive = player 1).
MetricsReport score_predictions(std::span<const MatchPredictions> preds, std::span<const Match> matches,
                                std::span<const std::size_t> test, std::uint64_t seed);

/// Throws EmptyInputError when fewer than `min_matches` matches are given.
BenchmarkReport run_benchmark(std::span<const Match> matches, const std::vector<std::shared_ptr<ModelSpec>>& models,
                              const BenchmarkConfig& cfg);

/// Report JSON (no timestamps, so equal inputs give equal bytes).
std::string report_json(const BenchmarkReport& report);
/// Fixed-width text table of the mean metrics.
std::string report_table(const BenchmarkReport& report);
/// One row per (repetition, model).
void write_repetitions_csv(std::ostream& out, const BenchmarkReport& report);

} // namespace mtm::eval
