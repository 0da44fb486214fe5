#include "mtm/eval/benchmark.hpp"

#include "mtm/core/csv.hpp"
#include "mtm/core/error.hpp"
#include "mtm/forecast/train.hpp"

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace mtm::eval {

namespace {

int label_of(Side s) { return s == Side::P1 ? 1 : 2; }

class EloModel : public BenchmarkModel {
public:
    explicit EloModel(EloConfig cfg) : ratings_(cfg) {}

    void fit(std::span<const Match> matches, std::span<const std::size_t> train) override {
        for (std::size_t i : train) {
            const auto& m = matches[i];
            ratings_.record(m.player(Side::P1), m.player(Side::P2), actual_match_winner(m) == 1 ? 1.0 : 0.0);
        }
    }

    MatchPredictions predict(std::span<const Match> matches, std::size_t index) const override {
        const auto& m = matches[index];
        const double p = ratings_.predict(m.player(Side::P1), m.player(Side::P2));
        const int label = p >= 0.5 ? 1 : 2;
        MatchPredictions out;
        for (std::size_t t = 1; t < m.points.size(); ++t) {
            out.predicted.push_back(label);
            out.truth.push_back(label_of(m.points[t].point_victor));
            out.regression_pred.push_back(p);
            out.regression_truth.push_back(m.points[t].point_victor == Side::P1 ? 1.0 : 0.0);
        }
        out.predicted_match_winner = label;
        return out;
    }

private:
    EloRatings ratings_;
};

class LogisticModelRunner : public BenchmarkModel {
public:
    explicit LogisticModelRunner(LogisticConfig cfg) : cfg_(cfg) {}

    void fit(std::span<const Match> matches, std::span<const std::size_t> train) override {
        std::vector<std::vector<double>> x;
        std::vector<int> y;
        for (std::size_t i : train) {
            const auto& pts = matches[i].points;
            for (std::size_t t = 0; t + 1 < pts.size(); ++t) {
                x.push_back(record_features(pts[t]));
                y.push_back(pts[t + 1].point_victor == Side::P1 ? 1 : 0);
            }
        }
        model_ = logistic_train(x, y, cfg_);
    }

    MatchPredictions predict(std::span<const Match> matches, std::size_t index) const override {
        const auto& pts = matches[index].points;
        MatchPredictions out;
        std::size_t p1 = 0;
        for (std::size_t t = 1; t < pts.size(); ++t) {
            const double p = model_.predict_proba(record_features(pts[t - 1]));
            const int label = p >= 0.5 ? 1 : 2;
            if (label == 1) ++p1;
            out.predicted.push_back(label);
            out.truth.push_back(label_of(pts[t].point_victor));
            out.regression_pred.push_back(p);
            out.regression_truth.push_back(pts[t].point_victor == Side::P1 ? 1.0 : 0.0);
        }
        out.predicted_match_winner = 2 * p1 >= out.predicted.size() ? 1 : 2;
        return out;
    }

private:
    LogisticConfig cfg_;
    LogisticModel model_;
};

class Tm2Model : public BenchmarkModel {
public:
    Tm2Model(std::shared_ptr<Tm2Options> options, std::shared_ptr<std::vector<pipeline::MatchMomentum>> cache,
             std::uint64_t seed)
        : options_(std::move(options)), cache_(std::move(cache)), seed_(seed),
          model_(forecast::ForecastModel::zeros(options_->model)) {}

    void fit(std::span<const Match>, std::span<const std::size_t> train) override {
        forecast::WindowDataset data(options_->model.window);
        for (std::size_t i : train) {
            for (const auto& series : (*cache_)[i].momentum) data.add_series(series, options_->sample_stride);
        }
        forecast::TrainConfig cfg = options_->train;
        cfg.window = options_->model.window;
        cfg.seed = seed_;
        auto result = forecast::train(forecast::ForecastModel::initialize(options_->model, seed_), data, cfg);
        model_ = std::move(result.model);
    }

    MatchPredictions predict(std::span<const Match>, std::size_t index) const override {
        const auto& mm = (*cache_)[index];
        const outcome::ModelForecaster f(model_);
        const auto sim = outcome::simulate_match(f, mm, options_->ranks);
        MatchPredictions out;
        for (const auto& p : sim.points) {
            out.predicted.push_back(label_of(p.winner));
            out.truth.push_back(label_of(p.actual));
            out.regression_pred.push_back(p.p_i);
            out.regression_truth.push_back(mm.momentum[0][p.t]);
            out.regression_pred.push_back(p.p_j);
            out.regression_truth.push_back(mm.momentum[1][p.t]);
        }
        out.predicted_match_winner = label_of(sim.match_winner);
        return out;
    }

private:
    std::shared_ptr<Tm2Options> options_;
    std::shared_ptr<std::vector<pipeline::MatchMomentum>> cache_;
    std::uint64_t seed_;
    forecast::ForecastModel model_;
};

/// Running mean; exact when every value is equal.
struct Mean {
    double value = 0.0;
    std::size_t n = 0;
    void add(double x) {
        ++n;
        value += (x - value) / static_cast<double>(n);
    }
};

nlohmann::ordered_json metrics_json(const MetricsReport& m) {
    nlohmann::ordered_json j;
    j["mse"] = m.mse;
    j["mae"] = m.mae;
    j["accuracy"] = m.accuracy;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    j["match_accuracy"] = m.match_accuracy;
    j["samples"] = m.samples;
    j["matches"] = m.matches;
    j["seed"] = m.seed;
    return j;
}

} // namespace

int actual_match_winner(const Match& m) {
    std::size_t p1 = 0;
    for (const auto& p : m.points) {
        if (p.point_victor == Side::P1) ++p1;
    }
    const std::size_t p2 = m.points.size() - p1;
    if (p1 != p2) return p1 > p2 ? 1 : 2;
    return label_of(m.points.back().point_victor);
}

std::unique_ptr<BenchmarkModel> EloSpec::create(std::uint64_t) const { return std::make_unique<EloModel>(cfg_); }

std::unique_ptr<BenchmarkModel> LogisticSpec::create(std::uint64_t seed) const {
    LogisticConfig cfg = cfg_;
    cfg.seed = seed;
    return std::make_unique<LogisticModelRunner>(cfg);
}

void Tm2Spec::prepare(std::span<const Match> matches) {
    auto cache = std::make_shared<std::vector<pipeline::MatchMomentum>>();
    cache->reserve(matches.size());
    for (const auto& m : matches) {
        cache->push_back(pipeline::encode_match(m, options_->schema, options_->weights, options_->pressure,
                                                options_->encoder));
    }
    cache_ = std::move(cache);
}

std::unique_ptr<BenchmarkModel> Tm2Spec::create(std::uint64_t seed) const {
    if (!cache_) throw ConfigError("tm2 model used before prepare()");
    return std::make_unique<Tm2Model>(options_, cache_, seed);
}

void BenchmarkConfig::validate() const {
    if (repetitions < 1) throw ConfigError("benchmark needs at least one repetition");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train fraction must lie in (0, 1)");
}

Split split_matches(std::size_t n, double train_fraction, std::uint64_t split_seed, std::size_t rep) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::seed_seq seq{static_cast<std::uint32_t>(split_seed), static_cast<std::uint32_t>(split_seed >> 32),
                      static_cast<std::uint32_t>(rep)};
    std::mt19937_64 rng(seq);
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
    Split s;
    s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

const ModelSummary& BenchmarkReport::find(const std::string& model) const {
    for (const auto& s : summary) {
        if (s.model == model) return s;
    }
    throw ConfigError("no model '" + model + "' in the report");
}

MetricsReport score_predictions(std::span<const MatchPredictions> preds, std::span<const Match> matches,
                                std::span<const std::size_t> test, std::uint64_t seed) {
    std::vector<int> pred, truth;
    std::vector<double> rp, rt;
    std::size_t match_hits = 0;
    for (std::size_t k = 0; k < preds.size(); ++k) {
        const auto& p = preds[k];
        pred.insert(pred.end(), p.predicted.begin(), p.predicted.end());
        truth.insert(truth.end(), p.truth.begin(), p.truth.end());
        rp.insert(rp.end(), p.regression_pred.begin(), p.regression_pred.end());
        rt.insert(rt.end(), p.regression_truth.begin(), p.regression_truth.end());
        if (p.predicted_match_winner == actual_match_winner(matches[test[k]])) ++match_hits;
    }
    const auto reg = regression_metrics(rp, rt);
    const auto cls = classification_metrics(pred, truth, 1);
    MetricsReport r;
    r.mse = reg.mse;
    r.mae = reg.mae;
    r.accuracy = cls.accuracy;
    r.precision = cls.precision;
    r.recall = cls.recall;
    r.f1 = cls.f1;
    r.samples = pred.size();
    r.matches = preds.size();
    r.match_accuracy = preds.empty() ? 0.0 : static_cast<double>(match_hits) / static_cast<double>(preds.size());
    r.seed = seed;
    return r;
}

BenchmarkReport run_benchmark(std::span<const Match> matches, const std::vector<std::shared_ptr<ModelSpec>>& models,
                              const BenchmarkConfig& cfg) {
    cfg.validate();
    if (matches.size() < cfg.min_matches) {
        throw EmptyInputError("benchmark needs at least " + std::to_string(cfg.min_matches) + " matches, got " +
                              std::to_string(matches.size()));
    }
    for (const auto& m : models) m->prepare(matches);

    BenchmarkReport report;
    report.config = cfg;
    report.matches = matches.size();
    std::vector<std::array<Mean, 8>> means(models.size());
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
        const Split split = split_matches(matches.size(), cfg.train_fraction, cfg.split_seed, rep);
        const std::uint64_t seed = cfg.split_seed * 1000003ULL + rep;
        for (std::size_t k = 0; k < models.size(); ++k) {
            auto model = models[k]->create(seed);
            model->fit(matches, split.train);
            std::vector<MatchPredictions> preds;
            for (std::size_t i : split.test) preds.push_back(model->predict(matches, i));
            const auto m = score_predictions(preds, matches, split.test, seed);
            spdlog::info("rep {} {}: accuracy {:.4f} mse {:.4f}", rep, models[k]->name(), m.accuracy, m.mse);
            report.repetitions.push_back({rep, models[k]->name(), m});
            auto& mm = means[k];
            mm[0].add(m.mse);
            mm[1].add(m.mae);
            mm[2].add(m.accuracy);
            mm[3].add(m.precision);
            mm[4].add(m.recall);
            mm[5].add(m.f1);
            mm[6].add(m.match_accuracy);
            mm[7].add(static_cast<double>(m.samples));
        }
    }
    for (std::size_t k = 0; k < models.size(); ++k) {
        MetricsReport r;
        const auto& mm = means[k];
        r.mse = mm[0].value;
        r.mae = mm[1].value;
        r.accuracy = mm[2].value;
        r.precision = mm[3].value;
        r.recall = mm[4].value;
        r.f1 = mm[5].value;
        r.match_accuracy = mm[6].value;
        r.samples = static_cast<std::size_t>(std::llround(mm[7].value));
        r.matches = matches.size();
        r.seed = cfg.split_seed;
        report.summary.push_back({models[k]->name(), r});
    }
    return report;
}

std::string report_json(const BenchmarkReport& report) {
    nlohmann::ordered_json j;
    j["repetitions"] = report.config.repetitions;
    j["train_fraction"] = report.config.train_fraction;
    j["split_seed"] = report.config.split_seed;
    j["matches"] = report.matches;
    nlohmann::ordered_json models = nlohmann::ordered_json::object();
    for (const auto& s : report.summary) models[s.model] = metrics_json(s.mean);
    j["models"] = models;
    return j.dump(2) + "\n";
}

std::string report_table(const BenchmarkReport& report) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-10s %10s %10s %10s %10s %10s %10s %10s\n", "model", "mse", "mae", "accuracy",
                  "precision", "recall", "f1", "match_acc");
    out << line;
    for (const auto& s : report.summary) {
        const auto& m = s.mean;
        std::snprintf(line, sizeof line, "%-10s %10.4f %10.4f %10.4f %10.4f %10.4f %10.4f %10.4f\n", s.model.c_str(),
                      m.mse, m.mae, m.accuracy, m.precision, m.recall, m.f1, m.match_accuracy);
        out << line;
    }
    return out.str();
}

void write_repetitions_csv(std::ostream& out, const BenchmarkReport& report) {
    out << "repetition,model,mse,mae,accuracy,precision,recall,f1,match_accuracy,samples,seed\n";
    for (const auto& r : report.repetitions) {
        const auto& m = r.metrics;
        out << r.repetition << ',' << r.model << ',' << format_double(m.mse) << ',' << format_double(m.mae) << ','
            << format_double(m.accuracy) << ',' << format_double(m.precision) << ',' << format_double(m.recall)
            << ',' << format_double(m.f1) << ',' << format_double(m.match_accuracy) << ',' << m.samples << ','
            << m.seed << '\n';
    }
}

} // namespace mtm::eval
