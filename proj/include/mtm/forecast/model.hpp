#pragma once

#include "mtm/forecast/attention.hpp"
#include "mtm/forecast/mlp.hpp"
#include "mtm/forecast/revin.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mtm::forecast {

enum class Optimizer { Sgd, Momentum };

struct TrainConfig {
    std::size_t window = 400;      ///< L
    double learning_rate = 1e-3;
    std::size_t epochs = 5;
    std::size_t batch_size = 32;
    std::uint64_t seed = 7;
    Optimizer optimizer = Optimizer::Momentum;
    double momentum = 0.9;
    double clip_norm = 1.0;        ///< global gradient-norm clip; 0 disables

    void validate() const;
};

struct ModelConfig {
    std::size_t window = 400;
    std::size_t hidden = 64;
    std::size_t key_dim = 8;
    std::size_t attention_levels = 2;
    std::vector<std::size_t> kernels{5, 13, 25};
    std::string attention_filter = "haar";

    /// Throws ConfigError; window must cover the largest kernel and 2^levels.
    void validate() const;
    MlpShape mlp_shape() const { return {window, hidden}; }
    AttentionShape attention_shape() const { return {window, key_dim, attention_levels}; }

    bool operator==(const ModelConfig&) const = default;
};

/// Named contiguous slice of the flat parameter vector.
struct ParamBlock {
    std::string name; ///< "mlp", "attention", "decompose", "revin"
    std::size_t offset = 0;
    std::size_t size = 0;
};

struct HeadOutputs {
    double trend = 0.0;
    double seasonal = 0.0;
    double total() const { return trend + seasonal; }
};

class ForecastModel {
public:
    /// Random initialisation (scaled normal weights, zero biases, zero
    /// decompose logits, unit RevIN scale).
    static ForecastModel initialize(const ModelConfig& config, std::uint64_t seed);
    /// All parameters zero except the RevIN scale, which is 1.
    static ForecastModel zeros(const ModelConfig& config);

    ForecastModel(ModelConfig config, std::vector<double> params, TrainConfig train = {});

    const ModelConfig& config() const { return config_; }
    const TrainConfig& train_config() const { return train_; }
    void set_train_config(const TrainConfig& t) { train_ = t; }

    const std::vector<double>& params() const { return params_; }
    std::vector<double>& mutable_params() { return params_; }
    const std::vector<ParamBlock>& blocks() const { return blocks_; }
    const ParamBlock& block(const std::string& name) const;
    std::span<const double> block_view(const std::string& name) const;
    std::span<double> block_view(const std::string& name);

    double gamma() const;
    double beta() const;

    /// Both heads for a window of length L.
    HeadOutputs heads(std::span<const double> window) const;
    /// Next-point forecast: trend head + seasonal head.
    double forecast_next(std::span<const double> window) const { return heads(window).total(); }

    /// Squared error (forecast - target)^2; adds its gradient into `grad`
    /// (length = parameter count) when non-empty.
    double loss_and_gradient(std::span<const double> window, double target, std::span<double> grad) const;

    const AttentionPlan& attention_plan() const { return *plan_; }

private:
    void build_layout();

    ModelConfig config_;
    std::vector<double> params_;
    TrainConfig train_;
    std::vector<ParamBlock> blocks_;
    std::shared_ptr<const AttentionPlan> plan_;
};

/// Left-pads with the earliest value so the result has exactly `length`
/// entries ending at series[end].
std::vector<double> padded_window(std::span<const double> series, std::size_t end, std::size_t length);
void padded_window(std::span<const double> series, std::size_t end, std::size_t length, std::vector<double>& out);

} // namespace mtm::forecast
