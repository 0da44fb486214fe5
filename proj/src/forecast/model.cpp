#include "mtm/forecast/model.hpp"

#include "mtm/core/error.hpp"
#include "mtm/decompose/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mtm::forecast {

void TrainConfig::validate() const {
    if (window < 1) throw ConfigError("window length must be >= 1");
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning rate must be >= 0");
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must lie in [0, 1)");
    if (!(clip_norm >= 0.0)) throw ConfigError("clip_norm must be >= 0");
}

void ModelConfig::validate() const {
    if (hidden < 1) throw ConfigError("hidden width must be >= 1");
    if (key_dim < 1) throw ConfigError("key dimension must be >= 1");
    const std::vector<double> logits(kernels.size(), 0.0);
    decompose::validate_kernels(kernels, window, logits.size());
    if (attention_levels > 0 && (attention_levels >= 32 || window < (std::size_t{1} << attention_levels))) {
        throw ConfigError("window " + std::to_string(window) + " is shorter than 2^" +
                          std::to_string(attention_levels));
    }
    wavelet::WaveletFilter::by_name(attention_filter);
}

ForecastModel::ForecastModel(ModelConfig config, std::vector<double> params, TrainConfig train)
    : config_(std::move(config)), params_(std::move(params)), train_(train) {
    config_.validate();
    build_layout();
    const std::size_t total = blocks_.back().offset + blocks_.back().size;
    if (params_.size() != total) {
        throw ShapeError("model has " + std::to_string(params_.size()) + " parameters, expected " +
                         std::to_string(total));
    }
    for (double v : params_) {
        if (!std::isfinite(v)) throw InvariantError("model parameters must be finite");
    }
}

void ForecastModel::build_layout() {
    blocks_.clear();
    std::size_t o = 0;
    const auto add = [&](const char* name, std::size_t n) {
        blocks_.push_back({name, o, n});
        o += n;
    };
    add("mlp", config_.mlp_shape().size());
    add("attention", config_.attention_shape().size());
    add("decompose", config_.kernels.size());
    add("revin", 2);
    plan_ = std::make_shared<AttentionPlan>(config_.attention_shape(),
                                            wavelet::WaveletFilter::by_name(config_.attention_filter));
}

ForecastModel ForecastModel::zeros(const ModelConfig& config) {
    config.validate();
    ForecastModel m(config, std::vector<double>(config.mlp_shape().size() + config.attention_shape().size() +
                                                    config.kernels.size() + 2,
                                                0.0));
    m.block_view("revin")[0] = 1.0;
    return m;
}

ForecastModel ForecastModel::initialize(const ModelConfig& config, std::uint64_t seed) {
    ForecastModel m = zeros(config);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t L = config.window;
    const std::size_t H = config.hidden;
    auto mlp = m.block_view("mlp");
    std::size_t o = 0;
    const double s1 = std::sqrt(2.0 / static_cast<double>(L));
    for (std::size_t i = 0; i < H * L; ++i) mlp[o++] = s1 * gauss(rng);
    o += H;
    const double s2 = std::sqrt(2.0 / static_cast<double>(H));
    for (std::size_t i = 0; i < H * H; ++i) mlp[o++] = s2 * gauss(rng);
    o += H;
    const double s3 = std::sqrt(1.0 / static_cast<double>(H));
    for (std::size_t i = 0; i < H; ++i) mlp[o++] = s3 * gauss(rng);

    auto att = m.block_view("attention");
    const double sa = 1.0 / std::sqrt(static_cast<double>(config.key_dim));
    for (std::size_t i = 0; i + 1 < att.size(); ++i) att[i] = sa * gauss(rng);
    att[att.size() - 1] = 0.0;
    // Biases start at zero.
    for (std::size_t blk : {std::size_t{1}, std::size_t{3}, std::size_t{5}}) {
        for (std::size_t i = 0; i < config.key_dim; ++i) att[blk * config.key_dim + i] = 0.0;
    }
    return m;
}

const ParamBlock& ForecastModel::block(const std::string& name) const {
    for (const auto& b : blocks_) {
        if (b.name == name) return b;
    }
    throw ConfigError("unknown parameter block '" + name + "'");
}

std::span<const double> ForecastModel::block_view(const std::string& name) const {
    const auto& b = block(name);
    return std::span<const double>(params_).subspan(b.offset, b.size);
}

std::span<double> ForecastModel::block_view(const std::string& name) {
    const auto& b = block(name);
    return std::span<double>(params_).subspan(b.offset, b.size);
}

double ForecastModel::gamma() const { return block_view("revin")[0]; }
double ForecastModel::beta() const { return block_view("revin")[1]; }

HeadOutputs ForecastModel::heads(std::span<const double> window) const {
    if (window.size() != config_.window) {
        throw ShapeError("window has length " + std::to_string(window.size()) + ", expected " +
                         std::to_string(config_.window));
    }
    const auto ts = decompose::decompose(window, config_.kernels, block_view("decompose"));
    RevInState state;
    const auto xhat = revin_norm(ts.trend, gamma(), beta(), state);
    const double y = mlp_forward(xhat, block_view("mlp"), config_.mlp_shape());
    HeadOutputs out;
    out.trend = revin_denorm(y, gamma(), beta(), state);
    out.seasonal = attention_forward(ts.seasonal, block_view("attention"), *plan_);
    return out;
}

double ForecastModel::loss_and_gradient(std::span<const double> window, double target, std::span<double> grad) const {
    if (window.size() != config_.window) throw ShapeError("window has the wrong length");
    const auto logits = block_view("decompose");
    const auto ts = decompose::decompose(window, config_.kernels, logits);
    RevInState state;
    const auto xhat = revin_norm(ts.trend, gamma(), beta(), state);
    MlpCache mcache;
    const double y = mlp_forward(xhat, block_view("mlp"), config_.mlp_shape(), &mcache);
    const double trend = revin_denorm(y, gamma(), beta(), state);
    AttentionCache acache;
    const double seasonal = attention_forward(ts.seasonal, block_view("attention"), *plan_, &acache);
    const double err = trend + seasonal - target;
    if (grad.empty()) return err * err;
    if (grad.size() != params_.size()) throw ShapeError("gradient buffer has the wrong length");

    const double g = 2.0 * err;
    const std::size_t L = config_.window;
    const auto& bm = block("mlp");
    const auto& ba = block("attention");
    const auto& bd = block("decompose");
    const auto& br = block("revin");

    // Seasonal head.
    std::vector<double> g_season(L);
    attention_backward(g, block_view("attention"), *plan_, acache, grad.subspan(ba.offset, ba.size), g_season);

    // Trend head through RevIN.
    const double g_y = revin_output_grad(g, gamma(), state);
    std::vector<double> g_xhat(L);
    mlp_backward(g_y, xhat, block_view("mlp"), config_.mlp_shape(), mcache, grad.subspan(bm.offset, bm.size), g_xhat);
    RevInGrad rg;
    std::vector<double> g_trend(L);
    revin_backward(ts.trend, gamma(), beta(), state, y, g, g_xhat, rg, g_trend);
    grad[br.offset] += rg.gamma;
    grad[br.offset + 1] += rg.beta;

    // seasonal = window - trend.
    for (std::size_t t = 0; t < L; ++t) g_trend[t] -= g_season[t];
    const auto cands = decompose::candidate_trends(window, config_.kernels);
    const auto gl = decompose::logit_gradient(g_trend, cands, ts.weights);
    for (std::size_t f = 0; f < gl.size(); ++f) grad[bd.offset + f] += gl[f];
    return err * err;
}

void padded_window(std::span<const double> series, std::size_t end, std::size_t length, std::vector<double>& out) {
    if (series.empty() || end >= series.size()) throw ShapeError("window end outside the series");
    out.resize(length);
    const std::ptrdiff_t first = static_cast<std::ptrdiff_t>(end) - static_cast<std::ptrdiff_t>(length) + 1;
    for (std::size_t i = 0; i < length; ++i) {
        const std::ptrdiff_t src = first + static_cast<std::ptrdiff_t>(i);
        out[i] = series[src < 0 ? 0 : static_cast<std::size_t>(src)];
    }
}

std::vector<double> padded_window(std::span<const double> series, std::size_t end, std::size_t length) {
    std::vector<double> out;
    padded_window(series, end, length, out);
    return out;
}

} // namespace mtm::forecast
