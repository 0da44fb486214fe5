#include "mtm/forecast/train.hpp"

#include "mtm/core/csv.hpp"
#include "mtm/core/error.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

namespace mtm::forecast {

void WindowDataset::add_series(std::vector<double> series, std::size_t stride) {
    if (series.size() < 2) return;
    if (stride < 1) stride = 1;
    const std::size_t s = series_.size();
    for (std::size_t t = 0; t + 1 < series.size(); t += stride) index_.push_back({s, t});
    series_.push_back(std::move(series));
}

void WindowDataset::add_sample(std::span<const double> window, double target) {
    if (window.size() != window_) throw ShapeError("sample window has the wrong length");
    std::vector<double> s(window.begin(), window.end());
    s.push_back(target);
    index_.push_back({series_.size(), window_ - 1});
    series_.push_back(std::move(s));
}

void WindowDataset::window_at(std::size_t k, std::vector<double>& out) const {
    const auto& e = index_.at(k);
    padded_window(series_[e.series], e.end, window_, out);
}

double WindowDataset::target_at(std::size_t k) const {
    const auto& e = index_.at(k);
    return series_[e.series][e.end + 1];
}

TrainResult train(ForecastModel model, const WindowDataset& data, const TrainConfig& cfg) {
    cfg.validate();
    if (data.empty()) throw EmptyInputError("training dataset is empty");
    if (data.window() != model.config().window) throw ShapeError("dataset window differs from the model window");
    model.set_train_config(cfg);

    const std::size_t P = model.params().size();
    std::vector<double> grad(P), velocity(P, 0.0);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(cfg.seed);
    std::vector<double> window;
    TrainResult result{model, {}};
    ForecastModel& m = result.model;
    const bool use_momentum = cfg.optimizer == Optimizer::Momentum;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            std::fill(grad.begin(), grad.end(), 0.0);
            double batch_loss = 0.0;
            for (std::size_t k = start; k < stop; ++k) {
                data.window_at(order[k], window);
                batch_loss += m.loss_and_gradient(window, data.target_at(order[k]), grad);
            }
            epoch_loss += batch_loss;
            if (!std::isfinite(batch_loss)) throw DivergenceError(epoch);
            const double inv = 1.0 / static_cast<double>(stop - start);
            double norm2 = 0.0;
            for (double& g : grad) {
                g *= inv;
                norm2 += g * g;
            }
            if (!std::isfinite(norm2)) throw DivergenceError(epoch);
            double scale = 1.0;
            if (cfg.clip_norm > 0.0 && norm2 > cfg.clip_norm * cfg.clip_norm) scale = cfg.clip_norm / std::sqrt(norm2);
            auto& p = m.mutable_params();
            for (std::size_t i = 0; i < P; ++i) {
                const double g = grad[i] * scale;
                if (use_momentum) {
                    velocity[i] = cfg.momentum * velocity[i] + g;
                    p[i] -= cfg.learning_rate * velocity[i];
                } else {
                    p[i] -= cfg.learning_rate * g;
                }
            }
        }
        epoch_loss /= static_cast<double>(order.size());
        if (!std::isfinite(epoch_loss)) throw DivergenceError(epoch);
        for (double v : m.params()) {
            if (!std::isfinite(v)) throw DivergenceError(epoch);
        }
        spdlog::debug("epoch {}: loss {}", epoch, epoch_loss);
        result.loss_curve.push_back(epoch_loss);
    }
    return result;
}

double evaluate_mse(const ForecastModel& model, const WindowDataset& data) {
    if (data.empty()) throw EmptyInputError("dataset is empty");
    std::vector<double> window;
    double sum = 0.0;
    for (std::size_t k = 0; k < data.size(); ++k) {
        data.window_at(k, window);
        const double e = model.forecast_next(window) - data.target_at(k);
        sum += e * e;
    }
    return sum / static_cast<double>(data.size());
}

GradientCheckReport gradient_check(const ForecastModel& model, std::span<const double> window, double target,
                                   double step, double floor) {
    std::vector<double> analytic(model.params().size(), 0.0);
    model.loss_and_gradient(window, target, analytic);
    ForecastModel probe = model;
    GradientCheckReport report;
    for (const auto& b : model.blocks()) {
        BlockGradError be{b.name, 0.0, 0};
        for (std::size_t i = b.offset; i < b.offset + b.size; ++i) {
            auto& p = probe.mutable_params();
            const double orig = p[i];
            p[i] = orig + step;
            const double up = probe.loss_and_gradient(window, target, {});
            p[i] = orig - step;
            const double down = probe.loss_and_gradient(window, target, {});
            p[i] = orig;
            const double numeric = (up - down) / (2.0 * step);
            const double a = analytic[i];
            const double denom = std::max({std::abs(a), std::abs(numeric), floor});
            const double err = std::abs(a - numeric) / denom;
            if (err > be.max_relative_error) {
                be.max_relative_error = err;
                be.worst_index = i - b.offset;
            }
        }
        report.max_relative_error = std::max(report.max_relative_error, be.max_relative_error);
        report.blocks.push_back(be);
    }
    return report;
}

void write_loss_curve_csv(std::ostream& out, std::span<const double> curve) {
    out << "epoch,loss\n";
    for (std::size_t e = 0; e < curve.size(); ++e) out << (e + 1) << ',' << format_double(curve[e]) << '\n';
}

} // namespace mtm::forecast
