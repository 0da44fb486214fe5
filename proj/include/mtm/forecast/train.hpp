#pragma once

#include "mtm/forecast/model.hpp"

#include <span>
#include <string>
#include <vector>

namespace mtm::forecast {

/// (window, next value) pairs drawn from whole series without copying the
/// windows: sample k is the window ending at series[s][t] with target
/// series[s][t + 1].
class WindowDataset {
public:
    explicit WindowDataset(std::size_t window) : window_(window) {}

    /// Adds every t in [0, T-2] with t % stride == 0.
    void add_series(std::vector<double> series, std::size_t stride = 1);
    /// Single explicit sample; the window is stored as its own series.
    void add_sample(std::span<const double> window, double target);

    std::size_t size() const { return index_.size(); }
    bool empty() const { return index_.empty(); }
    std::size_t window() const { return window_; }

    void window_at(std::size_t k, std::vector<double>& out) const;
    double target_at(std::size_t k) const;

private:
    struct Entry {
        std::size_t series;
        std::size_t end;
    };
    std::size_t window_;
    std::vector<std::vector<double>> series_;
    std::vector<Entry> index_;
};

struct TrainResult {
    ForecastModel model;
    std::vector<double> loss_curve; ///< mean training loss per epoch
};

/// Mini-batch SGD on mean squared error; deterministic for a given seed.
/// Throws DivergenceError when an epoch's loss is not finite.
TrainResult train(ForecastModel model, const WindowDataset& data, const TrainConfig& cfg);

/// Mean squared one-step error over the dataset.
double evaluate_mse(const ForecastModel& model, const WindowDataset& data);

struct BlockGradError {
    std::string block;
    double max_relative_error = 0.0;
    std::size_t worst_index = 0;
};

struct GradientCheckReport {
    std::vector<BlockGradError> blocks;
    double max_relative_error = 0.0;
};

inline constexpr double kGradCheckStep = 1e-5;

/// |a - n| / max(|a|, |n|, floor) between analytic and central-difference
/// gradients of the squared error on one sample, for every parameter.
GradientCheckReport gradient_check(const ForecastModel& model, std::span<const double> window, double target,
                                   double step = kGradCheckStep, double floor = 1e-8);

/// Loss curve CSV with columns epoch,loss.
void write_loss_curve_csv(std::ostream& out, std::span<const double> curve);

} // namespace mtm::forecast
