#pragma once

#include <cstdint>
#include <span>

namespace mtm::eval {

struct RegressionMetrics {
    double mse = 0.0;
    double mae = 0.0;
    std::size_t samples = 0;
};

/// Throws ShapeError on a length mismatch and EmptyInputError on no samples.
RegressionMetrics regression_metrics(std::span<const double> pred, std::span<const double> truth);

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::size_t total() const { return tp + fp + tn + fn; }
    bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion(std::span<const int> pred, std::span<const int> truth, int positive);

struct ClassificationMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    /// Set when the corresponding denominator was zero (value reported as 0).
    bool accuracy_undefined = false;
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool f1_undefined = false;
    ConfusionCounts counts;
};

ClassificationMetrics classification_metrics(const ConfusionCounts& c);
ClassificationMetrics classification_metrics(std::span<const int> pred, std::span<const int> truth, int positive);

/// Everything one model reports for one evaluation.
struct MetricsReport {
    double mse = 0.0;
    double mae = 0.0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double match_accuracy = 0.0;
    std::size_t samples = 0;
    std::size_t matches = 0;
    std::uint64_t seed = 0;
};

} // namespace mtm::eval
