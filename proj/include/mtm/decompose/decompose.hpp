#pragma once

#include <span>
#include <vector>

namespace mtm::decompose {

inline const std::vector<std::size_t> kDefaultKernels{5, 13, 25};

struct TrendSeasonal {
    std::vector<double> trend;
    std::vector<double> seasonal;
    std::vector<std::size_t> kernels;
    std::vector<double> weights; ///< softmax of the logits
};

/// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> logits);

/// Centered moving average of odd width `k` with edge replication.
std::vector<double> moving_average(std::span<const double> x, std::size_t k);

/// Throws ConfigError for even, < 3 or > T kernels and for a logit count
/// that differs from the kernel count.
void validate_kernels(std::span<const std::size_t> kernels, std::size_t length, std::size_t logit_count);

/// trend = sum_f softmax(logits)_f * MA_f(x); seasonal = x - trend, so
/// trend[t] + seasonal[t] reproduces x[t] to within one rounding.
TrendSeasonal decompose(std::span<const double> x, std::span<const std::size_t> kernels,
                        std::span<const double> logits);

/// Candidate trends MA_f(x), one per kernel.
std::vector<std::vector<double>> candidate_trends(std::span<const double> x, std::span<const std::size_t> kernels);

/// dLoss/dlogits given dLoss/dtrend (`grad_trend`, with the seasonal part
/// already folded in as grad_trend - grad_seasonal) and the candidate trends.
std::vector<double> logit_gradient(std::span<const double> grad_trend, const std::vector<std::vector<double>>& candidates,
                                   std::span<const double> weights);

} // namespace mtm::decompose
