#include "mtm/decompose/decompose.hpp"

#include "mtm/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mtm::decompose {

std::vector<double> softmax(std::span<const double> logits) {
    if (logits.empty()) return {};
    const double top = *std::max_element(logits.begin(), logits.end());
    std::vector<double> w(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        w[i] = std::exp(logits[i] - top);
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

std::vector<double> moving_average(std::span<const double> x, std::size_t k) {
    const std::size_t n = x.size();
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(k / 2);
    const auto at = [&](std::ptrdiff_t i) {
        return x[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 1))];
    };
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        const auto c = static_cast<std::ptrdiff_t>(t);
        double s = 0.0;
        for (std::ptrdiff_t i = c - half; i <= c + half; ++i) s += at(i);
        out[t] = s / static_cast<double>(k);
    }
    return out;
}

void validate_kernels(std::span<const std::size_t> kernels, std::size_t length, std::size_t logit_count) {
    if (kernels.empty()) throw ConfigError("decomposition needs at least one kernel");
    if (logit_count != kernels.size()) {
        throw ConfigError("decomposition has " + std::to_string(logit_count) + " logits for " +
                          std::to_string(kernels.size()) + " kernels");
    }
    for (std::size_t k : kernels) {
        if (k % 2 == 0) throw ConfigError("kernel size " + std::to_string(k) + " is even");
        if (k < 3) throw ConfigError("kernel size " + std::to_string(k) + " is below 3");
        if (k > length) {
            throw ConfigError("kernel size " + std::to_string(k) + " exceeds series length " + std::to_string(length));
        }
    }
}

std::vector<std::vector<double>> candidate_trends(std::span<const double> x, std::span<const std::size_t> kernels) {
    std::vector<std::vector<double>> out;
    out.reserve(kernels.size());
    for (std::size_t k : kernels) out.push_back(moving_average(x, k));
    return out;
}

TrendSeasonal decompose(std::span<const double> x, std::span<const std::size_t> kernels,
                        std::span<const double> logits) {
    validate_kernels(kernels, x.size(), logits.size());
    TrendSeasonal r;
    r.kernels.assign(kernels.begin(), kernels.end());
    r.weights = softmax(logits);
    const auto cands = candidate_trends(x, kernels);
    const std::size_t n = x.size();
    r.trend.assign(n, 0.0);
    for (std::size_t f = 0; f < cands.size(); ++f) {
        for (std::size_t t = 0; t < n; ++t) r.trend[t] += r.weights[f] * cands[f][t];
    }
    r.seasonal.resize(n);
    for (std::size_t t = 0; t < n; ++t) r.seasonal[t] = x[t] - r.trend[t];
    return r;
}

std::vector<double> logit_gradient(std::span<const double> grad_trend, const std::vector<std::vector<double>>& candidates,
                                   std::span<const double> weights) {
    const std::size_t F = candidates.size();
    std::vector<double> inner(F, 0.0);
    for (std::size_t f = 0; f < F; ++f) {
        double s = 0.0;
        for (std::size_t t = 0; t < grad_trend.size(); ++t) s += grad_trend[t] * candidates[f][t];
        inner[f] = s;
    }
    double mean = 0.0;
    for (std::size_t f = 0; f < F; ++f) mean += weights[f] * inner[f];
    std::vector<double> g(F);
    for (std::size_t f = 0; f < F; ++f) g[f] = weights[f] * (inner[f] - mean);
    return g;
}

} // namespace mtm::decompose
