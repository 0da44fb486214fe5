#pragma once

#include <span>
#include <vector>

namespace mtm::forecast {

/// input -> hidden -> hidden -> 1 with ReLU after the first two layers.
/// Flat layout: W1 (hidden x input, row-major), b1, W2 (hidden x hidden),
/// b2, W3 (hidden), b3.
struct MlpShape {
    std::size_t input = 0;
    std::size_t hidden = 0;

    std::size_t size() const { return hidden * input + hidden + hidden * hidden + hidden + hidden + 1; }
};

/// Read-only view over a flat MLP block.
struct MlpParams {
    std::span<const double> w1, b1, w2, b2, w3;
    double b3 = 0.0;

    MlpParams(std::span<const double> flat, const MlpShape& shape);
};

struct MlpCache {
    std::vector<double> z1, a1, z2, a2;
};

double mlp_forward(std::span<const double> x, std::span<const double> params, const MlpShape& shape,
                   MlpCache* cache = nullptr);

/// Accumulates dLoss/dparams into `grad` and writes dLoss/dx into `dx`
/// (skipped when empty) for an upstream gradient `g_out`.
void mlp_backward(double g_out, std::span<const double> x, std::span<const double> params, const MlpShape& shape,
                  const MlpCache& cache, std::span<double> grad, std::span<double> dx);

} // namespace mtm::forecast
