#pragma once

#include <span>
#include <vector>

namespace mtm::forecast {

inline constexpr double kRevInEps = 1e-5;
inline constexpr double kGammaFloor = 1e-8;

/// Per-window statistics; `stdev` is already guarded by kRevInEps.
struct RevInState {
    double mean = 0.0;
    double stdev = 1.0;
    bool guarded = false; ///< true when the raw population std fell below eps
};

/// (x - mean) / max(std, eps) * gamma + beta; fills `state`.
std::vector<double> revin_norm(std::span<const double> x, double gamma, double beta, RevInState& state);

/// Inverse map for a single value: (y - beta) / gamma * stdev + mean.
double revin_denorm(double y, double gamma, double beta, const RevInState& state);
std::vector<double> revin_denorm(std::span<const double> y, double gamma, double beta, const RevInState& state);

/// Gamma with its magnitude kept away from zero.
double safe_gamma(double gamma);

struct RevInGrad {
    double gamma = 0.0;
    double beta = 0.0;
};

/// dLoss/dy for out = denorm(y), given dLoss/dout.
double revin_output_grad(double g_out, double gamma, const RevInState& state);

/// Backward pass of out = denorm(f(norm(x))) where y = f(norm(x)).
/// `g_xhat` is dLoss/d(norm(x)) coming back through f. Accumulates the
/// affine gradients and writes dLoss/dx (including the paths through the
/// window mean and std) into `dx`.
void revin_backward(std::span<const double> x, double gamma, double beta, const RevInState& state, double y,
                    double g_out, std::span<const double> g_xhat, RevInGrad& grad, std::span<double> dx);

} // namespace mtm::forecast
