#include "mtm/forecast/revin.hpp"

#include "mtm/core/error.hpp"

#include <cmath>

namespace mtm::forecast {

double safe_gamma(double gamma) {
    if (std::abs(gamma) >= kGammaFloor) return gamma;
    return gamma < 0.0 ? -kGammaFloor : kGammaFloor;
}

std::vector<double> revin_norm(std::span<const double> x, double gamma, double beta, RevInState& state) {
    if (x.size() < 2) throw ShapeError("RevIN needs a window of length >= 2");
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= n;
    const double sd = std::sqrt(var);
    state.mean = mean;
    state.guarded = !(sd >= kRevInEps);
    state.stdev = state.guarded ? kRevInEps : sd;
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean) / state.stdev * gamma + beta;
    return out;
}

double revin_denorm(double y, double gamma, double beta, const RevInState& state) {
    return (y - beta) / safe_gamma(gamma) * state.stdev + state.mean;
}

std::vector<double> revin_denorm(std::span<const double> y, double gamma, double beta, const RevInState& state) {
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = revin_denorm(y[i], gamma, beta, state);
    return out;
}

double revin_output_grad(double g_out, double gamma, const RevInState& state) {
    return g_out * state.stdev / safe_gamma(gamma);
}

void revin_backward(std::span<const double> x, double gamma, double beta, const RevInState& state, double y,
                    double g_out, std::span<const double> g_xhat, RevInGrad& grad, std::span<double> dx) {
    const std::size_t n = x.size();
    const double nn = static_cast<double>(n);
    const double s = state.stdev;
    const double gs = safe_gamma(gamma);
    const bool gamma_live = std::abs(gamma) >= kGammaFloor;

    double sum_g = 0.0;
    double sum_gz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = (x[i] - state.mean) / s;
        sum_g += g_xhat[i];
        sum_gz += g_xhat[i] * z;
    }
    grad.beta += sum_g - g_out * s / gs;
    grad.gamma += sum_gz;
    if (gamma_live) grad.gamma -= g_out * (y - beta) * s / (gs * gs);

    const double d_mean = g_out - sum_g * gamma / s;
    const double d_std = state.guarded ? 0.0 : g_out * (y - beta) / gs - sum_gz * gamma / s;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = (x[i] - state.mean) / s;
        dx[i] = g_xhat[i] * gamma / s + d_mean / nn + d_std * z / nn;
    }
}

} // namespace mtm::forecast
