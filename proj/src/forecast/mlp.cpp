#include "mtm/forecast/mlp.hpp"

#include "mtm/core/error.hpp"

#include <algorithm>
#include <string>

namespace mtm::forecast {

MlpParams::MlpParams(std::span<const double> flat, const MlpShape& s) {
    if (flat.size() != s.size()) throw ShapeError("MLP block has " + std::to_string(flat.size()) + " values, expected " +
                                                  std::to_string(s.size()));
    std::size_t o = 0;
    w1 = flat.subspan(o, s.hidden * s.input);
    o += s.hidden * s.input;
    b1 = flat.subspan(o, s.hidden);
    o += s.hidden;
    w2 = flat.subspan(o, s.hidden * s.hidden);
    o += s.hidden * s.hidden;
    b2 = flat.subspan(o, s.hidden);
    o += s.hidden;
    w3 = flat.subspan(o, s.hidden);
    o += s.hidden;
    b3 = flat[o];
}

double mlp_forward(std::span<const double> x, std::span<const double> params, const MlpShape& shape,
                   MlpCache* cache) {
    if (x.size() != shape.input) {
        throw ShapeError("MLP input has length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(shape.input));
    }
    const MlpParams p(params, shape);
    const std::size_t H = shape.hidden;
    const std::size_t L = shape.input;
    MlpCache local;
    MlpCache& c = cache ? *cache : local;
    c.z1.assign(H, 0.0);
    c.a1.assign(H, 0.0);
    c.z2.assign(H, 0.0);
    c.a2.assign(H, 0.0);
    for (std::size_t h = 0; h < H; ++h) {
        const double* w = p.w1.data() + h * L;
        double s = p.b1[h];
        for (std::size_t i = 0; i < L; ++i) s += w[i] * x[i];
        c.z1[h] = s;
        c.a1[h] = s > 0.0 ? s : 0.0;
    }
    for (std::size_t h = 0; h < H; ++h) {
        const double* w = p.w2.data() + h * H;
        double s = p.b2[h];
        for (std::size_t i = 0; i < H; ++i) s += w[i] * c.a1[i];
        c.z2[h] = s;
        c.a2[h] = s > 0.0 ? s : 0.0;
    }
    double out = p.b3;
    for (std::size_t h = 0; h < H; ++h) out += p.w3[h] * c.a2[h];
    return out;
}

void mlp_backward(double g_out, std::span<const double> x, std::span<const double> params, const MlpShape& shape,
                  const MlpCache& c, std::span<double> grad, std::span<double> dx) {
    const MlpParams p(params, shape);
    const std::size_t H = shape.hidden;
    const std::size_t L = shape.input;
    double* gw1 = grad.data();
    double* gb1 = gw1 + H * L;
    double* gw2 = gb1 + H;
    double* gb2 = gw2 + H * H;
    double* gw3 = gb2 + H;
    double* gb3 = gw3 + H;

    *gb3 += g_out;
    std::vector<double> d2(H), d1(H, 0.0);
    for (std::size_t h = 0; h < H; ++h) {
        gw3[h] += g_out * c.a2[h];
        d2[h] = c.z2[h] > 0.0 ? g_out * p.w3[h] : 0.0;
    }
    for (std::size_t h = 0; h < H; ++h) {
        if (d2[h] == 0.0) continue;
        const double* w = p.w2.data() + h * H;
        double* gw = gw2 + h * H;
        gb2[h] += d2[h];
        for (std::size_t i = 0; i < H; ++i) {
            gw[i] += d2[h] * c.a1[i];
            d1[i] += d2[h] * w[i];
        }
    }
    for (std::size_t h = 0; h < H; ++h) d1[h] = c.z1[h] > 0.0 ? d1[h] : 0.0;
    if (!dx.empty()) std::fill(dx.begin(), dx.end(), 0.0);
    for (std::size_t h = 0; h < H; ++h) {
        if (d1[h] == 0.0) continue;
        const double* w = p.w1.data() + h * L;
        double* gw = gw1 + h * L;
        gb1[h] += d1[h];
        for (std::size_t i = 0; i < L; ++i) gw[i] += d1[h] * x[i];
        if (!dx.empty()) {
            for (std::size_t i = 0; i < L; ++i) dx[i] += d1[h] * w[i];
        }
    }
}

} // namespace mtm::forecast
