#include "mtm/forecast/attention.hpp"

#include "mtm/core/error.hpp"
#include "mtm/wavelet/modwt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mtm::forecast {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void softmax_inplace(std::vector<double>& v) {
    const double top = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (double& x : v) {
        x = std::exp(x - top);
        sum += x;
    }
    for (double& x : v) x /= sum;
}

} // namespace

AttentionParams::AttentionParams(std::span<const double> flat, std::size_t dk) {
    if (flat.size() != 7 * dk + 1) throw ShapeError("attention block has the wrong size");
    wq = flat.subspan(0, dk);
    bq = flat.subspan(dk, dk);
    wk = flat.subspan(2 * dk, dk);
    bk = flat.subspan(3 * dk, dk);
    wv = flat.subspan(4 * dk, dk);
    bv = flat.subspan(5 * dk, dk);
    wo = flat.subspan(6 * dk, dk);
    bo = flat[7 * dk];
}

AttentionPlan::AttentionPlan(const AttentionShape& shape, wavelet::WaveletFilter filter)
    : shape_(shape), filter_(std::move(filter)) {
    if (shape_.window < 1) throw ConfigError("attention window must be >= 1");
    if (shape_.key_dim < 1) throw ConfigError("attention key dimension must be >= 1");
    if (shape_.levels > 0) {
        if (shape_.levels >= 64 || shape_.window < (std::size_t{1} << shape_.levels)) {
            throw ConfigError("attention window " + std::to_string(shape_.window) + " is shorter than 2^" +
                              std::to_string(shape_.levels));
        }
    }
    std::vector<double> impulse(shape_.window, 0.0);
    impulse.back() = 1.0;
    const auto bands = analyze(impulse);
    for (const auto& b : bands) {
        std::vector<Row> rows;
        for (std::size_t r = 0; r < b.size(); ++r) {
            if (b[r] != 0.0) rows.push_back({r, b[r]});
        }
        rows_.push_back(std::move(rows));
    }
}

std::vector<std::vector<double>> AttentionPlan::analyze(std::span<const double> x) const {
    if (shape_.levels == 0) return {std::vector<double>(x.begin(), x.end())};
    auto d = wavelet::modwt_forward(x, filter_, shape_.levels);
    std::vector<std::vector<double>> out = std::move(d.details);
    out.push_back(std::move(d.smooth));
    return out;
}

std::vector<double> AttentionPlan::synthesize(const std::vector<std::vector<double>>& bands) const {
    if (bands.size() != shape_.bands()) throw ShapeError("band count differs from the attention plan");
    if (shape_.levels == 0) return bands[0];
    wavelet::WaveletDecomposition d;
    d.filter = filter_;
    d.details.assign(bands.begin(), bands.end() - 1);
    d.smooth = bands.back();
    return wavelet::modwt_inverse(d);
}

double attention_forward(std::span<const double> xs, std::span<const double> params, const AttentionPlan& plan,
                         AttentionCache* cache) {
    const auto& shape = plan.shape();
    if (xs.size() != shape.window) {
        throw ShapeError("attention input has length " + std::to_string(xs.size()) + ", expected " +
                         std::to_string(shape.window));
    }
    const AttentionParams p(params, shape.key_dim);
    const double isq = 1.0 / std::sqrt(static_cast<double>(shape.key_dim));
    // Projections are rank one plus bias, so every score and value reduces
    // to these inner products of the projection vectors.
    const double A = dot(p.wq, p.wk), B = dot(p.wq, p.bk), C = dot(p.bq, p.wk), D = dot(p.bq, p.bk);
    const double E = dot(p.wo, p.wv), F = dot(p.wo, p.bv);

    AttentionCache local;
    AttentionCache& c = cache ? *cache : local;
    c.u = plan.analyze(xs);
    c.p.assign(plan.band_count(), {});
    c.ubar.assign(plan.band_count(), {});
    const std::size_t n = xs.size();
    double out = p.bo;
    for (std::size_t b = 0; b < plan.band_count(); ++b) {
        const auto& u = c.u[b];
        const double sb = plan.carries_bias(b) ? 1.0 : 0.0;
        for (const auto& row : plan.rows(b)) {
            const double ur = u[row.index];
            const double a = (A * ur + sb * C) * isq;
            const double k0 = sb * (B * ur + D) * isq;
            std::vector<double> pr(n);
            for (std::size_t s = 0; s < n; ++s) pr[s] = a * u[s] + k0;
            softmax_inplace(pr);
            const double ubar = dot(pr, u);
            out += row.weight * (ubar * E + sb * F);
            c.p[b].push_back(std::move(pr));
            c.ubar[b].push_back(ubar);
        }
    }
    return out;
}

void attention_backward(double g_out, std::span<const double> params, const AttentionPlan& plan,
                        const AttentionCache& c, std::span<double> grad, std::span<double> dxs) {
    const auto& shape = plan.shape();
    const std::size_t dk = shape.key_dim;
    const AttentionParams p(params, dk);
    const double isq = 1.0 / std::sqrt(static_cast<double>(dk));
    const double A = dot(p.wq, p.wk), B = dot(p.wq, p.bk), C = dot(p.bq, p.wk);
    const double E = dot(p.wo, p.wv);
    const std::size_t n = shape.window;

    double dA = 0.0, dB = 0.0, dC = 0.0, dD = 0.0, dE = 0.0, dF = 0.0;
    std::vector<std::vector<double>> du(plan.band_count(), std::vector<double>(n, 0.0));
    for (std::size_t b = 0; b < plan.band_count(); ++b) {
        const auto& u = c.u[b];
        const double sb = plan.carries_bias(b) ? 1.0 : 0.0;
        const auto& rows = plan.rows(b);
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const std::size_t r = rows[k].index;
            const double w = rows[k].weight;
            const auto& pr = c.p[b][k];
            const double ubar = c.ubar[b][k];
            dE += g_out * w * ubar;
            dF += g_out * w * sb;
            const double dubar = g_out * w * E;
            const double ur = u[r];
            // d score_s = p_s * dubar * (u_s - ubar); score_s = (A ur us + sb (B ur + C us + D)) * isq
            double sum_ds = 0.0, sum_ds_u = 0.0;
            for (std::size_t s = 0; s < n; ++s) {
                const double ds = pr[s] * dubar * (u[s] - ubar);
                du[b][s] += pr[s] * dubar;
                du[b][s] += ds * (A * ur + sb * C) * isq;
                sum_ds += ds;
                sum_ds_u += ds * u[s];
            }
            dA += sum_ds_u * ur * isq;
            dB += sb * sum_ds * ur * isq;
            dC += sb * sum_ds_u * isq;
            dD += sb * sum_ds * isq;
            du[b][r] += (A * sum_ds_u + sb * B * sum_ds) * isq;
        }
    }

    double* gwq = grad.data();
    double* gbq = gwq + dk;
    double* gwk = gbq + dk;
    double* gbk = gwk + dk;
    double* gwv = gbk + dk;
    double* gbv = gwv + dk;
    double* gwo = gbv + dk;
    double* gbo = gwo + dk;
    for (std::size_t i = 0; i < dk; ++i) {
        gwq[i] += dA * p.wk[i] + dB * p.bk[i];
        gwk[i] += dA * p.wq[i] + dC * p.bq[i];
        gbq[i] += dC * p.wk[i] + dD * p.bk[i];
        gbk[i] += dB * p.wq[i] + dD * p.bq[i];
        gwo[i] += dE * p.wv[i] + dF * p.bv[i];
        gwv[i] += dE * p.wo[i];
        gbv[i] += dF * p.wo[i];
    }
    *gbo += g_out;

    if (!dxs.empty()) {
        const auto back = plan.synthesize(du);
        std::copy(back.begin(), back.end(), dxs.begin());
    }
}

AttentionDiagnostics attention_full(std::span<const double> xs, std::span<const double> params,
                                    const AttentionPlan& plan) {
    const auto& shape = plan.shape();
    if (xs.size() != shape.window) throw ShapeError("attention input has the wrong length");
    const std::size_t n = shape.window;
    const std::size_t dk = shape.key_dim;
    const std::size_t nb = plan.band_count();
    const AttentionParams p(params, dk);
    const double isq = 1.0 / std::sqrt(static_cast<double>(dk));

    // band -> channel -> coefficients
    auto project = [&](std::span<const double> w, std::span<const double> bias) {
        std::vector<std::vector<std::vector<double>>> out(nb, std::vector<std::vector<double>>(dk));
        for (std::size_t ch = 0; ch < dk; ++ch) {
            std::vector<double> col(n);
            for (std::size_t t = 0; t < n; ++t) col[t] = xs[t] * w[ch] + bias[ch];
            auto bands = plan.analyze(col);
            for (std::size_t b = 0; b < nb; ++b) out[b][ch] = std::move(bands[b]);
        }
        return out;
    };
    const auto Q = project(p.wq, p.bq);
    const auto K = project(p.wk, p.bk);
    const auto V = project(p.wv, p.bv);

    AttentionDiagnostics diag;
    std::vector<std::vector<std::vector<double>>> O(dk, std::vector<std::vector<double>>(nb, std::vector<double>(n)));
    for (std::size_t b = 0; b < nb; ++b) {
        std::vector<double> scores(n * n);
        for (std::size_t r = 0; r < n; ++r) {
            std::vector<double> row(n);
            for (std::size_t s = 0; s < n; ++s) {
                double acc = 0.0;
                for (std::size_t ch = 0; ch < dk; ++ch) acc += Q[b][ch][r] * K[b][ch][s];
                row[s] = acc * isq;
            }
            softmax_inplace(row);
            for (std::size_t ch = 0; ch < dk; ++ch) {
                double acc = 0.0;
                for (std::size_t s = 0; s < n; ++s) acc += row[s] * V[b][ch][s];
                O[ch][b][r] = acc;
            }
            std::copy(row.begin(), row.end(), scores.begin() + static_cast<std::ptrdiff_t>(r * n));
        }
        diag.scores.push_back(std::move(scores));
    }
    diag.output_rows.assign(n * dk, 0.0);
    for (std::size_t ch = 0; ch < dk; ++ch) {
        const auto y = plan.synthesize(O[ch]);
        for (std::size_t t = 0; t < n; ++t) diag.output_rows[t * dk + ch] = y[t];
    }
    diag.forecast = p.bo;
    for (std::size_t ch = 0; ch < dk; ++ch) diag.forecast += p.wo[ch] * diag.output_rows[(n - 1) * dk + ch];
    return diag;
}

} // namespace mtm::forecast
