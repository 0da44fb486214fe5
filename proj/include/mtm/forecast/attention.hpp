#pragma once

#include "mtm/wavelet/filter.hpp"

#include <span>
#include <vector>

namespace mtm::forecast {

/// Flat layout: wq, bq, wk, bk, wv, bv, wo (key_dim each), bo.
struct AttentionShape {
    std::size_t window = 0;
    std::size_t key_dim = 8;
    std::size_t levels = 2; ///< MODWT levels inside attention; 0 = a single untransformed band

    std::size_t size() const { return 7 * key_dim + 1; }
    std::size_t bands() const { return levels == 0 ? 1 : levels + 1; }
};

struct AttentionParams {
    std::span<const double> wq, bq, wk, bk, wv, bv, wo;
    double bo = 0.0;

    AttentionParams(std::span<const double> flat, std::size_t key_dim);
};

/// Per-window-length precomputation: rows of each band that reach the last
/// output position after the inverse transform, with their weights.
class AttentionPlan {
public:
    /// Throws ConfigError when window < 2^levels.
    AttentionPlan(const AttentionShape& shape, wavelet::WaveletFilter filter);

    const AttentionShape& shape() const { return shape_; }
    const wavelet::WaveletFilter& filter() const { return filter_; }
    std::size_t band_count() const { return rows_.size(); }
    /// The smooth band (and the single band when levels = 0) carries the biases.
    bool carries_bias(std::size_t band) const { return band + 1 == rows_.size(); }

    struct Row {
        std::size_t index;
        double weight;
    };
    const std::vector<Row>& rows(std::size_t band) const { return rows_[band]; }

    /// Band coefficients of a scalar series: details W_1..W_J then V_J.
    std::vector<std::vector<double>> analyze(std::span<const double> x) const;
    /// Adjoint of analyze (the inverse transform).
    std::vector<double> synthesize(const std::vector<std::vector<double>>& bands) const;

private:
    AttentionShape shape_;
    wavelet::WaveletFilter filter_;
    std::vector<std::vector<Row>> rows_;
};

struct AttentionCache {
    std::vector<std::vector<double>> u;                ///< band coefficients of the input
    std::vector<std::vector<std::vector<double>>> p;   ///< softmax rows per band, per needed row
    std::vector<std::vector<double>> ubar;             ///< p . u per band, per needed row
};

/// Scalar forecast from the seasonal window, reading out only the last
/// position of the recombined attention output.
double attention_forward(std::span<const double> xs, std::span<const double> params, const AttentionPlan& plan,
                         AttentionCache* cache = nullptr);

/// Accumulates parameter gradients into `grad` and writes dLoss/dxs into
/// `dxs` (skipped when empty).
void attention_backward(double g_out, std::span<const double> params, const AttentionPlan& plan,
                        const AttentionCache& cache, std::span<double> grad, std::span<double> dxs);

/// Dense evaluation for inspection and testing: full projections, full
/// score matrices and the full recombined output.
struct AttentionDiagnostics {
    std::vector<std::vector<double>> scores; ///< per band, window x window row-major softmax
    std::vector<double> output_rows;         ///< window x key_dim recombined output
    double forecast = 0.0;
};
AttentionDiagnostics attention_full(std::span<const double> xs, std::span<const double> params,
                                    const AttentionPlan& plan);

} // namespace mtm::forecast
