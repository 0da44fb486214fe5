#include "mtm/llsa/llsa.hpp"

#include "mtm/core/csv.hpp"
#include "mtm/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace mtm::llsa {

namespace {

int sign_of(double v) { return v < 0.0 ? -1 : 1; }

std::size_t flips(std::span<const double> w, std::size_t from, std::size_t to) {
    std::size_t n = 0;
    for (std::size_t t = from; t < to; ++t) {
        if (sign_of(w[t]) != sign_of(w[t + 1])) ++n;
    }
    return n;
}

bool excluded_at(std::span<const JumpRegion> excluded, std::size_t t) {
    return std::any_of(excluded.begin(), excluded.end(), [t](const JumpRegion& r) { return r.contains(t); });
}

/// Region around peak `l` restricted to the unexcluded run [lo, hi].
JumpRegion build_region(std::span<const double> w, std::size_t l, std::size_t lo, std::size_t hi, double eta) {
    std::size_t l_min = l;
    while (l_min > lo && std::abs(w[l_min - 1]) > eta) --l_min;
    std::size_t l_max = l;
    while (l_max < hi && std::abs(w[l_max + 1]) > eta) ++l_max;

    JumpRegion r;
    r.location = l;
    r.n_alpha = flips(w, l_min, l);
    r.n_beta = flips(w, l, l_max);

    // Scanning outward from l, the cumulative flip count reaches n_alpha
    // (n_beta) only once the whole flank has been passed, so the bounds are
    // the support ends.
    r.alpha = l_min;
    r.beta = l_max;
    return r;
}

/// Unexcluded run containing l.
std::pair<std::size_t, std::size_t> gap_around(std::size_t l, std::size_t n, std::span<const JumpRegion> excluded) {
    std::size_t lo = l;
    while (lo > 0 && !excluded_at(excluded, lo - 1)) --lo;
    std::size_t hi = l;
    while (hi + 1 < n && !excluded_at(excluded, hi + 1)) ++hi;
    return {lo, hi};
}

} // namespace

std::size_t ChangePointConfig::levels_for(std::size_t length) const {
    return top_level.value_or(wavelet::default_levels(length));
}

std::size_t ChangePointConfig::depth_for(std::size_t levels) const {
    // Lambda = J would name a level 0, which carries no details.
    return std::min(refinement_depth.value_or(levels - 1), levels - 1);
}

void ChangePointConfig::validate(std::size_t length) const {
    const std::size_t J = levels_for(length);
    if (J < 1) throw ConfigError("change-point top level must be >= 1");
    if (refinement_depth && *refinement_depth > J) {
        throw ConfigError("refinement depth " + std::to_string(*refinement_depth) + " exceeds J = " +
                          std::to_string(J));
    }
    if (max_jumps < 1) throw ConfigError("max_jumps must be >= 1");
    if (!(threshold > 0.0)) throw ConfigError("detection threshold must be > 0");
    if (!(min_peak >= 0.0)) throw ConfigError("min_peak must be >= 0");
}

double noise_scale(std::span<const double> w) {
    if (w.empty()) return 0.0;
    std::vector<double> a(w.size());
    std::transform(w.begin(), w.end(), a.begin(), [](double v) { return std::abs(v); });
    const std::size_t mid = a.size() / 2;
    std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid), a.end());
    double med = a[mid];
    if (a.size() % 2 == 0) {
        const double lower = *std::max_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid));
        med = 0.5 * (med + lower);
    }
    return med / 0.6745;
}

JumpRegion detect_first_jump(std::span<const double> w, const DetectOptions& opts) {
    return detect_kth_jump(w, {}, opts);
}

JumpRegion detect_kth_jump(std::span<const double> w, std::span<const JumpRegion> excluded,
                           const DetectOptions& opts) {
    if (w.empty()) throw EmptyInputError("coefficient vector is empty");
    if (!opts.candidates.empty() && opts.candidates.size() != w.size()) {
        throw ShapeError("candidate mask length differs from coefficient length");
    }
    const std::size_t n = w.size();
    std::size_t best = n;
    double peak = -1.0;
    for (std::size_t t = 0; t < n; ++t) {
        if (!opts.candidates.empty() && !opts.candidates[t]) continue;
        if (excluded_at(excluded, t)) continue;
        const double a = std::abs(w[t]);
        if (a > peak) {
            peak = a;
            best = t;
        }
    }
    if (best == n) throw NoJumpFound("every index is excluded");
    const double sigma = opts.noise >= 0.0 ? opts.noise : noise_scale(w);
    if (!(peak > std::max(opts.threshold * sigma, opts.min_peak))) {
        throw NoJumpFound("peak below threshold");
    }
    const auto [lo, hi] = gap_around(best, n, excluded);
    return build_region(w, best, lo, hi, std::max(sigma, opts.min_peak));
}

AlignedDetails align_details(const wavelet::WaveletDecomposition& d) {
    AlignedDetails a;
    const std::size_t n = d.length();
    for (std::size_t j = 1; j <= d.levels(); ++j) {
        const std::size_t shift = wavelet::phase_shift(d.filter, j) % n;
        a.shifts.push_back(shift);
        a.levels.push_back(wavelet::align(d.detail(j), shift));
        const std::size_t width = ((std::size_t{1} << j) - 1) * (d.filter.length() - 1) + 1;
        std::vector<unsigned char> inside(n, 1);
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t raw = (t + shift) % n;
            if (raw + 1 < width) inside[t] = 0;
        }
        a.interior.push_back(std::move(inside));
        a.noise.push_back(noise_scale(a.levels.back()));
    }
    return a;
}

std::vector<JumpRegion> refine_across_scales(const AlignedDetails& aligned, const JumpRegion& region,
                                             std::size_t depth,
                                             const std::vector<std::vector<JumpRegion>>& same_level,
                                             double min_peak) {
    const std::size_t J = region.level;
    if (J < 1 || J > aligned.levels.size()) throw ConfigError("region level outside the decomposition");
    if (depth > J - 1) throw ConfigError("refinement depth exceeds available levels");
    std::vector<JumpRegion> out{region};
    for (std::size_t j = J - 1; j + depth >= J && j >= 1; --j) {
        const JumpRegion& parent = out.back();
        const auto& w = aligned.levels[j - 1];
        std::span<const JumpRegion> excl;
        if (j - 1 < same_level.size()) excl = same_level[j - 1];

        std::size_t best = w.size();
        double peak = -1.0;
        for (std::size_t t = parent.alpha; t <= parent.beta; ++t) {
            if (excluded_at(excl, t)) continue;
            const double a = std::abs(w[t]);
            if (a > peak) {
                peak = a;
                best = t;
            }
        }
        if (best == w.size() || !(peak > min_peak)) {
            JumpRegion kept = parent;
            kept.level = j;
            kept.refinement_miss = true;
            out.push_back(kept);
        } else {
            const auto [lo, hi] = gap_around(best, w.size(), excl);
            JumpRegion r = build_region(w, best, lo, hi, std::max(aligned.noise[j - 1], min_peak));
            r.level = j;
            out.push_back(r);
        }
        if (j == 1) break;
    }
    return out;
}

std::vector<JumpRegion> refine_across_scales(const wavelet::WaveletDecomposition& d, const JumpRegion& region,
                                             std::size_t depth, double min_peak) {
    return refine_across_scales(align_details(d), region, depth, {}, min_peak);
}

std::vector<JumpRegion> ColumnJumps::top() const {
    std::vector<JumpRegion> out;
    for (const auto& j : jumps) out.push_back(j.front());
    return out;
}

namespace {

ColumnJumps detect_in(const wavelet::WaveletDecomposition& d, const AlignedDetails& aligned,
                      const ChangePointConfig& config) {
    const std::size_t J = d.levels();
    const std::size_t depth = config.depth_for(J);
    ColumnJumps result;
    std::vector<std::vector<JumpRegion>> per_level(J);
    const auto& top = aligned.levels[J - 1];
    DetectOptions opts{config.threshold, config.min_peak, aligned.interior[J - 1], aligned.noise[J - 1]};

    for (std::size_t k = 0; k < config.max_jumps; ++k) {
        JumpRegion r;
        try {
            r = detect_kth_jump(top, per_level[J - 1], opts);
        } catch (const NoJumpFound&) {
            break;
        }
        r.level = J;
        auto chain = refine_across_scales(aligned, r, depth, per_level, config.min_peak);
        for (const auto& c : chain) per_level[c.level - 1].push_back(c);
        result.jumps.push_back(std::move(chain));
    }
    return result;
}

} // namespace

ColumnJumps detect_jumps(std::span<const double> x, const ChangePointConfig& config,
                         const wavelet::WaveletFilter& filter) {
    config.validate(x.size());
    const auto d = wavelet::modwt_forward(x, filter, config.levels_for(x.size()));
    return detect_in(d, align_details(d), config);
}

std::vector<double> reconstruct_column(std::span<const double> x, const ChangePointConfig& config,
                                       const wavelet::WaveletFilter& filter, ColumnJumps* jumps_out) {
    config.validate(x.size());
    const std::size_t n = x.size();
    const std::size_t J = config.levels_for(n);
    const auto d = wavelet::modwt_forward(x, filter, J);
    const auto aligned = align_details(d);
    ColumnJumps jumps = detect_in(d, aligned, config);
    if (jumps.jumps.empty()) {
        if (jumps_out) *jumps_out = std::move(jumps);
        return {x.begin(), x.end()};
    }
    const std::size_t depth = config.depth_for(J);
    wavelet::WaveletDecomposition kept = d;
    for (std::size_t j = J - depth; j <= J; ++j) {
        std::vector<bool> inside(n, false);
        for (const auto& chain : jumps.jumps) {
            for (const auto& r : chain) {
                if (r.level != j) continue;
                for (std::size_t t = r.alpha; t <= r.beta; ++t) inside[t] = true;
            }
        }
        auto& w = kept.details[j - 1];
        const std::size_t shift = aligned.shifts[j - 1];
        for (std::size_t t = 0; t < n; ++t) {
            // Wrapped boundary coefficients were never candidates and are kept as is.
            if (!inside[t] && aligned.interior[j - 1][t]) w[(t + shift) % n] = 0.0;
        }
    }
    if (jumps_out) *jumps_out = std::move(jumps);
    return wavelet::modwt_inverse(kept);
}

ReconstructedSeries reconstruct(const MultivariateSeries& x, const ChangePointConfig& config,
                                const wavelet::WaveletFilter& filter) {
    config.validate(x.rows());
    const std::size_t T = x.rows();
    const std::size_t D = x.cols();
    std::vector<double> values(T * D);
    std::vector<ColumnJumps> regions(D);
    for (std::size_t c = 0; c < D; ++c) {
        const auto col = x.column(c);
        const auto out = reconstruct_column(col, config, filter, &regions[c]);
        for (std::size_t t = 0; t < T; ++t) values[t * D + c] = out[t];
    }
    return ReconstructedSeries{x.with_values(std::move(values)), std::move(regions), config};
}

void write_regions_csv(std::ostream& out, const ReconstructedSeries& r) {
    out << "column,jump,level,l,alpha,beta,n_alpha,n_beta,refinement_miss\n";
    const auto& names = r.values.variable_names();
    for (std::size_t c = 0; c < r.regions.size(); ++c) {
        const auto& jumps = r.regions[c].jumps;
        for (std::size_t k = 0; k < jumps.size(); ++k) {
            for (const auto& reg : jumps[k]) {
                out << csv_escape(names[c]) << ',' << k << ',' << reg.level << ',' << reg.location << ','
                    << reg.alpha << ',' << reg.beta << ',' << reg.n_alpha << ',' << reg.n_beta << ','
                    << (reg.refinement_miss ? 1 : 0) << '\n';
            }
        }
    }
}

} // namespace mtm::llsa
