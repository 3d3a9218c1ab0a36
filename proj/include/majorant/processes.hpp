#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "majorant/csv.hpp"
#include "majorant/errors.hpp"
#include "majorant/models.hpp"
#include "majorant/rng.hpp"
#include "majorant/step_function.hpp"

namespace majorant {

/// Uniform grid lo, lo+step, ..., hi with count = (hi-lo)/step + 1 exact.
struct PathGrid {
    double lo;
    double hi;
    double step;
    std::size_t count;

    PathGrid(double lo_, double hi_, double step_) : lo(lo_), hi(hi_), step(step_) {
        require(lo < hi, ErrorKind::invalid_grid, "grid requires lo < hi");
        require(step > 0.0, ErrorKind::invalid_grid, "grid step must be > 0");
        const double cells = (hi - lo) / step;
        const auto rounded = static_cast<long long>(std::llround(cells));
        require(rounded >= 1 && std::fabs(cells - static_cast<double>(rounded)) < 1e-9,
                ErrorKind::invalid_grid, "grid step must tile [lo, hi] exactly");
        count = static_cast<std::size_t>(rounded) + 1;
    }

    double abscissa(std::size_t i) const { return lo + static_cast<double>(i) * step; }

    /// Index of 0 on the grid; errors when 0 in [lo,hi] is not a grid point.
    std::size_t index_of_zero() const {
        require(lo <= 0.0 && hi >= 0.0, ErrorKind::invalid_grid, "grid does not cover 0");
        const double pos = -lo / step;
        const auto rounded = static_cast<long long>(std::llround(pos));
        require(std::fabs(pos - static_cast<double>(rounded)) < 1e-9, ErrorKind::invalid_grid,
                "0 must be a grid point");
        return static_cast<std::size_t>(rounded);
    }
};

enum class PathKind { brownian_motion, brownian_bridge, two_sided_bm, derived };

struct GaussianPath {
    PathGrid grid;
    std::vector<double> values;
    PathKind kind;

    double value_at_index(std::size_t i) const { return values[i]; }
};

/// Standard Brownian motion on a grid starting at 0: independent N(0, step)
/// increments per cell.
inline GaussianPath sample_bm(const PathGrid& grid, RngStream rng) {
    require(grid.lo == 0.0, ErrorKind::invalid_grid, "Brownian motion grid must start at 0");
    std::vector<double> values(grid.count);
    values[0] = 0.0;
    const double sd = std::sqrt(grid.step);
    for (std::size_t i = 1; i < grid.count; ++i) {
        values[i] = values[i - 1] + sd * rng.normal();
    }
    return {grid, std::move(values), PathKind::brownian_motion};
}

/// Brownian bridge on [0, L] pinned to 0 at both endpoints, built as
/// W(t) - (t/L) W(L). The pinning weight is computed as an index ratio so
/// the endpoint value is exactly 0.
inline GaussianPath sample_bridge(const PathGrid& grid, RngStream rng) {
    GaussianPath path = sample_bm(grid, rng);
    const double terminal = path.values.back();
    const double cells = static_cast<double>(grid.count - 1);
    for (std::size_t i = 0; i < grid.count; ++i) {
        path.values[i] -= (static_cast<double>(i) / cells) * terminal;
    }
    path.values.back() = 0.0;
    path.kind = PathKind::brownian_bridge;
    return path;
}

/// Two-sided Brownian motion originating from zero: two independent halves
/// glued at 0. The halves use fixed substreams of the caller's stream, so a
/// path sampled on a wider grid extends the narrower one increment for
/// increment.
inline GaussianPath sample_two_sided_bm(const PathGrid& grid, const RngStream& rng) {
    const std::size_t j0 = grid.index_of_zero();
    require(j0 > 0 && j0 + 1 < grid.count, ErrorKind::invalid_grid,
            "two-sided grid must extend strictly beyond 0 on both sides");
    std::vector<double> values(grid.count);
    values[j0] = 0.0;
    const double sd = std::sqrt(grid.step);
    RngStream pos = rng.substream(1);
    for (std::size_t i = j0 + 1; i < grid.count; ++i) {
        values[i] = values[i - 1] + sd * pos.normal();
    }
    RngStream neg = rng.substream(2);
    for (std::size_t i = j0; i-- > 0;) {
        values[i] = values[i + 1] + sd * neg.normal();
    }
    return {grid, std::move(values), PathKind::two_sided_bm};
}

/// Z(t) = W(t) - t^2 for a two-sided Brownian motion path W.
inline GaussianPath make_Z(const GaussianPath& path) {
    require(path.kind == PathKind::two_sided_bm, ErrorKind::invalid_input,
            "drifted process requires a two-sided Brownian motion path");
    GaussianPath out = path;
    for (std::size_t i = 0; i < out.grid.count; ++i) {
        const double t = out.grid.abscissa(i);
        out.values[i] -= t * t;
    }
    out.kind = PathKind::derived;
    return out;
}

/// Gap between a sampled path and its least concave majorant over the grid,
/// evaluated at the nearest grid point to each query. Values are clamped at
/// 0: the gap is nonnegative by construction and interpolation rounding can
/// produce -O(eps |Z|).
inline std::vector<double> majorant_gap_at(const GaussianPath& path,
                                           std::span<const double> eval_points) {
    std::vector<Point> pts(path.grid.count);
    for (std::size_t i = 0; i < path.grid.count; ++i) {
        pts[i] = {path.grid.abscissa(i), path.values[i]};
    }
    const PiecewiseLinear hull = lcm(pts, Interval(path.grid.lo, path.grid.hi));
    std::vector<double> gaps(eval_points.size());
    for (std::size_t q = 0; q < eval_points.size(); ++q) {
        const double s = eval_points[q];
        const auto j = static_cast<std::size_t>(std::llround((s - path.grid.lo) / path.grid.step));
        require(j < path.grid.count, ErrorKind::invalid_input, "evaluation point off the grid");
        gaps[q] = std::max(0.0, hull(pts[j].x) - pts[j].y);
    }
    return gaps;
}

/// Exact maximum of a Brownian bridge between values a and b whose increment
/// over the cell has the given variance, inverted from the reflection
/// principle: P(max >= m) = exp(-2 (m-a)(m-b) / variance) for m >= max(a, b).
inline double bridge_peak(double a, double b, double variance, double u) {
    const double d = a - b;
    return 0.5 * (a + b + std::sqrt(d * d - 2.0 * variance * std::log(u)));
}

/// Configuration of the limit gap process sampler: the two-sided Brownian
/// motion with parabolic drift is truncated to [-T, T] and discretized with
/// the given step. Evaluation points must stay within [-T/2, T/2]; the
/// truncation tail beyond that margin decays like exp(-C d^3).
struct ZetaConfig {
    double truncation = 8.0;
    double step = 0.005;
};

/// Samples the stationary gap process zeta(s) = [CM Z](s) - Z(s) of
/// Z(t) = W(t) - t^2 at the requested evaluation points.
///
/// The hull input carries, besides the grid values of Z, the exact law of
/// the within-cell maxima of the bridging Brownian motion (placed at cell
/// midpoints): the majorant rests on excursion peaks between grid points,
/// and a grid-only hull understates the gap by O(step^{1/2}). The peak
/// draws consume one side-ordered substream per half line, so a path
/// sampled at a wider truncation extends the narrower one.
inline std::vector<double> sample_zeta(std::span<const double> eval_points, double truncation,
                                       double step, const RngStream& rng) {
    require(truncation > 0.0, ErrorKind::invalid_input, "truncation must be > 0");
    require(step > 0.0 && step <= 0.01, ErrorKind::invalid_input,
            "zeta sampling requires 0 < step <= 0.01");
    for (const double s : eval_points) {
        require(std::fabs(s) <= 0.5 * truncation + 1e-9, ErrorKind::truncation_margin,
                "evaluation point " + std::to_string(s) + " outside the margin [-T/2, T/2]");
    }
    const auto cells = static_cast<std::size_t>(std::llround(truncation / step));
    const double t = static_cast<double>(cells) * step;
    const PathGrid grid(-t, t, step);
    const GaussianPath z = make_Z(sample_two_sided_bm(grid, rng));
    const std::size_t j0 = grid.index_of_zero();

    // Within a cell the quadratic drift deviates from its chord by at most
    // step^2 / 4, so the cell maximum of Z is the bridge maximum between the
    // Z endpoint values up to that error.
    std::vector<Point> pts;
    pts.reserve(2 * grid.count);
    RngStream pos_peaks = rng.substream(3);
    RngStream neg_peaks = rng.substream(4);
    std::vector<double> peaks(grid.count - 1);
    for (std::size_t i = j0; i + 1 < grid.count; ++i) {
        peaks[i] = bridge_peak(z.values[i], z.values[i + 1], step, 1.0 - pos_peaks.uniform());
    }
    for (std::size_t i = j0; i-- > 0;) {
        peaks[i] = bridge_peak(z.values[i], z.values[i + 1], step, 1.0 - neg_peaks.uniform());
    }
    for (std::size_t i = 0; i < grid.count; ++i) {
        pts.push_back({grid.abscissa(i), z.values[i]});
        if (i + 1 < grid.count) {
            pts.push_back({grid.abscissa(i) + 0.5 * step, peaks[i]});
        }
    }
    const PiecewiseLinear hull = lcm(pts, Interval(grid.lo, grid.hi));

    std::vector<double> gaps(eval_points.size());
    for (std::size_t q = 0; q < eval_points.size(); ++q) {
        const auto j =
            static_cast<std::size_t>(std::llround((eval_points[q] - grid.lo) / grid.step));
        require(j < grid.count, ErrorKind::invalid_input, "evaluation point off the grid");
        gaps[q] = std::max(0.0, hull(grid.abscissa(j)) - z.values[j]);
    }
    return gaps;
}

inline std::vector<double> sample_zeta(std::span<const double> eval_points,
                                       const ZetaConfig& config, const RngStream& rng) {
    return sample_zeta(eval_points, config.truncation, config.step, rng);
}

/// Brownian version of the naive cumulative estimator on the design grid
/// i/n: t -> Lambda(t) + n^{-1/2} W_n(L(t) - L(0)), where W_n is a Brownian
/// motion on [0, L(1)-L(0)] built from a bridge plus an independent linear
/// term when the model's noise limit is a bridge. Returned as a cadlag step
/// function so that its gap has the same structure as the empirical one.
inline StepFunction make_lambda_nW(const CurveSpec& spec, std::size_t n, const RngStream& rng) {
    require(n >= 10, ErrorKind::invalid_input, "sample size must be >= 10");
    const double dn = static_cast<double>(n);
    std::vector<double> image(n + 1); // L(i/n) - L(0), strictly increasing
    const double l0 = spec.L(0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        image[i] = spec.L(static_cast<double>(i) / dn) - l0;
    }
    const double total = image[n];

    // Brownian motion sampled directly at the (nonuniform) image points.
    std::vector<double> w(n + 1);
    w[0] = 0.0;
    RngStream stream = rng.substream(1);
    for (std::size_t i = 1; i <= n; ++i) {
        w[i] = w[i - 1] + std::sqrt(image[i] - image[i - 1]) * stream.normal();
    }
    if (spec.bridge) {
        // Pin to a bridge, then restore a Brownian motion with an
        // independent slope: B(x) + xi x, xi ~ N(0, 1/total).
        const double terminal = w[n];
        RngStream xi_stream = rng.substream(2);
        const double xi = xi_stream.normal(0.0, 1.0 / std::sqrt(total));
        for (std::size_t i = 0; i <= n; ++i) {
            const double ratio = image[i] / total;
            w[i] += (xi * total - terminal) * ratio;
        }
    }

    std::vector<double> knots(n + 1);
    std::vector<double> values(n + 1);
    const double noise_scale = 1.0 / std::sqrt(dn);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / dn;
        knots[i] = t;
        values[i] = spec.Lambda(t) + noise_scale * w[i];
    }
    return StepFunction(std::move(knots), std::move(values), Interval(0.0, 1.0));
}

/// Debugging export of a sampled path as a t,value table. Not a stable
/// interchange format.
inline CsvTable path_to_csv(const GaussianPath& path) {
    CsvTable table{{"t", "value"}, {}};
    table.rows.reserve(path.grid.count);
    for (std::size_t i = 0; i < path.grid.count; ++i) {
        table.rows.push_back({path.grid.abscissa(i), path.values[i]});
    }
    return table;
}

/// Test hook: the Brownian version built from externally supplied noise
/// values W_n(L(i/n) - L(0)) for i = 0..n.
inline StepFunction make_lambda_nW_from_noise(const CurveSpec& spec, std::size_t n,
                                              std::span<const double> noise) {
    require(noise.size() == n + 1, ErrorKind::invalid_input,
            "noise vector must have n + 1 entries");
    const double dn = static_cast<double>(n);
    std::vector<double> knots(n + 1);
    std::vector<double> values(n + 1);
    const double noise_scale = 1.0 / std::sqrt(dn);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / dn;
        knots[i] = t;
        values[i] = spec.Lambda(t) + noise_scale * noise[i];
    }
    return StepFunction(std::move(knots), std::move(values), Interval(0.0, 1.0));
}

} // namespace majorant
