#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "majorant/errors.hpp"
#include "majorant/models.hpp"
#include "majorant/parallel.hpp"
#include "majorant/processes.hpp"
#include "majorant/quadrature.hpp"
#include "majorant/stats.hpp"

namespace majorant {

/// Weight w of the integrating measure dmu(t) = w(t) dt on [0,1]. Linear
/// weights are differentiable with bounded derivative, which is all the
/// variance formulas require; nonnegativity on [0,1] is validated.
struct Weight {
    double c0 = 1.0;
    double c1 = 0.0;

    double operator()(double t) const { return c0 + c1 * t; }

    void validate() const {
        require(c0 >= 0.0 && c0 + c1 >= 0.0, ErrorKind::validation,
                "weight must be nonnegative on [0,1]");
    }
};

/// Local scaling constants of the limit process at t:
///   c1 = (|lambda'(t)| / (2 L'(t)^2))^{1/3},  c2 = (4 L'(t) / lambda'(t)^2)^{1/3}.
/// They satisfy c1^2 L' c2 = 1 and |lambda'| c1 c2^2 = 2.
struct ScalingConstants {
    double c1;
    double c2;
};

inline ScalingConstants scaling_constants(double t, const CurveSpec& spec) {
    require(t > 0.0 && t < 1.0, ErrorKind::invalid_input,
            "scaling constants are defined for t in (0,1)");
    const double dl = std::fabs(spec.dlambda(t));
    const double dL = spec.dL(t);
    return {std::cbrt(dl / (2.0 * dL * dL)), std::cbrt(4.0 * dL / (dl * dl))};
}

struct CovariancePoint {
    double s;
    double cov;
    double se;
};

/// Monte Carlo estimates of the limit gap process moments: E[zeta(0)^p],
/// the covariance curve s -> cov(zeta(0)^p, zeta(s)^p), and its truncated
/// integral over [0, s_max]. Never closed-form; always reported with
/// standard errors and the full sampling configuration.
struct MomentEstimates {
    double p = 1.0;
    double mean_zeta0_p = 0.0;
    double se = 0.0;
    std::vector<CovariancePoint> cov_curve;
    double cov_integral = 0.0;
    double cov_integral_se = 0.0;
    // Configuration echo.
    ZetaConfig zeta;
    std::size_t replications = 0;
    double s_max = 0.0;
    std::uint64_t seed = 0;
};

inline MomentEstimates mc_zeta_moment(double p, std::size_t replications, const ZetaConfig& zeta,
                                      std::uint64_t seed, unsigned threads = 0) {
    require(p >= 1.0, ErrorKind::validation, "moment order requires p >= 1");
    require(replications >= 100, ErrorKind::validation, "moment estimation requires R >= 100");
    std::vector<double> samples(replications);
    const double origin[1] = {0.0};
    parallel_for(replications, threads, [&](std::size_t r) {
        RngStream rng(seed, r);
        samples[r] = std::pow(sample_zeta(origin, zeta, rng)[0], p);
    });
    MomentEstimates out;
    out.p = p;
    out.mean_zeta0_p = mean(samples);
    out.se = standard_error(samples);
    out.zeta = zeta;
    out.replications = replications;
    out.seed = seed;
    return out;
}

/// Joint sampling of zeta at 0 and each s in the grid; sample covariances
/// with standard errors, plus the trapezoid integral over [0, max(s_grid)].
inline MomentEstimates mc_zeta_cov(double p, std::span<const double> s_grid,
                                   std::size_t replications, const ZetaConfig& zeta,
                                   std::uint64_t seed, unsigned threads = 0) {
    require(p >= 1.0, ErrorKind::validation, "moment order requires p >= 1");
    require(replications >= 100, ErrorKind::validation, "covariance estimation requires R >= 100");
    require(!s_grid.empty() && s_grid[0] == 0.0, ErrorKind::invalid_input,
            "covariance grid must start at s = 0");
    for (std::size_t i = 1; i < s_grid.size(); ++i) {
        require(s_grid[i] > s_grid[i - 1], ErrorKind::invalid_input,
                "covariance grid must be strictly increasing");
    }
    const double s_max = s_grid.back();
    require(s_max <= 0.5 * zeta.truncation + 1e-9, ErrorKind::truncation_margin,
            "covariance grid exceeds the truncation margin T/2");

    const std::size_t cols = s_grid.size();
    std::vector<std::vector<double>> samples(cols, std::vector<double>(replications));
    parallel_for(replications, threads, [&](std::size_t r) {
        RngStream rng(seed, r);
        const std::vector<double> gaps = sample_zeta(s_grid, zeta, rng);
        for (std::size_t j = 0; j < cols; ++j) {
            samples[j][r] = std::pow(gaps[j], p);
        }
    });

    MomentEstimates out;
    out.p = p;
    out.mean_zeta0_p = mean(samples[0]);
    out.se = standard_error(samples[0]);
    out.zeta = zeta;
    out.replications = replications;
    out.s_max = s_max;
    out.seed = seed;
    out.cov_curve.resize(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        out.cov_curve[j] = {s_grid[j], sample_covariance(samples[0], samples[j]),
                            covariance_standard_error(samples[0], samples[j])};
    }
    double integral = 0.0;
    double var_integral = 0.0;
    for (std::size_t j = 1; j < cols; ++j) {
        const double h = 0.5 * (s_grid[j] - s_grid[j - 1]);
        integral += h * (out.cov_curve[j - 1].cov + out.cov_curve[j].cov);
        var_integral += h * h * (out.cov_curve[j - 1].se * out.cov_curve[j - 1].se +
                                 out.cov_curve[j].se * out.cov_curve[j].se);
    }
    out.cov_integral = integral;
    out.cov_integral_se = std::sqrt(var_integral);
    return out;
}

/// Spatial factor of the asymptotic mean:
///   integral over [0,1] of 2^{p/3} L'(t)^{2p/3} / |lambda'(t)|^{p/3} w(t) dt.
inline QuadratureResult mean_spatial_integral(double p, const CurveSpec& spec, const Weight& w) {
    auto integrand = [&](double t) {
        return std::pow(2.0, p / 3.0) * std::pow(spec.dL(t), 2.0 * p / 3.0) /
               std::pow(std::fabs(spec.dlambda(t)), p / 3.0) * w(t);
    };
    return adaptive_gauss_legendre(integrand, 0.0, 1.0, 1e-10);
}

/// Spatial factor of the asymptotic variance:
///   integral over [0,1] of 2^{(2p+5)/3} L'(t)^{(4p+1)/3} / |lambda'(t)|^{(2p+2)/3} w(t)^2 dt.
inline QuadratureResult variance_spatial_integral(double p, const CurveSpec& spec,
                                                  const Weight& w) {
    auto integrand = [&](double t) {
        return std::pow(2.0, (2.0 * p + 5.0) / 3.0) *
               std::pow(spec.dL(t), (4.0 * p + 1.0) / 3.0) /
               std::pow(std::fabs(spec.dlambda(t)), (2.0 * p + 2.0) / 3.0) * w(t) * w(t);
    };
    return adaptive_gauss_legendre(integrand, 0.0, 1.0, 1e-10);
}

struct ValueWithSe {
    double value;
    double se;
};

/// Asymptotic mean m = E[zeta(0)^p] * mean_spatial_integral. The Monte Carlo
/// standard error of the moment estimate propagates linearly.
inline ValueWithSe compute_m(double p, const CurveSpec& spec, const Weight& w,
                             const MomentEstimates& moments) {
    w.validate();
    require(moments.p == p, ErrorKind::invalid_input,
            "moment estimates were computed for a different p");
    const QuadratureResult q = mean_spatial_integral(p, spec, w);
    return {moments.mean_zeta0_p * q.value, moments.se * q.value};
}

/// Asymptotic variance sigma^2 = variance_spatial_integral * covariance
/// integral of the limit gap process.
inline ValueWithSe compute_sigma2(double p, const CurveSpec& spec, const Weight& w,
                                  const MomentEstimates& moments) {
    w.validate();
    require(moments.p == p, ErrorKind::invalid_input,
            "moment estimates were computed for a different p");
    require(!moments.cov_curve.empty(), ErrorKind::invalid_input,
            "sigma^2 requires covariance estimates (run the covariance sampler)");
    const QuadratureResult q = variance_spatial_integral(p, spec, w);
    return {moments.cov_integral * q.value, moments.cov_integral_se * q.value};
}

/// The two constants of the central limit theorem for the L_p distance,
/// with propagated Monte Carlo standard errors and quadrature diagnostics.
struct TheoremConstants {
    double p = 1.0;
    double m = 0.0;
    double m_se = 0.0;
    double sigma2 = 0.0;
    double sigma2_se = 0.0;
    double mean_quadrature_error = 0.0;
    double variance_quadrature_error = 0.0;
};

inline TheoremConstants theorem_constants(double p, const CurveSpec& spec, const Weight& w,
                                          const MomentEstimates& moments) {
    TheoremConstants out;
    out.p = p;
    const ValueWithSe m = compute_m(p, spec, w, moments);
    const ValueWithSe s2 = compute_sigma2(p, spec, w, moments);
    out.m = m.value;
    out.m_se = m.se;
    out.sigma2 = s2.value;
    out.sigma2_se = s2.se;
    out.mean_quadrature_error = mean_spatial_integral(p, spec, w).error_estimate;
    out.variance_quadrature_error = variance_spatial_integral(p, spec, w).error_estimate;
    return out;
}

} // namespace majorant
