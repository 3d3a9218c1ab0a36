#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "majorant/asymptotics.hpp"
#include "majorant/models.hpp"
#include "majorant/processes.hpp"
#include "majorant/stats.hpp"

#include "local_process.hpp"

using namespace majorant;
using majorant::testing::scaled_local_gap_at_zero;

TEST_CASE("scaling constants at reference slopes", "[asymptotics]") {
    // |lambda'| = 2, L' = 1.
    const CurveSpec steep = regression_model(2.5, 2.0, 1.0);
    const ScalingConstants a = scaling_constants(0.5, steep);
    CHECK(a.c1 == Catch::Approx(1.0).margin(1e-15));
    CHECK(a.c2 == Catch::Approx(1.0).margin(1e-15));

    // |lambda'| = 1, L' = 1.
    const CurveSpec unit = regression_model(2.0, 1.0, 1.0);
    const ScalingConstants b = scaling_constants(0.5, unit);
    CHECK(b.c1 == Catch::Approx(std::pow(2.0, -1.0 / 3.0)));
    CHECK(b.c2 == Catch::Approx(std::pow(4.0, 1.0 / 3.0)));

    CHECK_THROWS_AS(scaling_constants(0.0, unit), Error);
    CHECK_THROWS_AS(scaling_constants(1.0, unit), Error);
}

TEST_CASE("scaling identities hold on a fine grid for both models", "[asymptotics]") {
    for (const CurveSpec& spec : {density_model(1.5, 1.0), regression_model(2.0, 1.0, 1.0)}) {
        for (int i = 1; i < 1000; ++i) {
            const double t = static_cast<double>(i) / 1000.0;
            const ScalingConstants sc = scaling_constants(t, spec);
            const double first = sc.c1 * sc.c1 * spec.dL(t) * sc.c2;
            const double second = std::fabs(spec.dlambda(t)) * sc.c1 * sc.c2 * sc.c2;
            CHECK(std::fabs(first - 1.0) <= 1e-12);
            CHECK(std::fabs(second - 2.0) <= 1e-12);
        }
    }
}

TEST_CASE("moment estimator matches a direct computation", "[asymptotics]") {
    const ZetaConfig zeta{4.0, 0.01};
    const MomentEstimates m1 = mc_zeta_moment(1.0, 400, zeta, 99);
    // Recompute by hand from the same streams.
    std::vector<double> direct(400);
    const double origin[1] = {0.0};
    for (std::size_t r = 0; r < 400; ++r) {
        direct[r] = sample_zeta(origin, zeta, RngStream(99, r))[0];
    }
    CHECK(m1.mean_zeta0_p == Catch::Approx(mean(direct)).margin(1e-14));
    CHECK(m1.se == Catch::Approx(standard_error(direct)).margin(1e-14));

    // Jensen on paired paths: E[zeta^2] >= (E[zeta])^2.
    const MomentEstimates m2 = mc_zeta_moment(2.0, 400, zeta, 99);
    CHECK(m2.mean_zeta0_p >= m1.mean_zeta0_p * m1.mean_zeta0_p);

    CHECK_THROWS_AS(mc_zeta_moment(0.5, 400, zeta, 99), Error);
    CHECK_THROWS_AS(mc_zeta_moment(1.0, 50, zeta, 99), Error);
}

TEST_CASE("degenerate flat path has zero gap at the origin", "[asymptotics]") {
    // With the noise suppressed the drifted process is the concave parabola,
    // so the majorant gap vanishes identically.
    const PathGrid grid(-4.0, 4.0, 0.01);
    GaussianPath flat{grid, std::vector<double>(grid.count, 0.0), PathKind::two_sided_bm};
    const GaussianPath z = make_Z(flat);
    const double origin[1] = {0.0};
    CHECK(majorant_gap_at(z, origin)[0] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("covariance curve starts at the variance", "[asymptotics]") {
    const ZetaConfig zeta{6.0, 0.01};
    const std::vector<double> s_grid{0.0, 1.0, 2.0, 3.0};
    const MomentEstimates cov = mc_zeta_cov(1.0, s_grid, 500, zeta, 17);
    REQUIRE(cov.cov_curve.size() == 4);
    // Direct variance of the same zeta(0) samples.
    std::vector<double> z0(500);
    for (std::size_t r = 0; r < 500; ++r) {
        z0[r] = sample_zeta(s_grid, zeta, RngStream(17, r))[0];
    }
    CHECK(cov.cov_curve[0].cov == Catch::Approx(sample_variance(z0)).margin(1e-12));
    CHECK(cov.cov_integral > 0.0);
    CHECK(cov.s_max == 3.0);

    const std::vector<double> too_far{0.0, 3.5};
    CHECK_THROWS_AS(mc_zeta_cov(1.0, too_far, 500, zeta, 17), Error);
    const std::vector<double> no_origin{1.0, 2.0};
    CHECK_THROWS_AS(mc_zeta_cov(1.0, no_origin, 500, zeta, 17), Error);
}

TEST_CASE("theorem constants with constant integrands", "[asymptotics]") {
    // Regression lambda(t) = 2 - t, sigma = 1: the spatial integrands are
    // the constants 2^{1/3} and 2^{7/3}.
    const CurveSpec spec = regression_model(2.0, 1.0, 1.0);
    MomentEstimates moments;
    moments.p = 1.0;
    moments.mean_zeta0_p = 0.5;
    moments.se = 0.01;
    moments.cov_curve = {{0.0, 0.2, 0.01}, {1.0, 0.05, 0.01}};
    moments.cov_integral = 0.2;
    moments.cov_integral_se = 0.02;

    const Weight one;
    const ValueWithSe m = compute_m(1.0, spec, one, moments);
    CHECK(m.value == Catch::Approx(std::pow(2.0, 1.0 / 3.0) * 0.5).epsilon(1e-10));
    CHECK(m.se == Catch::Approx(std::pow(2.0, 1.0 / 3.0) * 0.01).epsilon(1e-10));
    const ValueWithSe s2 = compute_sigma2(1.0, spec, one, moments);
    CHECK(s2.value == Catch::Approx(std::pow(2.0, 7.0 / 3.0) * 0.2).epsilon(1e-10));

    // Zero weight kills both constants.
    const Weight zero{0.0, 0.0};
    CHECK(compute_m(1.0, spec, zero, moments).value == 0.0);
    CHECK(compute_sigma2(1.0, spec, zero, moments).value == 0.0);

    // Doubling the weight doubles m and quadruples sigma^2.
    const Weight two{2.0, 0.0};
    CHECK(compute_m(1.0, spec, two, moments).value == Catch::Approx(2.0 * m.value));
    CHECK(compute_sigma2(1.0, spec, two, moments).value == Catch::Approx(4.0 * s2.value));

    // Mismatched moment order is rejected.
    CHECK_THROWS_AS(compute_m(2.0, spec, one, moments), Error);
}

TEST_CASE("density spatial integrals agree with closed forms", "[asymptotics]") {
    // For lambda(t) = 3/2 - t with L = Lambda and |lambda'| = 1, p = 1:
    //   mean integrand: 2^{1/3} (3/2 - t)^{2/3},
    //     antiderivative -(3/5)(3/2 - t)^{5/3};
    //   variance integrand: 2^{7/3} (3/2 - t)^{5/3},
    //     antiderivative -(3/8)(3/2 - t)^{8/3}.
    const CurveSpec spec = density_model(1.5, 1.0);
    const Weight one;
    const double mean_closed =
        std::pow(2.0, 1.0 / 3.0) * 0.6 * (std::pow(1.5, 5.0 / 3.0) - std::pow(0.5, 5.0 / 3.0));
    const double var_closed =
        std::pow(2.0, 7.0 / 3.0) * 0.375 * (std::pow(1.5, 8.0 / 3.0) - std::pow(0.5, 8.0 / 3.0));
    CHECK(mean_spatial_integral(1.0, spec, one).value ==
          Catch::Approx(mean_closed).epsilon(1e-8));
    CHECK(variance_spatial_integral(1.0, spec, one).value ==
          Catch::Approx(var_closed).epsilon(1e-8));
}

TEST_CASE("adaptive quadrature hits closed forms", "[asymptotics]") {
    const double cubic = adaptive_gauss_legendre([](double t) { return t * t * t; }, 0.0, 2.0).value;
    CHECK(cubic == Catch::Approx(4.0).epsilon(1e-12));
    const double bump =
        adaptive_gauss_legendre([](double t) { return std::exp(-t * t); }, -3.0, 3.0).value;
    CHECK(bump == Catch::Approx(std::erf(3.0) * std::sqrt(M_PI)).epsilon(1e-8));
    const double kink =
        adaptive_gauss_legendre([](double t) { return std::pow(std::fabs(t), 2.0 / 3.0); }, 0.0,
                                1.0)
            .value;
    CHECK(kink == Catch::Approx(0.6).epsilon(1e-8));
}

TEST_CASE("disjoint seed runs of the moment estimator agree", "[asymptotics][mc]") {
    const ZetaConfig zeta{8.0, 0.005};
    const MomentEstimates a = mc_zeta_moment(1.0, 100000, zeta, 101);
    const MomentEstimates b = mc_zeta_moment(1.0, 100000, zeta, 202);
    const double combined = std::sqrt(a.se * a.se + b.se * b.se);
    CHECK(std::fabs(a.mean_zeta0_p - b.mean_zeta0_p) < 3.0 * combined);
    CHECK(a.mean_zeta0_p > 0.0);
}

TEST_CASE("covariance decays to noise level by the truncation horizon", "[asymptotics][mc]") {
    const ZetaConfig zeta{10.0, 0.005};
    std::vector<double> s_grid;
    for (double s = 0.0; s <= 5.0 + 1e-12; s += 0.5) s_grid.push_back(s);
    const MomentEstimates cov = mc_zeta_cov(1.0, s_grid, 100000, zeta, 303);
    const CovariancePoint& tail = cov.cov_curve.back();
    CHECK(tail.s == 5.0);
    CHECK(std::fabs(tail.cov) < 3.0 * tail.se);
    CHECK(cov.cov_integral > 0.0);
}

TEST_CASE("brownian scaling law: local process matches the gap process", "[asymptotics][mc]") {
    constexpr std::size_t kSamples = 10000;
    const double truncation = 8.0;
    const double step = 0.005;
    for (const auto& [abs_dlambda, dL] : std::vector<std::pair<double, double>>{{1.0, 1.0},
                                                                                {2.0, 1.0}}) {
        std::vector<double> direct(kSamples), scaled(kSamples);
        const double origin[1] = {0.0};
        for (std::size_t r = 0; r < kSamples; ++r) {
            direct[r] = sample_zeta(origin, truncation, step, RngStream(404, r))[0];
            scaled[r] =
                scaled_local_gap_at_zero(abs_dlambda, dL, truncation, step, RngStream(505, r));
        }
        const double ks = ks_statistic_two_sample(direct, scaled);
        CHECK(ks < 0.025);
    }
}
