#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "majorant/models.hpp"
#include "majorant/stats.hpp"

using namespace majorant;

TEST_CASE("density model wires the primitive and time change", "[models]") {
    const CurveSpec spec = density_model(1.5, 1.0);
    CHECK(spec.tag == "density");
    CHECK(spec.bridge);
    CHECK(spec.Lambda(0.0) == 0.0);
    CHECK(spec.Lambda(0.5) == Catch::Approx(0.625));
    CHECK(spec.Lambda(1.0) == Catch::Approx(1.0));
    for (double t : {0.1, 0.5, 0.9}) {
        CHECK(spec.L(t) == spec.Lambda(t));
        CHECK(spec.dL(t) == spec.lambda(t));
    }
    CHECK(spec.inf_abs_dlambda == Catch::Approx(1.0));
}

TEST_CASE("density model rejects invalid curves", "[models]") {
    CHECK_THROWS_AS(density_model(1.0, 0.0), Error);  // constant, not decreasing
    CHECK_THROWS_AS(density_model(2.0, 1.0), Error);  // does not integrate to 1
    CHECK_THROWS_AS(density_model(1.25, 1.5), Error); // negative near t = 1
    CHECK_NOTHROW(density_model(2.0, 2.0));           // lambda(1) = 0 is allowed
}

TEST_CASE("regression model fixes L from the noise level", "[models]") {
    const CurveSpec one = regression_model(2.0, 1.0, 1.0);
    CHECK_FALSE(one.bridge);
    CHECK(one.L(0.7) == Catch::Approx(0.7));
    CHECK(one.dL(0.2) == Catch::Approx(1.0));
    const CurveSpec two = regression_model(2.0, 1.0, 2.0);
    CHECK(two.L(0.7) == Catch::Approx(2.8));
    CHECK_THROWS_AS(regression_model(2.0, 1.0, 0.0), Error);
    CHECK_THROWS_AS(regression_model(2.0, 1.0, -1.0), Error);
}

TEST_CASE("bound certificates hold on a fine grid", "[models]") {
    for (const CurveSpec& spec : {density_model(1.5, 1.0), regression_model(2.0, 1.0, 1.5)}) {
        const double h = 1e-6;
        for (int i = 0; i <= 1000; ++i) {
            const double t = static_cast<double>(i) / 1000.0;
            CHECK(std::fabs(spec.dlambda(t)) >= spec.inf_abs_dlambda - 1e-12);
            CHECK(spec.dL(t) >= spec.inf_dL - 1e-12);
            if (t + h <= 1.0) {
                const double ddL = (spec.dL(t + h) - spec.dL(t)) / h;
                CHECK(std::fabs(ddL) <= spec.sup_abs_ddL + 1e-6);
            }
        }
    }
}

TEST_CASE("quantile inversion round-trips through the primitive", "[models]") {
    const CurveSpec spec = density_model(1.5, 1.0);
    for (double t : {0.05, 0.3, 0.5, 0.77, 0.95}) {
        CHECK(cumulative_inverse(spec, spec.Lambda(t)) == Catch::Approx(t).margin(1e-9));
    }
    CHECK(lambda_inverse(spec, 1.0) == Catch::Approx(0.5).margin(1e-9));
    CHECK_THROWS_AS(lambda_inverse(spec, 1.6), Error);
    CHECK_THROWS_AS(lambda_inverse(spec, 0.5), Error);
}

TEST_CASE("density draws live in the unit interval and are deterministic", "[models]") {
    const CurveSpec spec = density_model(1.5, 1.0);
    const DataSet a = generate(spec, 500, RngStream(8, 1));
    const DataSet b = generate(spec, 500, RngStream(8, 1));
    for (std::size_t i = 0; i < a.n; ++i) {
        CHECK(a.observations[i] >= 0.0);
        CHECK(a.observations[i] <= 1.0);
        CHECK(a.observations[i] == b.observations[i]);
    }
    CHECK_THROWS_AS(generate(spec, 5, RngStream(1, 1)), Error);
}

TEST_CASE("empirical mean of density draws matches the model moment", "[models]") {
    // First moment of lambda(t) = 3/2 - t on [0,1] is 3/4 - 1/3 = 5/12.
    const CurveSpec spec = density_model(1.5, 1.0);
    const DataSet data = generate(spec, 100000, RngStream(909, 0));
    const double expected = 5.0 / 12.0;
    CHECK(mean(data.observations) ==
          Catch::Approx(expected).margin(3.0 * standard_error(data.observations)));
}

TEST_CASE("empirical distribution function of four draws", "[models]") {
    DataSet data;
    data.model = "density";
    data.n = 4;
    data.observations = {0.3, 0.1, 0.4, 0.2};
    const StepFunction fn = naive_estimator(data);
    REQUIRE(fn.size() == 5);
    CHECK(fn(0.05) == 0.0);
    CHECK(fn(0.1) == Catch::Approx(0.25));
    CHECK(fn(0.25) == Catch::Approx(0.5));
    CHECK(fn(0.35) == Catch::Approx(0.75));
    CHECK(fn(1.0) == Catch::Approx(1.0));
}

TEST_CASE("regression cumulative diagram of two responses", "[models]") {
    DataSet data;
    data.model = "regression";
    data.n = 2;
    data.observations = {1.0, 1.0};
    const StepFunction fn = naive_estimator(data);
    CHECK(fn(0.25) == 0.0);
    CHECK(fn(0.5) == Catch::Approx(0.5));
    CHECK(fn(0.75) == Catch::Approx(0.5));
    CHECK(fn(1.0) == Catch::Approx(1.0));
}

TEST_CASE("noiseless regression recovers its own increments", "[models]") {
    const CurveSpec spec = regression_model(2.0, 1.0, 1.0);
    const std::size_t n = 64;
    DataSet data;
    data.model = "regression";
    data.n = n;
    data.observations.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        data.observations[i] = spec.lambda(static_cast<double>(i + 1) / static_cast<double>(n));
    }
    const StepFunction estimate = grenander(data);
    for (std::size_t i = 0; i < n; ++i) {
        const double mid = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        CHECK(estimate(mid) == Catch::Approx(data.observations[i]).margin(1e-10));
    }
}

TEST_CASE("grenander output is nonincreasing on noisy data", "[models]") {
    for (int rep = 0; rep < 25; ++rep) {
        const CurveSpec spec = rep % 2 == 0 ? density_model(1.5, 1.0)
                                            : regression_model(2.0, 1.0, 1.0);
        const DataSet data = generate(spec, 200, RngStream(5555, rep));
        const StepFunction estimate = grenander(data);
        for (std::size_t i = 1; i < estimate.size(); ++i) {
            CHECK(estimate.values()[i] <= estimate.values()[i - 1]);
        }
    }
}

TEST_CASE("inverse process at the corners of the level range", "[models]") {
    // Lambda_n approximating the identity: unit slope everywhere.
    std::vector<double> knots, values;
    for (int i = 0; i <= 4; ++i) {
        knots.push_back(0.25 * i);
        values.push_back(0.25 * i);
    }
    const StepFunction identity(knots, values, Interval(0, 1));
    CHECK(inverse_process(identity, 0.0) == 1.0);
    CHECK(inverse_process(identity, 2.0) == 0.0);
}

TEST_CASE("switching relation is an exact equivalence", "[models]") {
    RngStream meta(777, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const bool density = rep % 2 == 0;
        const CurveSpec spec = density ? density_model(1.5, 1.0)
                                       : regression_model(2.0, 1.0, 1.0);
        const std::size_t n = 50 + static_cast<std::size_t>(meta.uniform() * 250);
        const DataSet data = generate(spec, n, RngStream(13000, rep));
        const StepFunction lambda_n = naive_estimator(data);
        const StepFunction estimate = left_derivative(lcm_of(lambda_n));
        const double a_lo = spec.lambda(1.0);
        const double a_hi = spec.lambda(0.0);
        for (int i = 0; i < 20; ++i) {
            const double t = (static_cast<double>(i) + 0.5) / 20.0;
            for (int j = 0; j < 20; ++j) {
                const double a = a_lo + (static_cast<double>(j) + 0.5) / 20.0 * (a_hi - a_lo);
                const bool lhs = estimate(t) <= a;
                const bool rhs = inverse_process(lambda_n, a) <= t;
                REQUIRE(lhs == rhs);
            }
        }
    }
}

TEST_CASE("noiseless inverse deviation stays within one design spacing", "[models]") {
    const CurveSpec spec = regression_model(2.0, 1.0, 1.0);
    const std::size_t n = 128;
    DataSet data;
    data.model = "regression";
    data.n = n;
    data.observations.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        data.observations[i] = spec.lambda(static_cast<double>(i + 1) / static_cast<double>(n));
    }
    for (double a : {1.2, 1.5, 1.8}) {
        const double v = v_process(data, spec, a);
        CHECK(std::fabs(v) <= std::cbrt(static_cast<double>(n)) / static_cast<double>(n) + 1e-9);
    }
    CHECK_THROWS_AS(v_process(data, spec, 0.5), Error);
}

TEST_CASE("dataset CSV interchange round-trips", "[models]") {
    const CurveSpec density = density_model(1.5, 1.0);
    const DataSet draws = generate(density, 50, RngStream(2301, 0));
    const DataSet back = dataset_from_csv(dataset_to_csv(draws));
    CHECK(back.model == "density");
    CHECK(back.observations == draws.observations);

    const CurveSpec reg = regression_model(2.0, 1.0, 1.0);
    const DataSet responses = generate(reg, 50, RngStream(2302, 0));
    const DataSet back2 = dataset_from_csv(dataset_to_csv(responses));
    CHECK(back2.model == "regression");
    CHECK(back2.observations == responses.observations);

    CsvTable bad{{"value"}, {{0.5}}};
    CHECK_THROWS_AS(dataset_from_csv(bad), Error);
    CsvTable shuffled{{"t", "y"}, {{0.9, 1.0}, {1.0, 1.0}}};
    CHECK_THROWS_AS(dataset_from_csv(shuffled), Error);
}

TEST_CASE("naive estimator is unbiased at an interior point", "[models][mc]") {
    constexpr std::size_t kReps = 1000;
    constexpr std::size_t kN = 10000;
    const CurveSpec spec = density_model(1.5, 1.0);
    std::vector<double> at_half(kReps);
    for (std::size_t r = 0; r < kReps; ++r) {
        const DataSet data = generate(spec, kN, RngStream(2211, r));
        at_half[r] = naive_estimator(data)(0.5);
    }
    const double target = spec.Lambda(0.5);
    CHECK(mean(at_half) == Catch::Approx(target).margin(3.0 * standard_error(at_half)));
}

TEST_CASE("regression estimator is unbiased at an interior point", "[models][mc]") {
    constexpr std::size_t kReps = 1000;
    constexpr std::size_t kN = 10000;
    const CurveSpec spec = regression_model(2.0, 1.0, 1.0);
    std::vector<double> at_half(kReps);
    for (std::size_t r = 0; r < kReps; ++r) {
        const DataSet data = generate(spec, kN, RngStream(2212, r));
        at_half[r] = naive_estimator(data)(0.5);
    }
    const double target = spec.Lambda(0.5);
    CHECK(mean(at_half) == Catch::Approx(target).margin(3.0 * standard_error(at_half)));
}

TEST_CASE("grenander estimate is consistent at desk scale", "[models][mc]") {
    constexpr std::size_t kReps = 500;
    constexpr std::size_t kN = 10000;
    const CurveSpec spec = density_model(1.5, 1.0);
    std::vector<double> at_half(kReps);
    for (std::size_t r = 0; r < kReps; ++r) {
        const DataSet data = generate(spec, kN, RngStream(2213, r));
        at_half[r] = grenander(data)(0.5);
    }
    // Tolerance from the n^{-1/3} convergence rate, about 0.046 at n = 1e4.
    CHECK(mean(at_half) == Catch::Approx(spec.lambda(0.5)).margin(0.05));
}
