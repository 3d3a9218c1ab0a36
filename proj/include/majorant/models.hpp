#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "majorant/csv.hpp"
#include "majorant/errors.hpp"
#include "majorant/quadrature.hpp"
#include "majorant/rng.hpp"
#include "majorant/step_function.hpp"

namespace majorant {

/// A statistical model in the common setting: a strictly decreasing curve
/// lambda on [0,1] with primitive Lambda, plus the time change L that scales
/// the Gaussian approximation of the centered naive estimator. The bound
/// certificates are the constants the standing assumptions require:
/// inf |lambda'| > 0, inf L' > 0, sup |L''| < infinity.
struct CurveSpec {
    std::function<double(double)> lambda;
    std::function<double(double)> dlambda;
    std::function<double(double)> Lambda;
    std::function<double(double)> L;
    std::function<double(double)> dL;
    double inf_abs_dlambda = 0.0;
    double inf_dL = 0.0;
    double sup_abs_ddL = 0.0;
    bool bridge = false; // noise approximated by a Brownian bridge rather than a motion
    std::string tag;
};

struct DataSet {
    std::string model; // "density" or "regression"
    std::size_t n = 0;
    // Density: i.i.d. draws in [0,1]. Regression: responses at design
    // points i/n for i = 1..n, in design order.
    std::vector<double> observations;
};

namespace detail {

/// Bisection solve of f(t) = target for monotone f on [lo, hi], to an
/// absolute tolerance on t.
template <class F>
double bisect_monotone(F&& f, double lo, double hi, double target, bool increasing,
                       double tol = 1e-10) {
    double a = lo, b = hi;
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        const bool go_right = increasing ? (f(mid) < target) : (f(mid) > target);
        if (go_right) {
            a = mid;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

inline void validate_decreasing(const std::function<double(double)>& lambda,
                                const std::function<double(double)>& dlambda) {
    constexpr int kGridSize = 1000;
    for (int i = 0; i < kGridSize; ++i) {
        const double t0 = static_cast<double>(i) / kGridSize;
        const double t1 = static_cast<double>(i + 1) / kGridSize;
        require(lambda(t1) < lambda(t0), ErrorKind::invalid_model,
                "lambda must be strictly decreasing on [0,1]");
        require(dlambda(0.5 * (t0 + t1)) < 0.0, ErrorKind::invalid_model,
                "lambda' must be negative on [0,1]");
    }
}

} // namespace detail

/// Monotone density model: lambda(t) = a - b t must be a strictly decreasing
/// density on [0,1]. The time change is L = Lambda and the noise limit is a
/// Brownian bridge (empirical-process setting).
inline CurveSpec density_model(double a, double b) {
    CurveSpec spec;
    spec.lambda = [a, b](double t) { return a - b * t; };
    spec.dlambda = [b](double) { return -b; };
    spec.Lambda = [a, b](double t) { return a * t - 0.5 * b * t * t; };
    spec.L = spec.Lambda;
    spec.dL = spec.lambda;
    spec.inf_abs_dlambda = b;
    spec.inf_dL = a - b; // lambda(1)
    spec.sup_abs_ddL = b;
    spec.bridge = true;
    spec.tag = "density";

    detail::validate_decreasing(spec.lambda, spec.dlambda);
    require(spec.inf_abs_dlambda > 0.0, ErrorKind::invalid_model, "inf |lambda'| must be > 0");
    require(spec.lambda(1.0) >= 0.0, ErrorKind::invalid_model,
            "lambda must be nonnegative on [0,1]");
    const double total = adaptive_gauss_legendre(spec.lambda, 0.0, 1.0, 1e-12).value;
    require(std::fabs(total - 1.0) <= 1e-8, ErrorKind::invalid_model,
            "lambda must integrate to 1 over [0,1] (got " + std::to_string(total) + ")");
    return spec;
}

/// Monotone regression model with homoscedastic Gaussian noise of standard
/// deviation sigma at design points i/n: the time change is L(t) = sigma^2 t
/// and the noise limit is a Brownian motion.
inline CurveSpec regression_model(double a, double b, double sigma) {
    require(sigma > 0.0, ErrorKind::invalid_model, "noise level sigma must be > 0");
    CurveSpec spec;
    spec.lambda = [a, b](double t) { return a - b * t; };
    spec.dlambda = [b](double) { return -b; };
    spec.Lambda = [a, b](double t) { return a * t - 0.5 * b * t * t; };
    const double s2 = sigma * sigma;
    spec.L = [s2](double t) { return s2 * t; };
    spec.dL = [s2](double) { return s2; };
    spec.inf_abs_dlambda = b;
    spec.inf_dL = s2;
    spec.sup_abs_ddL = 0.0;
    spec.bridge = false;
    spec.tag = "regression";

    detail::validate_decreasing(spec.lambda, spec.dlambda);
    require(spec.inf_abs_dlambda > 0.0, ErrorKind::invalid_model, "inf |lambda'| must be > 0");
    return spec;
}

/// Inverse g = lambda^{-1} on (lambda(1), lambda(0)), by bisection to 1e-10.
inline double lambda_inverse(const CurveSpec& spec, double a) {
    require(a > spec.lambda(1.0) && a < spec.lambda(0.0), ErrorKind::level_range,
            "level must lie strictly between lambda(1) and lambda(0)");
    return detail::bisect_monotone(spec.lambda, 0.0, 1.0, a, /*increasing=*/false);
}

/// Quantile Lambda^{-1}(u) for the density model, by bisection to 1e-10.
inline double cumulative_inverse(const CurveSpec& spec, double u) {
    require(u >= 0.0 && u <= 1.0, ErrorKind::invalid_input, "quantile level must be in [0,1]");
    return detail::bisect_monotone(spec.Lambda, 0.0, 1.0, u, /*increasing=*/true);
}

inline DataSet generate(const CurveSpec& spec, std::size_t n, RngStream rng) {
    require(n >= 10, ErrorKind::invalid_input, "sample size must be >= 10");
    DataSet data;
    data.model = spec.tag;
    data.n = n;
    data.observations.resize(n);
    if (spec.tag == "density") {
        for (std::size_t i = 0; i < n; ++i) {
            data.observations[i] = cumulative_inverse(spec, rng.uniform());
        }
    } else {
        // Responses lambda(i/n) + sigma eps_i; sigma enters through L' = sigma^2.
        const double sigma = std::sqrt(spec.dL(0.0));
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i + 1) / static_cast<double>(n);
            data.observations[i] = spec.lambda(t) + sigma * rng.normal();
        }
    }
    return data;
}

/// Naive cumulative estimator: the empirical distribution function for
/// density data, the normalized cumulative-sum diagram for regression data.
inline StepFunction naive_estimator(const DataSet& data) {
    require(data.n == data.observations.size(), ErrorKind::invalid_input,
            "dataset length does not match n");
    const double n = static_cast<double>(data.n);
    std::vector<double> knots{0.0};
    std::vector<double> values{0.0};
    if (data.model == "density") {
        std::vector<double> sorted = data.observations;
        std::sort(sorted.begin(), sorted.end());
        require(sorted.front() >= 0.0 && sorted.back() <= 1.0, ErrorKind::invalid_input,
                "density draws must lie in [0,1]");
        knots.reserve(data.n + 1);
        values.reserve(data.n + 1);
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            const double height = static_cast<double>(i + 1) / n;
            if (sorted[i] == knots.back()) {
                values.back() = height; // tied draws merge into one jump
            } else {
                knots.push_back(sorted[i]);
                values.push_back(height);
            }
        }
    } else if (data.model == "regression") {
        knots.reserve(data.n + 1);
        values.reserve(data.n + 1);
        double cumulative = 0.0;
        for (std::size_t i = 0; i < data.n; ++i) {
            cumulative += data.observations[i];
            knots.push_back(static_cast<double>(i + 1) / n);
            values.push_back(cumulative / n);
        }
    } else {
        throw Error(ErrorKind::invalid_input, "unknown dataset model tag '" + data.model + "'");
    }
    return StepFunction(std::move(knots), std::move(values), Interval(0.0, 1.0));
}

/// Grenander-type estimate: left derivative of the LCM of the naive
/// cumulative estimator. Nonincreasing by construction.
inline StepFunction grenander(const DataSet& data) {
    return left_derivative(lcm_of(naive_estimator(data)));
}

/// Inverse process U_n(a): the leftmost maximizer of Lambda_n(t) - a t over
/// the knots of Lambda_n together with t = 1.
inline double inverse_process(const StepFunction& lambda_n, double a) {
    const auto& k = lambda_n.knots();
    const auto& v = lambda_n.values();
    double best_t = k[0];
    double best = v[0] - a * k[0];
    for (std::size_t i = 1; i < k.size(); ++i) {
        const double obj = v[i] - a * k[i];
        if (obj > best) {
            best = obj;
            best_t = k[i];
        }
    }
    const double hi = lambda_n.domain().hi;
    if (k.back() < hi) {
        const double obj = v.back() - a * hi;
        if (obj > best) {
            best_t = hi;
        }
    }
    return best_t;
}

/// Rescaled inverse-process deviation V_n(a) = n^{1/3} (U_n(a) - g(a)).
inline double v_process(const DataSet& data, const CurveSpec& spec, double a) {
    const double g = lambda_inverse(spec, a); // validates the level range
    const StepFunction lambda_n = naive_estimator(data);
    const double u = inverse_process(lambda_n, a);
    return std::cbrt(static_cast<double>(data.n)) * (u - g);
}

/// Dataset interchange: density draws as a single x column, regression
/// responses as t,y rows at the design points i/n.
inline CsvTable dataset_to_csv(const DataSet& data) {
    CsvTable table;
    if (data.model == "density") {
        table.header = {"x"};
        for (double x : data.observations) table.rows.push_back({x});
    } else if (data.model == "regression") {
        table.header = {"t", "y"};
        const double n = static_cast<double>(data.n);
        for (std::size_t i = 0; i < data.n; ++i) {
            table.rows.push_back({static_cast<double>(i + 1) / n, data.observations[i]});
        }
    } else {
        throw Error(ErrorKind::invalid_input, "unknown dataset model tag '" + data.model + "'");
    }
    return table;
}

inline DataSet dataset_from_csv(const CsvTable& table) {
    DataSet data;
    if (table.header == std::vector<std::string>{"x"}) {
        data.model = "density";
        data.n = table.rows.size();
        for (const auto& row : table.rows) {
            require(row[0] >= 0.0 && row[0] <= 1.0, ErrorKind::invalid_input,
                    "density draws must lie in [0,1]");
            data.observations.push_back(row[0]);
        }
    } else if (table.header == std::vector<std::string>{"t", "y"}) {
        data.model = "regression";
        data.n = table.rows.size();
        const double n = static_cast<double>(data.n);
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const double expected = static_cast<double>(i + 1) / n;
            require(std::fabs(table.rows[i][0] - expected) <= 1e-9, ErrorKind::invalid_input,
                    "regression design points must be i/n in order");
            data.observations.push_back(table.rows[i][1]);
        }
    } else {
        throw Error(ErrorKind::invalid_input,
                    "dataset CSV must have header 'x' (density) or 't,y' (regression)");
    }
    require(data.n >= 1, ErrorKind::invalid_input, "dataset is empty");
    return data;
}

} // namespace majorant
