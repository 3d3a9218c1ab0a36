#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "majorant/errors.hpp"

namespace majorant {

namespace detail {

// 5-point Gauss-Legendre nodes and weights on [-1, 1].
inline constexpr double kGl5Nodes[5] = {
    -0.90617984593866399280, -0.53846931010568309104, 0.0,
    0.53846931010568309104, 0.90617984593866399280};
inline constexpr double kGl5Weights[5] = {
    0.23692688505618908751, 0.47862867049936646804, 0.56888888888888888889,
    0.47862867049936646804, 0.23692688505618908751};

} // namespace detail

/// Fixed 5-point Gauss-Legendre rule on [a, b]; exact for polynomials of
/// degree <= 9.
template <class F>
double gauss_legendre_5(F&& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) {
        s += detail::kGl5Weights[i] * f(mid + half * detail::kGl5Nodes[i]);
    }
    return half * s;
}

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    int max_depth = 0;
};

namespace detail {

template <class F>
void adaptive_gl_recurse(F& f, double a, double b, double whole, double scale,
                         double rel_tol, int depth, int max_depth, QuadratureResult& out) {
    const double mid = 0.5 * (a + b);
    const double left = gauss_legendre_5(f, a, mid);
    const double right = gauss_legendre_5(f, mid, b);
    out.evaluations += 10;
    out.max_depth = std::max(out.max_depth, depth);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= rel_tol * scale * ((b - a)) || (b - a) < 1e-14) {
        out.value += left + right;
        out.error_estimate += std::fabs(delta);
        return;
    }
    if (depth >= max_depth) {
        throw Error(ErrorKind::numeric,
                    "adaptive quadrature failed to converge on [" + std::to_string(a) + ", " +
                        std::to_string(b) + "] (residual " + std::to_string(delta) + ")");
    }
    adaptive_gl_recurse(f, a, mid, left, scale, rel_tol, depth + 1, max_depth, out);
    adaptive_gl_recurse(f, mid, b, right, scale, rel_tol, depth + 1, max_depth, out);
}

} // namespace detail

/// Adaptive composite Gauss-Legendre integration of f over [a, b] with a
/// relative error target. Throws a numeric error when bisection bottoms out
/// without meeting the target.
template <class F>
QuadratureResult adaptive_gauss_legendre(F&& f, double a, double b, double rel_tol = 1e-10,
                                         int max_depth = 40) {
    require(a < b, ErrorKind::invalid_input, "quadrature interval must satisfy a < b");
    QuadratureResult out;
    const double whole = gauss_legendre_5(f, a, b);
    out.evaluations = 5;
    // Scale per unit length so the split tolerances add up to the target.
    const double scale = std::max(std::fabs(whole), 1e-300) / (b - a);
    detail::adaptive_gl_recurse(f, a, b, whole, scale, rel_tol, 1, max_depth, out);
    return out;
}

} // namespace majorant
