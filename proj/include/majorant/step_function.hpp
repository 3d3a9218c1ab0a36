#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "majorant/errors.hpp"

namespace majorant {

struct Point {
    double x;
    double y;
};

struct Interval {
    double lo;
    double hi;

    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        require(lo < hi, ErrorKind::invalid_input, "interval requires lo < hi");
    }

    double length() const noexcept { return hi - lo; }
    bool contains(double t) const noexcept { return t >= lo && t <= hi; }
};

/// Concave piecewise-linear function given by its vertices. The slopes of
/// consecutive segments are nonincreasing and the first/last abscissae are
/// the domain endpoints.
class PiecewiseLinear {
public:
    explicit PiecewiseLinear(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
        require(vertices_.size() >= 2, ErrorKind::degenerate_input,
                "piecewise-linear function needs >= 2 vertices");
        for (std::size_t i = 1; i < vertices_.size(); ++i) {
            require(vertices_[i].x > vertices_[i - 1].x, ErrorKind::invalid_input,
                    "vertex abscissae must be strictly increasing");
        }
        for (std::size_t i = 2; i < vertices_.size(); ++i) {
            require(slope(i - 1) <= slope(i - 2), ErrorKind::invalid_input,
                    "segment slopes must be nonincreasing (concavity)");
        }
    }

    /// Linear interpolation; exact at vertices.
    double operator()(double t) const {
        require(t >= vertices_.front().x && t <= vertices_.back().x, ErrorKind::invalid_input,
                "evaluation outside domain");
        auto it = std::lower_bound(vertices_.begin(), vertices_.end(), t,
                                   [](const Point& p, double v) { return p.x < v; });
        if (it != vertices_.end() && it->x == t) return it->y;
        const Point& r = *it;
        const Point& l = *(it - 1);
        const double w = (t - l.x) / (r.x - l.x);
        return l.y + w * (r.y - l.y);
    }

    double slope(std::size_t segment) const {
        const Point& l = vertices_[segment];
        const Point& r = vertices_[segment + 1];
        return (r.y - l.y) / (r.x - l.x);
    }

    const std::vector<Point>& vertices() const noexcept { return vertices_; }
    std::size_t segment_count() const noexcept { return vertices_.size() - 1; }
    double domain_lo() const noexcept { return vertices_.front().x; }
    double domain_hi() const noexcept { return vertices_.back().x; }

private:
    std::vector<Point> vertices_;
};

/// Cadlag piecewise-constant function on a closed interval: the value on
/// [knot_i, knot_{i+1}) is values[i], and evaluation at t returns the value
/// of the last knot <= t.
class StepFunction {
public:
    StepFunction(std::vector<double> knots, std::vector<double> values, Interval domain)
        : knots_(std::move(knots)), values_(std::move(values)), domain_(domain) {
        require(!knots_.empty(), ErrorKind::degenerate_input, "step function needs >= 1 knot");
        require(knots_.size() == values_.size(), ErrorKind::invalid_input,
                "knots and values must have equal length");
        require(knots_.front() == domain_.lo, ErrorKind::invalid_input,
                "first knot must equal the domain lower endpoint");
        require(knots_.back() <= domain_.hi, ErrorKind::invalid_input,
                "knots must lie within the domain");
        for (std::size_t i = 1; i < knots_.size(); ++i) {
            require(knots_[i] > knots_[i - 1], ErrorKind::invalid_input,
                    "knots must be strictly increasing");
        }
    }

    double operator()(double t) const {
        require(domain_.contains(t), ErrorKind::invalid_input, "evaluation outside domain");
        auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
        return values_[static_cast<std::size_t>(it - knots_.begin()) - 1];
    }

    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<double>& values() const noexcept { return values_; }
    const Interval& domain() const noexcept { return domain_; }
    std::size_t size() const noexcept { return knots_.size(); }

private:
    std::vector<double> knots_;
    std::vector<double> values_;
    Interval domain_;
};

/// Least concave majorant of a finite point set on an interval: the upper
/// concave hull, built by a single monotone-stack pass over the sorted
/// points. Collinear points are eliminated, so consecutive hull slopes
/// decrease strictly and the representation is canonical.
inline PiecewiseLinear lcm(std::span<const Point> points, const Interval& interval) {
    require(points.size() >= 2, ErrorKind::degenerate_input, "hull needs >= 2 points");
    for (std::size_t i = 1; i < points.size(); ++i) {
        require(points[i].x > points[i - 1].x, ErrorKind::invalid_input,
                "point abscissae must be strictly increasing");
    }
    require(points.front().x == interval.lo && points.back().x == interval.hi,
            ErrorKind::invalid_input, "point set must cover both interval endpoints");

    auto turn = [](const Point& o, const Point& a, const Point& b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    std::vector<Point> hull;
    hull.reserve(points.size());
    for (const Point& p : points) {
        while (hull.size() >= 2 && turn(hull[hull.size() - 2], hull[hull.size() - 1], p) >= 0.0) {
            hull.pop_back();
        }
        hull.push_back(p);
    }
    return PiecewiseLinear(std::move(hull));
}

/// (LCM - input) at every input abscissa. Entries are >= 0 up to rounding
/// and exactly 0 at hull vertices.
inline std::vector<double> gap_values(std::span<const Point> points, const Interval& interval) {
    const PiecewiseLinear hull = lcm(points, interval);
    std::vector<double> gaps(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        gaps[i] = hull(points[i].x) - points[i].y;
    }
    return gaps;
}

/// Left derivative of a concave piecewise-linear function: the nonincreasing
/// step function whose value on (v_i, v_{i+1}] is the slope of segment i.
/// Stored cadlag with knots at the left segment endpoints, so plain
/// evaluation looks slopes up right-continuously.
inline StepFunction left_derivative(const PiecewiseLinear& pl) {
    const auto& v = pl.vertices();
    std::vector<double> knots(v.size() - 1);
    std::vector<double> slopes(v.size() - 1);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        knots[i] = v[i].x;
        slopes[i] = pl.slope(i);
    }
    return StepFunction(std::move(knots), std::move(slopes),
                        Interval(pl.domain_lo(), pl.domain_hi()));
}

/// Point set whose upper hull is the LCM of a cadlag step function. At an
/// interior knot the majorant must dominate both the left limit and the
/// value, hence the max of the adjacent piece values; the right endpoint
/// carries the last value.
inline std::vector<Point> lcm_input_points(const StepFunction& f) {
    const auto& k = f.knots();
    const auto& v = f.values();
    std::vector<Point> pts;
    pts.reserve(k.size() + 1);
    pts.push_back({k[0], v[0]});
    for (std::size_t i = 1; i < k.size(); ++i) {
        pts.push_back({k[i], std::max(v[i - 1], v[i])});
    }
    if (k.back() < f.domain().hi) {
        pts.push_back({f.domain().hi, v.back()});
    }
    return pts;
}

/// Least concave majorant of a cadlag step function over its domain.
inline PiecewiseLinear lcm_of(const StepFunction& f) {
    return lcm(lcm_input_points(f), f.domain());
}

/// Restriction of a step function to a subinterval of its domain.
inline StepFunction restrict_to(const StepFunction& f, const Interval& sub) {
    require(sub.lo >= f.domain().lo && sub.hi <= f.domain().hi, ErrorKind::invalid_input,
            "restriction interval must be contained in the domain");
    std::vector<double> knots{sub.lo};
    std::vector<double> values{f(sub.lo)};
    const auto& k = f.knots();
    const auto& v = f.values();
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] > sub.lo && k[i] <= sub.hi) {
            knots.push_back(k[i]);
            values.push_back(v[i]);
        }
    }
    return StepFunction(std::move(knots), std::move(values), sub);
}

} // namespace majorant
