#pragma once

#include <utility>
#include <vector>

#include "mbs/basis.hpp"

namespace mbs {

/// Arguments this close to an integer knot are treated as lying on it, so
/// one-sided evaluation selects the intended piece despite rounding in the
/// caller's coordinate transforms.
inline constexpr double kKnotTolerance = 1e-12;

/// Centered uniform B-spline of degree p, supported on [-(p+1)/2, (p+1)/2].
struct CardinalBSpline {
    int degree = 3;

    double half_width() const { return 0.5 * (degree + 1); }
    double operator()(double t, int d = 0, Side side = Side::Right) const;
};

/// d-th derivative of the centered cardinal B-spline of degree p at t.
///
/// Piece selection at knots follows `side`; the result is exactly zero
/// outside the closed support.
double cardinal_eval(int p, double t, int d = 0, Side side = Side::Right);

/// Open-knot spline space S^{p,r} on a uniformly partitioned interval.
class SplineSpace : public SparseBasis {
public:
    SplineSpace(int degree, int smoothness, double a, double b, int interior_breakpoints);

    int degree() const { return degree_; }
    int smoothness() const { return smoothness_; }
    int interior_breakpoints() const { return interior_; }
    int dimension() const { return static_cast<int>(knots_.size()) - degree_ - 1; }
    const std::vector<double>& knots() const { return knots_; }

    int size() const override { return dimension(); }
    double domain_begin() const override { return a_; }
    double domain_end() const override { return b_; }
    std::vector<double> breakpoints() const override;

    /// Appends the p+1 functions of the knot span containing xi.
    /// Throws std::domain_error when xi is outside [a, b].
    void eval(double xi, int d, Side side, std::vector<BasisValue>& out) const override;
    using SparseBasis::eval;

    /// Single basis function k; zero when xi is outside its support.
    double eval_one(int k, double xi, int d = 0, Side side = Side::Right) const;

    /// Support of basis function k.
    std::pair<double, double> support(int k) const;

private:
    int find_span(double xi, Side side) const;

    int degree_;
    int smoothness_;
    double a_;
    double b_;
    int interior_;
    std::vector<double> knots_;
};

/// Uniform breakpoints, interior multiplicity p - r, open end knots.
/// Throws std::invalid_argument unless -1 <= r <= p-1, n >= 0 and a < b.
SplineSpace make_space(int p, int r, std::pair<double, double> interval, int n);

/// Periodic uniform splines of degree p on [0, count): function k is the
/// centered cardinal B-spline at k (odd p) wrapped around the period.
std::vector<BasisValue> periodic_basis_eval(int p, int count, double xi, int d = 0,
                                            Side side = Side::Right);

/// xi - center reduced to [-period/2, period/2).
double wrap_offset(double xi, double center, double period);

double binomial(int n, int k);

}  // namespace mbs
