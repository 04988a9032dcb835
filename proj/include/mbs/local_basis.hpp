#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mbs/basis.hpp"

namespace mbs {

/// Per-chart polynomial basis, parameterized over the reference chart [-1, 1].
struct LocalBasisSpec {
    enum class Kind { Lagrange, Bezier, PiecewiseBezier };

    Kind kind = Kind::Bezier;
    int degree = 3;
    /// Lagrange nodes in [-1, 1]; empty means uniformly spaced.
    std::vector<double> nodes;

    static LocalBasisSpec lagrange(int degree, std::vector<double> nodes = {});
    static LocalBasisSpec bezier(int degree);
    /// Independent Bernstein bases on [-1, 0] and [0, 1].
    static LocalBasisSpec piecewise_bezier(int degree);

    std::string name() const;
};

class LocalBasis {
public:
    explicit LocalBasis(LocalBasisSpec spec);

    const LocalBasisSpec& spec() const { return spec_; }
    int degree() const { return spec_.degree; }
    int size() const;
    bool piecewise() const { return spec_.kind == LocalBasisSpec::Kind::PiecewiseBezier; }
    const std::vector<double>& nodes() const { return nodes_; }

    /// d-th derivative of function j at u.
    /// Throws std::out_of_range for an invalid j.
    double eval(int j, double u, int d = 0, Side side = Side::Right) const;
    /// All size() functions at once.
    void eval_all(double u, int d, Side side, std::span<double> out) const;

    /// Interior points where the basis changes piece.
    std::vector<double> breakpoints() const;

private:
    LocalBasisSpec spec_;
    std::vector<double> nodes_;
    /// Lagrange: monomial coefficients of each cardinal polynomial, row j.
    Eigen::MatrixXd monomial_;
};

/// d-th derivative of the Bernstein polynomial B_{j,n} at s in [0, 1].
double bernstein(int n, int j, double s, int d = 0);

/// Chebyshev-Lobatto points on [0, 1].
std::vector<double> chebyshev_lobatto(int count);

/// Maps the q+2 uniform degree-q B-splines that overlap an interior chart
/// [-1, 1] to the piecewise-Bezier coefficients on its two halves.
///
/// Rows 0..q are the left-half Bernstein coefficients, rows q+1..2q+1 the
/// right half. Column k is the B-spline whose support starts at knot k-q-1,
/// so the columns run left to right across the chart.
struct MatchingMatrix {
    int degree = 3;
    Eigen::MatrixXd A;
};

/// Built by collocation at q+1 Chebyshev-Lobatto points per half-chart.
MatchingMatrix matching_matrix(int degree = 3);

/// Solves the Bernstein collocation system on [0, 1] at `points`, one
/// right-hand-side column per function. Throws NumericalError if singular.
Eigen::MatrixXd bernstein_collocation_solve(int degree, const std::vector<double>& points,
                                            const Eigen::MatrixXd& values);

}  // namespace mbs
