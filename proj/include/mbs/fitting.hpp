#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mbs/basis.hpp"
#include "mbs/construction.hpp"
#include "mbs/spline_core.hpp"

namespace mbs {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_legendre(int points);

struct QuadratureCell {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> points;
    std::vector<double> weights;
};

/// One cell per gap between consecutive breakpoints of the basis, each with
/// an n-point Gauss rule (0 selects the basis default: 8, or 12 for rational
/// weights).
std::vector<QuadratureCell> quadrature_cells(const SparseBasis& basis, int points = 0);
std::vector<QuadratureCell> quadrature_cells(const ManifoldConfig& config, int points = 0);

/// Physical coordinate x = origin + scale * xi of the parametric domain.
struct AffineMap {
    double origin = 0.0;
    double scale = 1.0;

    double operator()(double xi) const { return origin + scale * xi; }
    /// Maps the parametric domain of `basis` onto [a, b].
    static AffineMap onto(const SparseBasis& basis, double a, double b);
};

using Target = std::function<double(double)>;

struct FitOptions {
    AffineMap map;
    int quadrature_points = 0;
    /// Singular values below rank_tolerance * largest are treated as null.
    double rank_tolerance = 1e-10;
};

struct FitReport {
    Eigen::VectorXd coefficients;
    double l2_error = 0.0;
    int rank = 0;
    /// Norm of B^T W (B c - g), the residual of the normal system.
    double residual_norm = 0.0;
};

/// Factorizes the quadrature-weighted collocation system of a basis once so
/// many targets can be projected.
class L2Projector {
public:
    L2Projector(const SparseBasis& basis, const FitOptions& options = {});

    /// Throws NumericalError if the target or the solution is not finite.
    FitReport fit(const Target& target) const;
    int rank() const { return static_cast<int>(cod_.rank()); }

private:
    FitOptions options_;
    std::vector<double> physical_points_;
    Eigen::VectorXd sqrt_w_;
    Eigen::MatrixXd weighted_;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod_;
};

/// L2 projection of `target` (a function of the physical coordinate) onto
/// span(basis), solved by complete orthogonal decomposition of the
/// quadrature-weighted collocation system.
/// Throws NumericalError if the system or the result is not usable.
FitReport l2_fit(const SparseBasis& basis, const Target& target, const FitOptions& options = {});

double evaluate(const SparseBasis& basis, const Eigen::VectorXd& coefficients, double xi, int d = 0,
                Side side = Side::Right);

/// L2 distance between two expansions, both over the same parametric domain.
double l2_distance(const SparseBasis& basis, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const FitOptions& options = {});

struct ReproductionReport {
    /// Largest L2 fit error over the reference basis.
    double max_l2 = 0.0;
    /// Largest pointwise deviation of the fitted function from the target.
    double max_pointwise = 0.0;
    int worst_index = -1;
};

/// Fits every basis function of `reference` (same parametric domain).
ReproductionReport reproduction_residual(const SparseBasis& basis, const SplineSpace& reference,
                                         int samples_per_element = 200, int quadrature_points = 0);

/// Largest one-sided jump of any function's derivatives of order 0..max_order
/// over every interior breakpoint (and the seam of periodic bases).
double smoothness_probe(const SparseBasis& basis, int max_order);

/// Largest k <= max_order such that every jump of order <= k is below tol;
/// -1 if the functions themselves jump.
int continuity_order(const SparseBasis& basis, int max_order, double tol = 1e-8);

/// Counts points strictly inside element [e, e+1] where some function has a
/// derivative jump (orders 0..max_order) above tol relative to its size.
/// Candidates are the multiples of 1/120 inside the element.
int measured_breakpoints(const SparseBasis& basis, int element, int max_order = 8, double tol = 1e-8);

/// Breakpoints of the construction strictly inside element [e, e+1], as
/// enumerated from its knots (the quadrature cell splits).
int structural_breakpoints(const SparseBasis& basis, int element);

struct SpanRank {
    int count = 0;
    int rank = 0;
};

/// Numerical rank of the quadrature-weighted collocation matrix.
SpanRank span_rank(const SparseBasis& basis, double tolerance = 1e-10, int quadrature_points = 16);

/// Max |sum of values - 1| over `samples` uniformly spaced points.
double partition_of_unity_deviation(const SparseBasis& basis, int samples = 1000);

struct ConvergenceRow {
    int level = 0;
    double h = 0.0;
    double error = 0.0;
    std::optional<double> rate;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;

    std::optional<double> final_rate() const;
    /// level,h,error,rate with 17 significant digits; rate empty on the first row.
    std::string to_csv() const;
};

/// Named physical targets on [0, 1]: "sin" is sin(pi x), "poly:<d>" is x^d.
/// Throws std::invalid_argument for an unknown spec.
Target parse_target(const std::string& spec);

/// Fits `target` on [0, 1] for each level with h = 1 / 2^(level+2).
/// Levels are fitted concurrently; results do not depend on scheduling.
ConvergenceTable convergence_study(const std::function<std::unique_ptr<SparseBasis>(int elements)>& make,
                                   const std::vector<int>& levels, const Target& target, int quadrature_points = 0);

ConvergenceTable convergence_study(const Construction& construction, const std::vector<int>& levels,
                                   const Target& target, int quadrature_points = 0);

}  // namespace mbs
