#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mbs/basis.hpp"
#include "mbs/blending.hpp"
#include "mbs/domain.hpp"
#include "mbs/local_basis.hpp"

namespace mbs {

struct ManifoldConfig {
    Domain domain = Domain::open_interval(1);
    BlendingFamily family = BlendingFamily::hat();
    LocalBasisSpec local = LocalBasisSpec::bezier(3);
};

/// The analysis space: all products w_i * p^{(j)}, ordered chart-major then
/// by local index (global index = i * local_size + j).
///
/// Charts share the global parameter; the local basis of chart i is
/// parameterized over its reference interval mapped affinely onto [-1, 1].
class GlobalBasis : public SparseBasis {
public:
    explicit GlobalBasis(ManifoldConfig config);

    const ManifoldConfig& config() const { return config_; }
    const Blending& blending() const { return blending_; }
    const LocalBasis& local() const { return local_; }
    int local_size() const { return local_.size(); }
    int chart_count() const { return blending_.chart_count(); }

    /// Reference interval of chart i as offsets from its center.
    std::pair<double, double> reference_interval(int i) const;
    /// Chart-local reference coordinate u in [-1, 1] of a global parameter.
    double local_coordinate(int i, double xi) const;
    /// du/dxi for chart i.
    double local_scale(int i) const;

    int size() const override { return chart_count() * local_size(); }
    double domain_begin() const override { return 0.0; }
    double domain_end() const override { return config_.domain.end(); }
    bool periodic() const override { return config_.domain.closed(); }
    std::vector<double> breakpoints() const override;
    int default_quadrature_points() const override { return config_.family.rational() ? 12 : 8; }

    /// Every product whose weight is active at xi, with product-rule
    /// derivatives. Throws std::domain_error outside an open interval.
    void eval(double xi, int d, Side side, std::vector<BasisValue>& out) const override;
    using SparseBasis::eval;

private:
    ManifoldConfig config_;
    Blending blending_;
    LocalBasis local_;
    std::vector<std::pair<double, double>> reference_;
};

/// Maps a global coefficient vector to the local coefficients of one chart:
/// alpha_i = matrix * g[gather].
struct ChartDofMap {
    std::vector<int> gather;
    Eigen::MatrixXd matrix;
};

/// A subspace of the analysis space whose coefficients are global degrees of
/// freedom (control-vertex values or B-spline coefficients).
class ManifoldSpace : public SparseBasis {
public:
    /// Degrees of freedom are vertex values; each chart fits its local basis
    /// to the vertices inside its support by least squares.
    /// Throws RankError when a chart has fewer vertices than local functions.
    static ManifoldSpace design(ManifoldConfig config);

    /// Degrees of freedom are the coefficients of the maximally smooth
    /// spline of the local degree (open-knot on intervals, periodic on
    /// polygons). Requires a one-ring family and a piecewise-Bezier basis.
    static ManifoldSpace matched(ManifoldConfig config);

    const GlobalBasis& analysis() const { return *basis_; }
    const ChartDofMap& projector(int chart) const { return maps_.at(chart); }

    int size() const override { return dofs_; }
    double domain_begin() const override { return basis_->domain_begin(); }
    double domain_end() const override { return basis_->domain_end(); }
    bool periodic() const override { return basis_->periodic(); }
    std::vector<double> breakpoints() const override { return basis_->breakpoints(); }
    int default_quadrature_points() const override { return basis_->default_quadrature_points(); }

    void eval(double xi, int d, Side side, std::vector<BasisValue>& out) const override;
    using SparseBasis::eval;

    /// Dense N(eta, s): the shape functions of element s at reference
    /// coordinate eta in [0, 1]. eta = 1 takes the limit from inside s.
    Eigen::VectorXd shape_functions(double eta, int element, int d = 0) const;

private:
    ManifoldSpace(std::shared_ptr<const GlobalBasis> basis, std::vector<ChartDofMap> maps, int dofs);

    std::shared_ptr<const GlobalBasis> basis_;
    std::vector<ChartDofMap> maps_;
    int dofs_;
};

/// Design-space projector of one chart (A_i together with the gather P_i).
ChartDofMap design_projector(const GlobalBasis& basis, int chart);

struct ControlPolygon {
    bool closed = true;
    std::vector<Eigen::Vector3d> vertices;
};

/// Parses {"closed": bool, "vertices": [[x, y, z], ...]}.
/// Throws std::invalid_argument on malformed input.
ControlPolygon parse_polygon(const std::string& json_text);
ControlPolygon load_polygon(const std::string& path);

/// Point of the manifold curve at reference coordinate eta of element s.
Eigen::Vector3d curve_eval(const ManifoldSpace& space, const ControlPolygon& polygon, double eta, int element);

}  // namespace mbs
