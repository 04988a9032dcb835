#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mbs/basis.hpp"
#include "mbs/domain.hpp"
#include "mbs/spline_core.hpp"

namespace mbs {

enum class BoundaryMode { Full, Corrected };

/// Choice of partition-of-unity construction.
///
/// All families are written in chart-local coordinates u = xi - center with
/// unit element length:
///   Hat             1 - |u|
///   SmoothBSpline   B^{q_w}(u)
///   RationalCubic   B(2u) / (B(2u+2) + B(2u) + B(2u-2))
///   MaskedCubic     sum_j m_j B(s u + c - j),  c = (len(mask) - 1) / 2
/// where B is the centered cubic cardinal B-spline.
struct BlendingFamily {
    enum class Kind { Hat, SmoothBSpline, RationalCubic, MaskedCubic };

    Kind kind = Kind::Hat;
    int degree = 1;
    BoundaryMode boundary = BoundaryMode::Full;
    int scale = 1;
    std::vector<double> mask;

    static BlendingFamily hat();
    /// Odd degree >= 3; degree 1 is the hat family.
    static BlendingFamily smooth(int degree, BoundaryMode mode = BoundaryMode::Full);
    static BlendingFamily rational_cubic();
    /// Mask of length 2s-3 so the weight is supported on the one-ring chart.
    /// The partition of unity is checked numerically.
    static BlendingFamily masked_cubic(int scale, std::vector<double> mask);
    static BlendingFamily masked3();
    static BlendingFamily masked4();

    bool one_ring() const { return kind != Kind::SmoothBSpline; }
    bool rational() const { return kind == Kind::RationalCubic; }
    /// Half-width of the chart, in elements.
    double radius() const;
    /// Number of element rings in a chart.
    int ring() const;
    /// Polynomial degree of the B-spline pieces the weight is built from.
    int piece_degree() const;
    /// Continuity order of the weight at its breakpoints.
    int continuity() const;
    /// Knot subdivision factor: interior breakpoints of a chart sit at k/scale.
    int subdivision() const;
    int breakpoints_per_element() const { return subdivision() - 1; }
    std::string name() const;
};

/// w(u) and its derivatives of orders 0..d for an interior chart.
void shape_derivatives(const BlendingFamily& family, double u, Side side, std::span<double> out);
double shape_eval(const BlendingFamily& family, double u, int d = 0, Side side = Side::Right);

/// Support of a blending function; lo and hi are offsets from center and are
/// already truncated to the domain.
struct Chart {
    int index = 0;
    double center = 0.0;
    double lo = -1.0;
    double hi = 1.0;

    double width() const { return hi - lo; }
};

struct BreakpointSet {
    int chart = 0;
    /// Sorted chart-local offsets, including the support ends.
    std::vector<double> points;

    int interior_count() const { return points.size() < 2 ? 0 : static_cast<int>(points.size()) - 2; }
    /// Breakpoints strictly inside the element at chart-local [first, first+1].
    int in_element(double first) const;
};

/// Blending functions of one family laid out over a domain.
class Blending {
public:
    Blending(BlendingFamily family, Domain domain);

    const BlendingFamily& family() const { return family_; }
    const Domain& domain() const { return domain_; }

    int chart_count() const { return static_cast<int>(charts_.size()); }
    const Chart& chart(int i) const;

    /// Chart-local offset of a global parameter.
    double offset(int i, double xi) const;
    bool active(int i, double xi, Side side) const;
    std::vector<int> active_charts(double xi, Side side = Side::Right) const;
    int overlap_count(double xi) const;

    /// d-th derivative of w_i at xi.
    double eval(int i, double xi, int d = 0, Side side = Side::Right) const;
    /// Orders 0..out.size()-1 of w_i at xi.
    void eval_derivatives(int i, double xi, Side side, std::span<double> out) const;

    BreakpointSet breakpoints(int i) const;

    /// Side actually used at xi after the domain-end convention is applied.
    Side normalize_side(double xi, Side side) const;
    double normalize(double xi) const;

private:
    void check_index(int i) const;

    BlendingFamily family_;
    Domain domain_;
    std::vector<Chart> charts_;
    std::optional<SplineSpace> open_weights_;
    std::vector<std::vector<int>> groups_;
};

}  // namespace mbs
