#include "mbs/local_basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mbs/spline_core.hpp"

namespace mbs {

LocalBasisSpec LocalBasisSpec::lagrange(int degree, std::vector<double> nodes) {
    return {Kind::Lagrange, degree, std::move(nodes)};
}

LocalBasisSpec LocalBasisSpec::bezier(int degree) { return {Kind::Bezier, degree, {}}; }

LocalBasisSpec LocalBasisSpec::piecewise_bezier(int degree) { return {Kind::PiecewiseBezier, degree, {}}; }

std::string LocalBasisSpec::name() const {
    const std::string q = std::to_string(degree);
    switch (kind) {
        case Kind::Lagrange: return "lagrange(q_p=" + q + ")";
        case Kind::Bezier: return "bezier(q_p=" + q + ")";
        case Kind::PiecewiseBezier: return "piecewise-bezier(q_p=" + q + ")";
    }
    return "unknown";
}

double bernstein(int n, int j, double s, int d) {
    if (j < 0 || j > n) return 0.0;
    if (d > n) return 0.0;
    if (d == 0) return binomial(n, j) * std::pow(s, j) * std::pow(1.0 - s, n - j);
    // d-th derivative: n!/(n-d)! * sum_k (-1)^(d-k) C(d,k) B_{j-k, n-d}
    double falling = 1.0;
    for (int k = 0; k < d; ++k) falling *= n - k;
    double sum = 0.0;
    for (int k = 0; k <= d; ++k) {
        const double sign = ((d - k) % 2 == 0) ? 1.0 : -1.0;
        sum += sign * binomial(d, k) * bernstein(n - d, j - k, s, 0);
    }
    return falling * sum;
}

std::vector<double> chebyshev_lobatto(int count) {
    if (count < 1) throw std::invalid_argument("chebyshev_lobatto: need at least one point");
    if (count == 1) return {0.5};
    std::vector<double> pts(count);
    for (int k = 0; k < count; ++k)
        pts[k] = 0.5 * (1.0 - std::cos(std::numbers::pi * k / (count - 1)));
    pts.front() = 0.0;
    pts.back() = 1.0;
    return pts;
}

LocalBasis::LocalBasis(LocalBasisSpec spec) : spec_(std::move(spec)) {
    const int q = spec_.degree;
    if (q < 0) throw std::invalid_argument("local basis: negative degree");
    if (spec_.kind != LocalBasisSpec::Kind::Lagrange) return;

    nodes_ = spec_.nodes;
    if (nodes_.empty()) {
        if (q == 0) nodes_ = {0.0};
        for (int k = 0; q > 0 && k <= q; ++k) nodes_.push_back(-1.0 + 2.0 * k / q);
    }
    if (static_cast<int>(nodes_.size()) != q + 1)
        throw std::invalid_argument("lagrange basis: need degree+1 nodes");

    monomial_ = Eigen::MatrixXd::Zero(q + 1, q + 1);
    for (int j = 0; j <= q; ++j) {
        Eigen::VectorXd poly = Eigen::VectorXd::Zero(q + 1);
        poly(0) = 1.0;
        double denom = 1.0;
        int deg = 0;
        for (int m = 0; m <= q; ++m) {
            if (m == j) continue;
            const double diff = nodes_[j] - nodes_[m];
            if (diff == 0.0) throw std::invalid_argument("lagrange basis: repeated node");
            denom *= diff;
            // poly *= (u - node_m)
            for (int k = deg + 1; k >= 1; --k) poly(k) = poly(k - 1) - nodes_[m] * poly(k);
            poly(0) *= -nodes_[m];
            ++deg;
        }
        monomial_.row(j) = poly.transpose() / denom;
    }
}

int LocalBasis::size() const { return piecewise() ? 2 * (spec_.degree + 1) : spec_.degree + 1; }

std::vector<double> LocalBasis::breakpoints() const {
    if (piecewise()) return {0.0};
    return {};
}

void LocalBasis::eval_all(double u, int d, Side side, std::span<double> out) const {
    const int q = spec_.degree;
    std::fill(out.begin(), out.end(), 0.0);
    switch (spec_.kind) {
        case LocalBasisSpec::Kind::Lagrange:
            for (int j = 0; j <= q; ++j) {
                double acc = 0.0;
                for (int k = q; k >= d; --k) {
                    double c = monomial_(j, k);
                    for (int m = 0; m < d; ++m) c *= k - m;
                    acc = acc * u + c;
                }
                out[j] = acc;
            }
            return;
        case LocalBasisSpec::Kind::Bezier: {
            const double s = 0.5 * (u + 1.0);
            const double chain = std::pow(0.5, d);
            for (int j = 0; j <= q; ++j) out[j] = chain * bernstein(q, j, s, d);
            return;
        }
        case LocalBasisSpec::Kind::PiecewiseBezier: {
            const bool right = u > 0.0 || (u == 0.0 && side == Side::Right);
            const double s = right ? u : u + 1.0;
            const int base = right ? q + 1 : 0;
            for (int j = 0; j <= q; ++j) out[base + j] = bernstein(q, j, s, d);
            return;
        }
    }
}

double LocalBasis::eval(int j, double u, int d, Side side) const {
    if (j < 0 || j >= size()) throw std::out_of_range("local basis: function index out of range");
    if (d < 0) throw std::invalid_argument("local basis: negative derivative order");
    std::vector<double> buf(size());
    eval_all(u, d, side, buf);
    return buf[j];
}

Eigen::MatrixXd bernstein_collocation_solve(int degree, const std::vector<double>& points,
                                            const Eigen::MatrixXd& values) {
    const int n = degree + 1;
    if (static_cast<int>(points.size()) != n || values.rows() != n)
        throw std::invalid_argument("bernstein collocation: need degree+1 points");
    Eigen::MatrixXd V(n, n);
    for (int r = 0; r < n; ++r)
        for (int j = 0; j < n; ++j) V(r, j) = bernstein(degree, j, points[r]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(V);
    if (!lu.isInvertible()) throw NumericalError("bernstein collocation: singular system");
    return lu.solve(values);
}

MatchingMatrix matching_matrix(int degree) {
    if (degree < 1) throw std::invalid_argument("matching matrix: degree must be positive");
    const int q = degree;
    const int cols = q + 2;
    const auto pts = chebyshev_lobatto(q + 1);

    MatchingMatrix out{q, Eigen::MatrixXd::Zero(2 * (q + 1), cols)};
    for (int half = 0; half < 2; ++half) {
        const double left = half == 0 ? -1.0 : 0.0;
        Eigen::MatrixXd values(q + 1, cols);
        for (int r = 0; r <= q; ++r) {
            const double xi = left + pts[r];
            // Evaluate from inside the half so endpoints take its piece.
            const Side side = r == q ? Side::Left : Side::Right;
            for (int c = 0; c < cols; ++c) {
                const double first_knot = c - q - 1;
                values(r, c) = cardinal_eval(q, xi - first_knot - 0.5 * (q + 1), 0, side);
            }
        }
        out.A.block(half * (q + 1), 0, q + 1, cols) = bernstein_collocation_solve(q, pts, values);
    }
    return out;
}

}  // namespace mbs
