#include "mbs/spline_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mbs {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double wrap_offset(double xi, double center, double period) {
    double off = std::fmod(xi - center, period);
    if (off < -0.5 * period) off += period;
    if (off >= 0.5 * period) off -= period;
    return off;
}

double cardinal_eval(int p, double t, int d, Side side) {
    if (p < 0 || d < 0) throw std::invalid_argument("cardinal_eval: negative degree or derivative order");
    if (d > p) return 0.0;

    // Shift to the standard knot layout 0, 1, ..., p+1.
    double x = t + 0.5 * (p + 1);
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= kKnotTolerance) x = nearest;

    const int piece = side == Side::Right ? static_cast<int>(std::floor(x))
                                          : static_cast<int>(std::ceil(x)) - 1;
    if (piece < 0 || piece > p) return 0.0;

    // v[k] holds N_m(x - k) for the current level m; N_0 is the indicator of
    // the selected piece.
    const int m_target = p - d;
    std::vector<double> v(p + 2, 0.0);
    v[piece] = 1.0;
    for (int m = 1; m <= m_target; ++m) {
        for (int k = 0; k <= p; ++k) {
            const double y = x - k;
            v[k] = (y * v[k] + (m + 1 - y) * v[k + 1]) / m;
        }
    }
    double sum = 0.0;
    for (int k = 0; k <= d; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        sum += sign * binomial(d, k) * v[k];
    }
    return sum;
}

double CardinalBSpline::operator()(double t, int d, Side side) const {
    return cardinal_eval(degree, t, d, side);
}

SplineSpace::SplineSpace(int degree, int smoothness, double a, double b, int interior_breakpoints)
    : degree_(degree), smoothness_(smoothness), a_(a), b_(b), interior_(interior_breakpoints) {
    if (degree < 0) throw std::invalid_argument("spline space: negative degree");
    if (smoothness < -1 || smoothness > degree - 1)
        throw std::invalid_argument("spline space: smoothness must satisfy -1 <= r <= p-1 (p=" +
                                    std::to_string(degree) + ", r=" + std::to_string(smoothness) + ")");
    if (interior_breakpoints < 0) throw std::invalid_argument("spline space: negative breakpoint count");
    if (!(a < b)) throw std::invalid_argument("spline space: empty interval");

    const int mult = degree - smoothness;
    knots_.assign(degree + 1, a);
    const double h = (b - a) / (interior_breakpoints + 1);
    for (int j = 1; j <= interior_breakpoints; ++j) {
        const double t = a + j * h;
        for (int m = 0; m < mult; ++m) knots_.push_back(t);
    }
    for (int m = 0; m <= degree; ++m) knots_.push_back(b);
}

std::vector<double> SplineSpace::breakpoints() const {
    std::vector<double> out;
    const double h = (b_ - a_) / (interior_ + 1);
    for (int j = 0; j <= interior_ + 1; ++j) out.push_back(j == interior_ + 1 ? b_ : a_ + j * h);
    return out;
}

int SplineSpace::find_span(double xi, Side side) const {
    const double tol = kKnotTolerance * std::max(1.0, std::abs(xi));
    if (xi < a_ - tol || xi > b_ + tol) throw std::domain_error("spline space: point outside interval");
    if (xi >= b_ - tol) side = Side::Left;
    if (xi <= a_ + tol) side = Side::Right;

    const int last = static_cast<int>(knots_.size()) - degree_ - 2;
    if (side == Side::Right) {
        for (int s = last; s >= degree_; --s)
            if (knots_[s] <= xi + tol && knots_[s] < knots_[s + 1]) return s;
        return degree_;
    }
    for (int s = degree_; s <= last; ++s)
        if (xi - tol <= knots_[s + 1] && knots_[s] < knots_[s + 1]) return s;
    return last;
}

void SplineSpace::eval(double xi, int d, Side side, std::vector<BasisValue>& out) const {
    const int p = degree_;
    const int span = find_span(xi, side);
    const auto& U = knots_;

    // Piegl & Tiller, derivatives of the nonvanishing basis functions.
    std::vector<std::vector<double>> ndu(p + 1, std::vector<double>(p + 1, 0.0));
    std::vector<double> left(p + 1), right(p + 1);
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = xi - U[span + 1 - j];
        right[j] = U[span + j] - xi;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }

    std::vector<double> ders(p + 1, 0.0);
    if (d == 0) {
        for (int j = 0; j <= p; ++j) ders[j] = ndu[j][p];
    } else if (d <= p) {
        std::vector<std::vector<double>> a(2, std::vector<double>(p + 1, 0.0));
        for (int r = 0; r <= p; ++r) {
            int s1 = 0, s2 = 1;
            a[0][0] = 1.0;
            double dk = 0.0;
            for (int k = 1; k <= d; ++k) {
                dk = 0.0;
                const int rk = r - k, pk = p - k;
                if (r >= k) {
                    a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                    dk = a[s2][0] * ndu[rk][pk];
                }
                const int j1 = rk >= -1 ? 1 : -rk;
                const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
                for (int j = j1; j <= j2; ++j) {
                    a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                    dk += a[s2][j] * ndu[rk + j][pk];
                }
                if (r <= pk) {
                    a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                    dk += a[s2][k] * ndu[r][pk];
                }
                std::swap(s1, s2);
            }
            ders[r] = dk;
        }
        double factor = 1.0;
        for (int k = p; k > p - d; --k) factor *= k;
        for (double& v : ders) v *= factor;
    }
    for (int j = 0; j <= p; ++j) out.push_back({span - p + j, ders[j]});
}

double SplineSpace::eval_one(int k, double xi, int d, Side side) const {
    const auto [lo, hi] = support(k);
    if (xi < lo || xi > hi) return 0.0;
    for (const auto& [idx, v] : eval(xi, d, side))
        if (idx == k) return v;
    return 0.0;
}

std::pair<double, double> SplineSpace::support(int k) const {
    if (k < 0 || k >= dimension()) throw std::out_of_range("spline space: basis index out of range");
    return {knots_[k], knots_[k + degree_ + 1]};
}

SplineSpace make_space(int p, int r, std::pair<double, double> interval, int n) {
    return SplineSpace(p, r, interval.first, interval.second, n);
}

std::vector<BasisValue> periodic_basis_eval(int p, int count, double xi, int d, Side side) {
    if (count < p + 2) throw std::invalid_argument("periodic splines: too few vertices for the degree");
    const double offset = (p % 2 == 0) ? 0.5 : 0.0;  // even degree: centers at half-integers
    std::vector<BasisValue> out;
    const double radius = 0.5 * (p + 1);
    for (int k = 0; k < count; ++k) {
        const double t = wrap_offset(xi, k + offset, count);
        if (std::abs(t) > radius) continue;
        const double v = cardinal_eval(p, t, d, side);
        out.push_back({k, v});
    }
    return out;
}

}  // namespace mbs
