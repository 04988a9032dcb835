#include "mbs/blending.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mbs {

namespace {

constexpr int kCubic = 3;

void masked_derivatives(const BlendingFamily& f, double u, Side side, std::span<double> out) {
    const double c = 0.5 * (static_cast<double>(f.mask.size()) - 1.0);
    double factor = 1.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        double sum = 0.0;
        for (std::size_t j = 0; j < f.mask.size(); ++j)
            sum += f.mask[j] * cardinal_eval(kCubic, f.scale * u + c - static_cast<double>(j), static_cast<int>(k), side);
        out[k] = factor * sum;
        factor *= f.scale;
    }
}

void rational_derivatives(double u, Side side, std::span<double> out) {
    const std::size_t n = out.size();
    std::vector<double> num(n), den(n);
    double factor = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const int d = static_cast<int>(k);
        const double center = cardinal_eval(kCubic, 2.0 * u, d, side);
        num[k] = factor * center;
        den[k] = factor * (cardinal_eval(kCubic, 2.0 * u + 2.0, d, side) + center +
                           cardinal_eval(kCubic, 2.0 * u - 2.0, d, side));
        factor *= 2.0;
    }
    // Leibniz on num = w * den.
    for (std::size_t k = 0; k < n; ++k) {
        double acc = num[k];
        for (std::size_t j = 0; j < k; ++j)
            acc -= binomial(static_cast<int>(k), static_cast<int>(j)) * out[j] * den[k - j];
        out[k] = acc / den[0];
    }
}

}  // namespace

BlendingFamily BlendingFamily::hat() { return {Kind::Hat, 1, BoundaryMode::Full, 1, {}}; }

BlendingFamily BlendingFamily::smooth(int degree, BoundaryMode mode) {
    if (degree < 3 || degree % 2 == 0)
        throw std::invalid_argument("smooth blending: degree must be odd and at least 3 (got " +
                                    std::to_string(degree) + ")");
    return {Kind::SmoothBSpline, degree, mode, 1, {}};
}

BlendingFamily BlendingFamily::rational_cubic() { return {Kind::RationalCubic, kCubic, BoundaryMode::Full, 2, {}}; }

BlendingFamily BlendingFamily::masked_cubic(int scale, std::vector<double> mask) {
    if (scale < 2) throw std::invalid_argument("masked blending: scale must be at least 2");
    if (static_cast<int>(mask.size()) != 2 * scale - 3)
        throw std::invalid_argument("masked blending: mask length must be 2*scale-3 for a one-ring support");
    BlendingFamily f{Kind::MaskedCubic, kCubic, BoundaryMode::Full, scale, std::move(mask)};

    // Shifted copies must sum to one.
    for (int k = 0; k <= 64; ++k) {
        const double t = k / 64.0;
        double sum = 0.0;
        for (int shift = -2; shift <= 2; ++shift) sum += shape_eval(f, t - shift);
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("masked blending: mask does not produce a partition of unity");
    }
    return f;
}

BlendingFamily BlendingFamily::masked3() { return masked_cubic(3, {1.0, 1.0, 1.0}); }

BlendingFamily BlendingFamily::masked4() { return masked_cubic(4, {0.5, 1.0, 1.0, 1.0, 0.5}); }

double BlendingFamily::radius() const { return kind == Kind::SmoothBSpline ? 0.5 * (degree + 1) : 1.0; }

int BlendingFamily::ring() const { return kind == Kind::SmoothBSpline ? (degree + 1) / 2 : 1; }

int BlendingFamily::piece_degree() const { return kind == Kind::Hat ? 1 : degree; }

int BlendingFamily::continuity() const { return piece_degree() - 1; }

int BlendingFamily::subdivision() const {
    switch (kind) {
        case Kind::RationalCubic: return 2;
        case Kind::MaskedCubic: return scale;
        default: return 1;
    }
}

std::string BlendingFamily::name() const {
    switch (kind) {
        case Kind::Hat: return "hat";
        case Kind::SmoothBSpline:
            return "smooth(q_w=" + std::to_string(degree) + (boundary == BoundaryMode::Full ? ",full)" : ",corrected)");
        case Kind::RationalCubic: return "rational";
        case Kind::MaskedCubic: return "masked" + std::to_string(scale);
    }
    return "unknown";
}

void shape_derivatives(const BlendingFamily& family, double u, Side side, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    if (std::abs(u) > family.radius()) return;
    switch (family.kind) {
        case BlendingFamily::Kind::Hat:
        case BlendingFamily::Kind::SmoothBSpline:
            for (std::size_t k = 0; k < out.size(); ++k)
                out[k] = cardinal_eval(family.piece_degree(), u, static_cast<int>(k), side);
            return;
        case BlendingFamily::Kind::RationalCubic: rational_derivatives(u, side, out); return;
        case BlendingFamily::Kind::MaskedCubic: masked_derivatives(family, u, side, out); return;
    }
}

double shape_eval(const BlendingFamily& family, double u, int d, Side side) {
    if (d < 0) throw std::invalid_argument("blending: negative derivative order");
    std::vector<double> buf(d + 1);
    shape_derivatives(family, u, side, buf);
    return buf[d];
}

int BreakpointSet::in_element(double first) const {
    const double tol = 1e-12;
    return static_cast<int>(std::count_if(points.begin(), points.end(), [&](double p) {
        return p > first + tol && p < first + 1.0 - tol;
    }));
}

Blending::Blending(BlendingFamily family, Domain domain) : family_(std::move(family)), domain_(domain) {
    const int n_el = domain_.elements;
    const double r = family_.radius();

    if (domain_.closed()) {
        if (family_.kind == BlendingFamily::Kind::SmoothBSpline && n_el < family_.degree + 2)
            throw std::invalid_argument("smooth blending on a closed polygon needs at least q_w+2 vertices");
        for (int i = 0; i < n_el; ++i) charts_.push_back({i, static_cast<double>(i), -r, r});
        return;
    }

    if (family_.one_ring()) {
        for (int i = 0; i <= n_el; ++i)
            charts_.push_back({i, static_cast<double>(i), std::max(-1.0, -double(i)), std::min(1.0, double(n_el - i))});
        return;
    }

    const int q = family_.degree;
    if (family_.boundary == BoundaryMode::Full) {
        open_weights_.emplace(q, q - 1, 0.0, static_cast<double>(n_el), n_el - 1);
        for (int k = 0; k < open_weights_->dimension(); ++k) {
            const auto [a, b] = open_weights_->support(k);
            const double c = 0.5 * (a + b);
            charts_.push_back({k, c, a - c, b - c});
        }
        return;
    }

    if (n_el < q + 1) throw std::invalid_argument("corrected smooth blending needs at least q_w+1 elements");
    const int ghosts = (q - 1) / 2;
    for (int i = 0; i <= n_el; ++i) {
        std::vector<int> group{i};
        if (i == 0)
            for (int g = 1; g <= ghosts; ++g) group.push_back(-g);
        if (i == n_el)
            for (int g = 1; g <= ghosts; ++g) group.push_back(n_el + g);
        std::sort(group.begin(), group.end());
        const double lo = std::max(group.front() - r, 0.0) - i;
        const double hi = std::min(group.back() + r, double(n_el)) - i;
        charts_.push_back({i, static_cast<double>(i), lo, hi});
        groups_.push_back(std::move(group));
    }
}

void Blending::check_index(int i) const {
    if (i < 0 || i >= chart_count())
        throw std::out_of_range("blending: chart index " + std::to_string(i) + " out of range");
}

const Chart& Blending::chart(int i) const {
    check_index(i);
    return charts_[i];
}

double Blending::offset(int i, double xi) const {
    const Chart& c = chart(i);
    return domain_.closed() ? wrap_offset(xi, c.center, domain_.end()) : xi - c.center;
}

double Blending::normalize(double xi) const {
    if (domain_.closed()) {
        double t = std::fmod(xi, domain_.end());
        return t < 0 ? t + domain_.end() : t;
    }
    const double tol = kKnotTolerance * std::max(1.0, std::abs(xi));
    if (xi < -tol || xi > domain_.end() + tol) throw std::domain_error("blending: point outside the domain");
    return std::clamp(xi, 0.0, domain_.end());
}

Side Blending::normalize_side(double xi, Side side) const {
    if (domain_.closed()) return side;
    const double tol = kKnotTolerance * std::max(1.0, std::abs(xi));
    if (xi >= domain_.end() - tol) return Side::Left;
    if (xi <= tol) return Side::Right;
    return side;
}

bool Blending::active(int i, double xi, Side side) const {
    const Chart& c = chart(i);
    const double off = offset(i, xi);
    const double tol = kKnotTolerance * std::max(1.0, std::abs(xi));
    if (side == Side::Right) return off >= c.lo - tol && off < c.hi - tol;
    return off > c.lo + tol && off <= c.hi + tol;
}

std::vector<int> Blending::active_charts(double xi, Side side) const {
    side = normalize_side(xi, side);
    std::vector<int> out;
    for (int i = 0; i < chart_count(); ++i)
        if (active(i, xi, side)) out.push_back(i);
    return out;
}

int Blending::overlap_count(double xi) const { return static_cast<int>(active_charts(xi).size()); }

void Blending::eval_derivatives(int i, double xi, Side side, std::span<double> out) const {
    normalize(xi);
    side = normalize_side(xi, side);
    std::fill(out.begin(), out.end(), 0.0);
    if (!active(i, xi, side)) return;

    if (open_weights_) {
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = open_weights_->eval_one(i, xi, static_cast<int>(k), side);
        return;
    }
    if (!groups_.empty()) {
        for (std::size_t k = 0; k < out.size(); ++k)
            for (int c : groups_[i]) out[k] += cardinal_eval(family_.degree, xi - c, static_cast<int>(k), side);
        return;
    }
    shape_derivatives(family_, offset(i, xi), side, out);
}

double Blending::eval(int i, double xi, int d, Side side) const {
    if (d < 0) throw std::invalid_argument("blending: negative derivative order");
    std::vector<double> buf(d + 1);
    eval_derivatives(i, xi, side, buf);
    return buf[d];
}

BreakpointSet Blending::breakpoints(int i) const {
    const Chart& c = chart(i);
    BreakpointSet set{i, {}};
    const double tol = 1e-12;
    if (open_weights_) {
        for (double t : open_weights_->knots()) {
            const double off = t - c.center;
            if (off >= c.lo - tol && off <= c.hi + tol &&
                (set.points.empty() || off > set.points.back() + tol))
                set.points.push_back(off);
        }
        return set;
    }
    const int s = family_.subdivision();
    const int reach = static_cast<int>(std::ceil(family_.radius() * s));
    for (int k = -reach; k <= reach; ++k) {
        const double off = static_cast<double>(k) / s;
        if (off >= c.lo - tol && off <= c.hi + tol) set.points.push_back(off);
    }
    return set;
}

}  // namespace mbs
