#include "mbs/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mbs {

namespace {

std::map<int, double> dense_eval(const SparseBasis& basis, double x, int d, Side side) {
    std::map<int, double> out;
    for (const auto& [k, v] : basis.eval(x, d, side)) out[k] += v;
    return out;
}

/// Breakpoints at which one-sided limits are compared.
std::vector<double> probe_points(const SparseBasis& basis) {
    auto pts = basis.breakpoints();
    if (pts.size() < 2) return {};
    pts.pop_back();
    if (!basis.periodic()) pts.erase(pts.begin());
    return pts;
}

struct JumpSize {
    double jump = 0.0;
    double magnitude = 0.0;
};

JumpSize jump_at(const SparseBasis& basis, double x, int d) {
    const auto left = dense_eval(basis, x, d, Side::Left);
    auto right = dense_eval(basis, x, d, Side::Right);
    JumpSize js;
    for (const auto& [k, v] : left) {
        const double r = right.count(k) ? right[k] : 0.0;
        js.jump = std::max(js.jump, std::abs(v - r));
        js.magnitude = std::max({js.magnitude, std::abs(v), std::abs(r)});
    }
    for (const auto& [k, r] : right)
        if (!left.count(k)) {
            js.jump = std::max(js.jump, std::abs(r));
            js.magnitude = std::max(js.magnitude, std::abs(r));
        }
    return js;
}

}  // namespace

GaussRule gauss_legendre(int points) {
    if (points < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
    GaussRule rule{std::vector<double>(points), std::vector<double>(points)};
    const int n = points;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

std::vector<QuadratureCell> quadrature_cells(const SparseBasis& basis, int points) {
    const int n = points > 0 ? points : basis.default_quadrature_points();
    const GaussRule rule = gauss_legendre(n);
    const auto bps = basis.breakpoints();
    std::vector<QuadratureCell> cells;
    for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
        QuadratureCell cell{bps[k], bps[k + 1], {}, {}};
        const double half = 0.5 * (cell.b - cell.a);
        const double mid = 0.5 * (cell.a + cell.b);
        for (int q = 0; q < n; ++q) {
            cell.points.push_back(mid + half * rule.nodes[q]);
            cell.weights.push_back(half * rule.weights[q]);
        }
        cells.push_back(std::move(cell));
    }
    return cells;
}

std::vector<QuadratureCell> quadrature_cells(const ManifoldConfig& config, int points) {
    return quadrature_cells(GlobalBasis(config), points);
}

AffineMap AffineMap::onto(const SparseBasis& basis, double a, double b) {
    const double scale = (b - a) / (basis.domain_end() - basis.domain_begin());
    return {a - scale * basis.domain_begin(), scale};
}

L2Projector::L2Projector(const SparseBasis& basis, const FitOptions& options) : options_(options) {
    const auto cells = quadrature_cells(basis, options.quadrature_points);
    Eigen::Index rows = 0;
    for (const auto& c : cells) rows += static_cast<Eigen::Index>(c.points.size());

    weighted_ = Eigen::MatrixXd::Zero(rows, basis.size());
    sqrt_w_.resize(rows);
    std::vector<BasisValue> vals;
    Eigen::Index r = 0;
    for (const auto& c : cells)
        for (std::size_t q = 0; q < c.points.size(); ++q, ++r) {
            sqrt_w_(r) = std::sqrt(c.weights[q] * options.map.scale);
            physical_points_.push_back(options.map(c.points[q]));
            vals.clear();
            basis.eval(c.points[q], 0, Side::Right, vals);
            for (const auto& [k, v] : vals) weighted_(r, k) += sqrt_w_(r) * v;
        }
    cod_.setThreshold(options.rank_tolerance);
    cod_.compute(weighted_);
    if (cod_.rank() == 0) throw NumericalError("l2_fit: collocation system has rank zero");
}

FitReport L2Projector::fit(const Target& target) const {
    Eigen::VectorXd gw(sqrt_w_.size());
    for (Eigen::Index r = 0; r < gw.size(); ++r) gw(r) = sqrt_w_(r) * target(physical_points_[r]);
    if (!gw.allFinite()) throw NumericalError("l2_fit: target is not finite at a quadrature point");

    FitReport report;
    report.rank = rank();
    report.coefficients = cod_.solve(gw);
    if (!report.coefficients.allFinite()) throw NumericalError("l2_fit: solution is not finite");

    const Eigen::VectorXd residual = weighted_ * report.coefficients - gw;
    report.l2_error = residual.norm();
    report.residual_norm = (weighted_.transpose() * residual).norm();
    return report;
}

FitReport l2_fit(const SparseBasis& basis, const Target& target, const FitOptions& options) {
    return L2Projector(basis, options).fit(target);
}

double evaluate(const SparseBasis& basis, const Eigen::VectorXd& coefficients, double xi, int d, Side side) {
    double sum = 0.0;
    for (const auto& [k, v] : basis.eval(xi, d, side)) sum += v * coefficients(k);
    return sum;
}

double l2_distance(const SparseBasis& basis, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const FitOptions& options) {
    const Eigen::VectorXd diff = a - b;
    double sum = 0.0;
    for (const auto& c : quadrature_cells(basis, options.quadrature_points))
        for (std::size_t q = 0; q < c.points.size(); ++q) {
            const double v = evaluate(basis, diff, c.points[q]);
            sum += c.weights[q] * options.map.scale * v * v;
        }
    return std::sqrt(sum);
}

ReproductionReport reproduction_residual(const SparseBasis& basis, const SplineSpace& reference,
                                         int samples_per_element, int quadrature_points) {
    if (std::abs(basis.domain_begin() - reference.domain_begin()) > 1e-12 ||
        std::abs(basis.domain_end() - reference.domain_end()) > 1e-12)
        throw std::invalid_argument("reproduction: reference space lives on a different interval");

    ReproductionReport report;
    const auto elements = reference.breakpoints();
    FitOptions opts;
    opts.quadrature_points = quadrature_points;
    const L2Projector projector(basis, opts);
    for (int k = 0; k < reference.dimension(); ++k) {
        const FitReport fit = projector.fit([&](double x) { return reference.eval_one(k, x); });
        if (fit.l2_error > report.max_l2) {
            report.max_l2 = fit.l2_error;
            report.worst_index = k;
        }
        for (std::size_t e = 0; e + 1 < elements.size(); ++e)
            for (int s = 0; s <= samples_per_element; ++s) {
                const double x = elements[e] + (elements[e + 1] - elements[e]) * s / samples_per_element;
                const Side side = s == samples_per_element ? Side::Left : Side::Right;
                const double err = std::abs(evaluate(basis, fit.coefficients, x, 0, side) -
                                            reference.eval_one(k, x, 0, side));
                report.max_pointwise = std::max(report.max_pointwise, err);
            }
    }
    return report;
}

double smoothness_probe(const SparseBasis& basis, int max_order) {
    double worst = 0.0;
    for (double x : probe_points(basis))
        for (int d = 0; d <= max_order; ++d) worst = std::max(worst, jump_at(basis, x, d).jump);
    return worst;
}

int continuity_order(const SparseBasis& basis, int max_order, double tol) {
    const auto pts = probe_points(basis);
    for (int d = 0; d <= max_order; ++d)
        for (double x : pts)
            if (jump_at(basis, x, d).jump >= tol) return d - 1;
    return max_order;
}

int measured_breakpoints(const SparseBasis& basis, int element, int max_order, double tol) {
    constexpr int kCandidates = 120;
    int count = 0;
    for (int j = 1; j < kCandidates; ++j) {
        const double x = element + static_cast<double>(j) / kCandidates;
        for (int d = 0; d <= max_order; ++d) {
            const JumpSize js = jump_at(basis, x, d);
            if (js.jump > tol * std::max(1.0, js.magnitude)) {
                ++count;
                break;
            }
        }
    }
    return count;
}

int structural_breakpoints(const SparseBasis& basis, int element) {
    const auto pts = basis.breakpoints();
    return static_cast<int>(std::count_if(pts.begin(), pts.end(), [&](double x) {
        return x > element + 1e-12 && x < element + 1.0 - 1e-12;
    }));
}

SpanRank span_rank(const SparseBasis& basis, double tolerance, int quadrature_points) {
    const auto cells = quadrature_cells(basis, quadrature_points);
    Eigen::Index rows = 0;
    for (const auto& c : cells) rows += static_cast<Eigen::Index>(c.points.size());
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(rows, basis.size());
    Eigen::Index r = 0;
    for (const auto& c : cells)
        for (std::size_t q = 0; q < c.points.size(); ++q, ++r)
            for (const auto& [k, v] : basis.eval(c.points[q])) B(r, k) += std::sqrt(c.weights[q]) * v;

    const Eigen::BDCSVD<Eigen::MatrixXd> svd(B);
    const auto& sv = svd.singularValues();
    SpanRank out{basis.size(), 0};
    if (sv.size() == 0) return out;
    const double cutoff = tolerance * sv(0);
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > cutoff) ++out.rank;
    return out;
}

double partition_of_unity_deviation(const SparseBasis& basis, int samples) {
    const double a = basis.domain_begin();
    const double b = basis.domain_end();
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double x = a + (b - a) * k / (samples - 1);
        double sum = 0.0;
        for (const auto& [idx, v] : basis.eval(x)) sum += v;
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
}

std::optional<double> ConvergenceTable::final_rate() const {
    if (rows.empty()) return std::nullopt;
    return rows.back().rate;
}

std::string ConvergenceTable::to_csv() const {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "level,h,error,rate\n";
    for (const auto& row : rows) {
        out << row.level << ',' << row.h << ',' << row.error << ',';
        if (row.rate) out << *row.rate;
        out << '\n';
    }
    return out.str();
}

Target parse_target(const std::string& spec) {
    if (spec == "sin") return [](double x) { return std::sin(std::numbers::pi * x); };
    const std::string prefix = "poly:";
    if (spec.rfind(prefix, 0) == 0) {
        std::size_t used = 0;
        int degree = -1;
        try {
            degree = std::stoi(spec.substr(prefix.size()), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (degree < 0 || used != spec.size() - prefix.size())
            throw std::invalid_argument("target: expected poly:<non-negative degree>, got '" + spec + "'");
        return [degree](double x) { return std::pow(x, degree); };
    }
    throw std::invalid_argument("target: unknown target '" + spec + "' (expected sin or poly:<degree>)");
}

ConvergenceTable convergence_study(const std::function<std::unique_ptr<SparseBasis>(int elements)>& make,
                                   const std::vector<int>& levels, const Target& target, int quadrature_points) {
    if (levels.empty()) throw std::invalid_argument("convergence study: no levels");
    if (!std::is_sorted(levels.begin(), levels.end()) ||
        std::adjacent_find(levels.begin(), levels.end()) != levels.end())
        throw std::invalid_argument("convergence study: levels must be strictly ascending");

    std::vector<std::future<ConvergenceRow>> jobs;
    for (int level : levels) {
        jobs.push_back(std::async(std::launch::async, [&, level] {
            const int elements = 1 << (level + 2);
            const auto basis = make(elements);
            FitOptions opts;
            opts.map = AffineMap::onto(*basis, 0.0, 1.0);
            opts.quadrature_points = quadrature_points;
            const FitReport fit = l2_fit(*basis, target, opts);
            return ConvergenceRow{level, 1.0 / elements, fit.l2_error, std::nullopt};
        }));
    }
    ConvergenceTable table;
    for (auto& job : jobs) table.rows.push_back(job.get());
    for (std::size_t k = 1; k < table.rows.size(); ++k) {
        const auto& prev = table.rows[k - 1];
        auto& row = table.rows[k];
        row.rate = std::log(prev.error / row.error) / std::log(prev.h / row.h);
    }
    return table;
}

ConvergenceTable convergence_study(const Construction& construction, const std::vector<int>& levels,
                                   const Target& target, int quadrature_points) {
    construction.validate();
    return convergence_study(
        [&](int elements) { return construction.make_basis(Domain::open_interval(elements - 1)); }, levels, target,
        quadrature_points);
}

}  // namespace mbs
