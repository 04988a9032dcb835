#include "mbs/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mbs/spline_core.hpp"

namespace mbs {

namespace {

void sort_unique(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }), v.end());
}

}  // namespace

GlobalBasis::GlobalBasis(ManifoldConfig config)
    : config_(std::move(config)), blending_(config_.family, config_.domain), local_(config_.local) {
    if (local_.piecewise() && !config_.family.one_ring())
        throw std::invalid_argument("piecewise-Bezier local bases need a one-ring blending family");
    for (int i = 0; i < blending_.chart_count(); ++i) {
        const Chart& c = blending_.chart(i);
        reference_.push_back(local_.piecewise() ? std::pair{-1.0, 1.0} : std::pair{c.lo, c.hi});
    }
}

std::pair<double, double> GlobalBasis::reference_interval(int i) const { return reference_.at(i); }

double GlobalBasis::local_scale(int i) const {
    const auto [lo, hi] = reference_interval(i);
    return 2.0 / (hi - lo);
}

double GlobalBasis::local_coordinate(int i, double xi) const {
    const auto [lo, hi] = reference_interval(i);
    const double u = 2.0 * (blending_.offset(i, xi) - lo) / (hi - lo) - 1.0;
    return std::abs(u) < kKnotTolerance ? 0.0 : u;
}

std::vector<double> GlobalBasis::breakpoints() const {
    const double end = domain_end();
    std::vector<double> pts;
    for (int e = 0; e <= config_.domain.elements; ++e) pts.push_back(e);
    for (int i = 0; i < chart_count(); ++i) {
        const double c = blending_.chart(i).center;
        auto add = [&](double off) {
            double x = c + off;
            if (periodic()) {
                x = std::fmod(x, end);
                if (x < 0) x += end;
            }
            if (x >= -1e-12 && x <= end + 1e-12) pts.push_back(std::clamp(x, 0.0, end));
        };
        for (double off : blending_.breakpoints(i).points) add(off);
        const auto [lo, hi] = reference_interval(i);
        for (double u : local_.breakpoints()) add(lo + 0.5 * (u + 1.0) * (hi - lo));
    }
    sort_unique(pts);
    return pts;
}

void GlobalBasis::eval(double xi, int d, Side side, std::vector<BasisValue>& out) const {
    if (d < 0) throw std::invalid_argument("global basis: negative derivative order");
    xi = blending_.normalize(xi);
    side = blending_.normalize_side(xi, side);

    const int L = local_size();
    std::vector<double> w(d + 1);
    std::vector<std::vector<double>> p(d + 1, std::vector<double>(L));
    for (int i : blending_.active_charts(xi, side)) {
        blending_.eval_derivatives(i, xi, side, w);
        const double u = local_coordinate(i, xi);
        double chain = 1.0;
        for (int m = 0; m <= d; ++m) {
            local_.eval_all(u, m, side, p[m]);
            for (double& v : p[m]) v *= chain;
            chain *= local_scale(i);
        }
        for (int j = 0; j < L; ++j) {
            double v = 0.0;
            for (int m = 0; m <= d; ++m) v += binomial(d, m) * w[d - m] * p[m][j];
            out.push_back({i * L + j, v});
        }
    }
}

ChartDofMap design_projector(const GlobalBasis& basis, int chart) {
    const Chart& c = basis.blending().chart(chart);
    const Domain& dom = basis.config().domain;
    const int L = basis.local_size();

    std::vector<double> offsets;
    ChartDofMap map;
    for (int k = static_cast<int>(std::ceil(c.lo - 1e-12)); k <= static_cast<int>(std::floor(c.hi + 1e-12)); ++k) {
        int v = static_cast<int>(std::lround(c.center)) + k;
        if (dom.closed()) v = ((v % dom.elements) + dom.elements) % dom.elements;
        if (v < 0 || v >= dom.vertex_count()) continue;
        offsets.push_back(k);
        map.gather.push_back(v);
    }
    const int m = static_cast<int>(offsets.size());
    if (m < L)
        throw RankError("design projector: chart " + std::to_string(chart) + " has " + std::to_string(m) +
                        " vertices but the local basis has " + std::to_string(L) +
                        " functions; lower the local degree q_p");

    const auto [lo, hi] = basis.reference_interval(chart);
    Eigen::MatrixXd V(m, L);
    std::vector<double> row(L);
    for (int r = 0; r < m; ++r) {
        const double u = 2.0 * (offsets[r] - lo) / (hi - lo) - 1.0;
        basis.local().eval_all(u, 0, offsets[r] >= hi ? Side::Left : Side::Right, row);
        for (int j = 0; j < L; ++j) V(r, j) = row[j];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
    if (qr.rank() < L)
        throw RankError("design projector: local basis is not determined by the chart vertices of chart " +
                        std::to_string(chart) + "; lower the local degree q_p");
    map.matrix = qr.solve(Eigen::MatrixXd::Identity(m, m));
    return map;
}

ManifoldSpace::ManifoldSpace(std::shared_ptr<const GlobalBasis> basis, std::vector<ChartDofMap> maps, int dofs)
    : basis_(std::move(basis)), maps_(std::move(maps)), dofs_(dofs) {}

ManifoldSpace ManifoldSpace::design(ManifoldConfig config) {
    auto basis = std::make_shared<const GlobalBasis>(std::move(config));
    std::vector<ChartDofMap> maps;
    for (int i = 0; i < basis->chart_count(); ++i) maps.push_back(design_projector(*basis, i));
    const int dofs = basis->config().domain.vertex_count();
    return ManifoldSpace(std::move(basis), std::move(maps), dofs);
}

ManifoldSpace ManifoldSpace::matched(ManifoldConfig config) {
    if (config.local.kind != LocalBasisSpec::Kind::PiecewiseBezier)
        throw std::invalid_argument("matched space: local basis must be piecewise Bezier");
    if (!config.family.one_ring()) throw std::invalid_argument("matched space: blending family must be one-ring");

    auto basis = std::make_shared<const GlobalBasis>(std::move(config));
    const Domain& dom = basis->config().domain;
    const int q = basis->local().degree();
    const int n_el = dom.elements;

    int dofs = 0;
    std::function<std::vector<BasisValue>(double, Side)> reference;
    std::optional<SplineSpace> open;
    if (dom.closed()) {
        dofs = n_el;
        reference = [q, n_el](double x, Side s) { return periodic_basis_eval(q, n_el, x, 0, s); };
        if (n_el < q + 2) throw std::invalid_argument("matched space: polygon has too few vertices for the degree");
    } else {
        open.emplace(q, q - 1, 0.0, static_cast<double>(n_el), n_el - 1);
        dofs = open->dimension();
        reference = [&open](double x, Side s) { return open->eval(x, 0, s); };
    }

    const auto pts = chebyshev_lobatto(q + 1);
    std::vector<ChartDofMap> maps;
    for (int i = 0; i < basis->chart_count(); ++i) {
        const Chart& c = basis->blending().chart(i);
        std::vector<std::map<int, double>> samples[2];
        std::set<int> active;
        bool present[2] = {false, false};
        for (int half = 0; half < 2; ++half) {
            const double first = half == 0 ? -1.0 : 0.0;
            if (first < c.lo - 1e-12 || first + 1.0 > c.hi + 1e-12) continue;
            present[half] = true;
            for (int r = 0; r <= q; ++r) {
                const double x = c.center + first + pts[r];
                std::map<int, double> vals;
                for (const auto& [k, v] : reference(x, r == q ? Side::Left : Side::Right)) {
                    vals[k] += v;
                    active.insert(k);
                }
                samples[half].push_back(std::move(vals));
            }
        }
        ChartDofMap map;
        map.gather.assign(active.begin(), active.end());
        map.matrix = Eigen::MatrixXd::Zero(2 * (q + 1), static_cast<Eigen::Index>(map.gather.size()));
        for (int half = 0; half < 2; ++half) {
            if (!present[half]) continue;
            Eigen::MatrixXd values = Eigen::MatrixXd::Zero(q + 1, static_cast<Eigen::Index>(map.gather.size()));
            for (int r = 0; r <= q; ++r)
                for (std::size_t col = 0; col < map.gather.size(); ++col) {
                    const auto it = samples[half][r].find(map.gather[col]);
                    if (it != samples[half][r].end()) values(r, static_cast<Eigen::Index>(col)) = it->second;
                }
            map.matrix.block(half * (q + 1), 0, q + 1, values.cols()) = bernstein_collocation_solve(q, pts, values);
        }
        maps.push_back(std::move(map));
    }
    return ManifoldSpace(std::move(basis), std::move(maps), dofs);
}

void ManifoldSpace::eval(double xi, int d, Side side, std::vector<BasisValue>& out) const {
    std::vector<BasisValue> raw;
    basis_->eval(xi, d, side, raw);
    const int L = basis_->local_size();
    std::map<int, double> acc;
    for (std::size_t start = 0; start < raw.size(); start += L) {
        const int chart = raw[start].index / L;
        const ChartDofMap& map = maps_[chart];
        for (std::size_t col = 0; col < map.gather.size(); ++col) {
            double v = 0.0;
            for (int j = 0; j < L; ++j) v += raw[start + j].value * map.matrix(j, static_cast<Eigen::Index>(col));
            acc[map.gather[col]] += v;
        }
    }
    for (const auto& [k, v] : acc) out.push_back({k, v});
}

Eigen::VectorXd ManifoldSpace::shape_functions(double eta, int element, int d) const {
    const int n_el = basis_->config().domain.elements;
    if (element < 0 || element >= n_el) throw std::out_of_range("shape functions: element index out of range");
    if (eta < 0.0 || eta > 1.0) throw std::domain_error("shape functions: eta outside [0, 1]");
    const Side side = eta >= 1.0 ? Side::Left : Side::Right;
    Eigen::VectorXd N = Eigen::VectorXd::Zero(dofs_);
    for (const auto& [k, v] : eval(element + eta, d, side)) N(k) += v;
    return N;
}

ControlPolygon parse_polygon(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("polygon: malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("closed") || !doc.contains("vertices"))
        throw std::invalid_argument("polygon: expected an object with \"closed\" and \"vertices\"");
    if (!doc["closed"].is_boolean()) throw std::invalid_argument("polygon: \"closed\" must be a boolean");
    if (!doc["vertices"].is_array()) throw std::invalid_argument("polygon: \"vertices\" must be an array");

    ControlPolygon poly;
    poly.closed = doc["closed"].get<bool>();
    for (const auto& v : doc["vertices"]) {
        if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
            throw std::invalid_argument("polygon: every vertex must be [x, y, z]");
        poly.vertices.emplace_back(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
    }
    return poly;
}

ControlPolygon load_polygon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("polygon: cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_polygon(text.str());
}

Eigen::Vector3d curve_eval(const ManifoldSpace& space, const ControlPolygon& polygon, double eta, int element) {
    if (!polygon.closed) throw std::invalid_argument("curve: only closed polygons are supported");
    if (static_cast<int>(polygon.vertices.size()) != space.size())
        throw std::invalid_argument("curve: polygon vertex count does not match the space");
    const Eigen::VectorXd N = space.shape_functions(eta, element);
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    for (int k = 0; k < N.size(); ++k) x += N(k) * polygon.vertices[k];
    return x;
}

}  // namespace mbs
