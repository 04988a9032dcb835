#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "mbs/fitting.hpp"
#include "mbs/spline_core.hpp"

namespace mbs::cli {

namespace {

std::unique_ptr<ManifoldSpace> curve_space(const Construction& c, int vertices) {
    const ManifoldConfig cfg = c.config(Domain::closed_polygon(vertices));
    if (c.kind == Construction::Kind::Matched) return std::make_unique<ManifoldSpace>(ManifoldSpace::matched(cfg));
    return std::make_unique<ManifoldSpace>(ManifoldSpace::design(cfg));
}

/// The spline space a construction is compared against.
SplineSpace reference_space(const Construction& c, int elements) {
    const double end = elements;
    switch (c.kind) {
        case Construction::Kind::Hat: return SplineSpace(c.qp + 1, 0, 0.0, end, elements - 1);
        case Construction::Kind::Smooth: return SplineSpace(c.qw + c.qp, c.qw - 1, 0.0, end, elements - 1);
        default: return SplineSpace(3, 2, 0.0, end, elements - 1);
    }
}

}  // namespace

Construction RunConfig::to_construction() const {
    Construction c;
    try {
        c.kind = Construction::parse_kind(construction);
        c.matched_blend = Construction::parse_kind(blend);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    c.qw = qw;
    c.qp = qp;
    if (boundary == "full")
        c.boundary = BoundaryMode::Full;
    else if (boundary == "corrected")
        c.boundary = BoundaryMode::Corrected;
    else
        throw UsageError("--boundary must be full or corrected");
    if (local == "bezier")
        c.local = LocalBasisSpec::Kind::Bezier;
    else if (local == "lagrange")
        c.local = LocalBasisSpec::Kind::Lagrange;
    else
        throw UsageError("--local must be bezier or lagrange");
    if (quad_points < 0) throw UsageError("--quad-points must be non-negative");
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return c;
}

Domain RunConfig::interval() const {
    if (n < 1) throw UsageError("--n must be at least 1 (the domain needs an inner node)");
    return Domain::open_interval(n);
}

void cmd_basis(const RunConfig& config, int samples_per_element, std::optional<int> chart, std::ostream& csv) {
    if (samples_per_element < 1) throw UsageError("--samples must be positive");
    const Construction c = config.to_construction();
    const Domain domain = config.interval();
    std::unique_ptr<SparseBasis> basis;
    try {
        basis = c.make_basis(domain);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    double lo = basis->domain_begin();
    double hi = basis->domain_end();
    if (chart) {
        const Blending blending(c.family(), domain);
        if (*chart < 0 || *chart >= blending.chart_count()) throw UsageError("--chart index out of range");
        const Chart& ch = blending.chart(*chart);
        lo = ch.center + ch.lo;
        hi = ch.center + ch.hi;
    }

    csv << std::setprecision(17) << "xi,index,value\n";
    const int total = static_cast<int>(std::lround((hi - lo) * samples_per_element));
    for (int k = 0; k <= total; ++k) {
        const double xi = lo + (hi - lo) * k / total;
        for (const auto& [idx, v] : basis->eval(xi, 0, k == total ? Side::Left : Side::Right))
            csv << xi << ',' << idx << ',' << v << '\n';
    }
}

ConvergenceTable cmd_convergence(const RunConfig& config, const std::vector<int>& levels, const std::string& target,
                                 std::ostream& csv) {
    const Construction c = config.to_construction();
    if (levels.empty()) throw UsageError("--levels must not be empty");
    Target f;
    try {
        f = parse_target(target);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    ConvergenceTable table;
    try {
        table = convergence_study(c, levels, f, config.quad_points);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    csv << table.to_csv();
    return table;
}

nlohmann::json cmd_check(const RunConfig& config) {
    const Construction c = config.to_construction();
    const Domain domain = config.interval();
    std::unique_ptr<SparseBasis> basis;
    try {
        basis = c.make_basis(domain);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const SplineSpace reference = reference_space(c, domain.elements);
    const ReproductionReport repro = reproduction_residual(*basis, reference, 50, config.quad_points);
    const SpanRank rank = span_rank(*basis);

    nlohmann::json report;
    report["construction"] = c.name();
    report["partition_of_unity"] = partition_of_unity_deviation(*basis, 1000);
    report["smoothness_order"] = continuity_order(*basis, 6, 1e-8);
    report["breaking_points_per_element"] = structural_breakpoints(*basis, domain.elements / 2);
    report["detected_breaking_points_per_element"] = measured_breakpoints(*basis, domain.elements / 2);
    report["bspline_reproducing"] = repro.max_l2 < 1e-9;
    report["bspline_residual"] = repro.max_l2;
    report["bspline_pointwise_residual"] = repro.max_pointwise;
    report["reference_space"] = "S^{" + std::to_string(reference.degree()) + "," +
                                std::to_string(reference.smoothness()) + "}";
    report["span_rank"] = {{"count", rank.count}, {"rank", rank.rank}};
    return report;
}

void cmd_curve(const RunConfig& config, const ControlPolygon& polygon, int samples_per_element, std::ostream& csv) {
    if (samples_per_element < 1) throw UsageError("--samples must be positive");
    if (!polygon.closed) throw UsageError("curve: open polygons are not supported");
    const Construction c = config.to_construction();
    const int count = static_cast<int>(polygon.vertices.size());
    const int needed = 2 * c.family().ring() + 1;
    if (count < needed)
        throw UsageError("curve: polygon needs at least " + std::to_string(needed) + " vertices for this construction");

    std::unique_ptr<ManifoldSpace> space;
    try {
        space = curve_space(c, count);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    csv << std::setprecision(17) << "s,eta,x,y,z\n";
    for (int s = 0; s < count; ++s)
        for (int k = 0; k <= samples_per_element; ++k) {
            const double eta = static_cast<double>(k) / samples_per_element;
            const Eigen::Vector3d x = curve_eval(*space, polygon, eta, s);
            csv << s << ',' << eta << ',' << x.x() << ',' << x.y() << ',' << x.z() << '\n';
        }
}

std::vector<int> parse_levels(const std::string& spec) {
    std::vector<int> out;
    try {
        const auto dots = spec.find("..");
        if (dots != std::string::npos) {
            const int a = std::stoi(spec.substr(0, dots));
            const int b = std::stoi(spec.substr(dots + 2));
            for (int l = a; l <= b; ++l) out.push_back(l);
        } else {
            std::stringstream ss(spec);
            std::string item;
            while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
        }
    } catch (const std::exception&) {
        throw UsageError("--levels: expected a list like 1,2,3 or a range like 1..4");
    }
    if (out.empty()) throw UsageError("--levels must not be empty");
    for (int l : out)
        if (l < 0 || l > 20) throw UsageError("--levels: levels must lie in 0..20");
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Manifold-based spline bases: sampling, fitting and verification"};
    app.require_subcommand(1);

    RunConfig config;
    int samples = 20;
    std::string levels = "1..4";
    std::string target = "sin";
    std::optional<int> chart;
    std::string polygon_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--construction", config.construction,
                        "hat | smooth | rational | masked3 | masked4 | matched");
        sub->add_option("--qw", config.qw, "Blending degree for smooth");
        sub->add_option("--qp", config.qp, "Local polynomial degree");
        sub->add_option("--boundary", config.boundary, "full | corrected (smooth on intervals)");
        sub->add_option("--local", config.local, "bezier | lagrange");
        sub->add_option("--blend", config.blend, "Blending family of the matched construction");
        sub->add_option("--n", config.n, "Inner node count of the interval");
        sub->add_option("--quad-points", config.quad_points, "Gauss points per quadrature cell (0 = default)");
        sub->add_option("--out", config.out, "Output file (default stdout)");
    };

    auto* basis = app.add_subcommand("basis", "Sample every global basis function");
    add_common(basis);
    basis->add_option("--samples", samples, "Samples per element");
    basis->add_option("--chart", chart, "Restrict samples to one chart's support");

    auto* conv = app.add_subcommand("convergence", "L2 convergence study with h = 1/2^(level+2)");
    add_common(conv);
    conv->add_option("--levels", levels, "Levels, e.g. 1..4 or 1,2,3");
    conv->add_option("--target", target, "sin | poly:<degree>");

    auto* check = app.add_subcommand("check", "Measure partition of unity, smoothness, reproduction and rank");
    add_common(check);

    auto* curve = app.add_subcommand("curve", "Evaluate the manifold curve of a closed control polygon");
    add_common(curve);
    curve->add_option("--polygon", polygon_path, "Polygon JSON file")->required();
    curve->add_option("--samples", samples, "Samples per element");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::ofstream file;
    if (!config.out.empty()) {
        file.open(config.out);
        if (!file) {
            std::cerr << "error: cannot open " << config.out << '\n';
            return kExitUsage;
        }
    }
    std::ostream& out = config.out.empty() ? std::cout : file;

    try {
        if (basis->parsed()) {
            cmd_basis(config, samples, chart, out);
        } else if (conv->parsed()) {
            const ConvergenceTable table = cmd_convergence(config, parse_levels(levels), target, out);
            const auto rate = table.final_rate();
            std::cerr << "final observed rate: " << (rate ? std::to_string(*rate) : std::string("n/a")) << '\n';
        } else if (check->parsed()) {
            out << cmd_check(config).dump(2) << '\n';
        } else if (curve->parsed()) {
            ControlPolygon polygon;
            try {
                polygon = load_polygon(polygon_path);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            cmd_curve(config, polygon, samples, out);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace mbs::cli
