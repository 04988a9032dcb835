#pragma once

#include <stdexcept>

namespace mbs {

/// Parametric domain of a univariate manifold: vertices sit at integer
/// parameters and every element is a unit interval.
struct Domain {
    enum class Kind { OpenInterval, ClosedPolygon };

    Kind kind = Kind::OpenInterval;
    int elements = 1;

    /// [0, n+1] with inner nodes 1..n.
    static Domain open_interval(int inner_nodes) {
        if (inner_nodes < 0) throw std::invalid_argument("open interval: negative inner node count");
        return {Kind::OpenInterval, inner_nodes + 1};
    }

    /// Periodic [0, n_c) with vertex i at parameter i.
    static Domain closed_polygon(int vertices) {
        if (vertices < 3) throw std::invalid_argument("closed polygon: at least 3 vertices required");
        return {Kind::ClosedPolygon, vertices};
    }

    bool closed() const { return kind == Kind::ClosedPolygon; }
    int vertex_count() const { return closed() ? elements : elements + 1; }
    int inner_nodes() const { return closed() ? elements : elements - 1; }
    double end() const { return static_cast<double>(elements); }
};

}  // namespace mbs
