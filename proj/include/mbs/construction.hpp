#pragma once

#include <memory>
#include <string>

#include "mbs/atlas.hpp"

namespace mbs {

/// Named manifold constructions:
///   hat       hat weights                     (C^0, reproduces S^{q_p+1,0})
///   smooth    degree-q_w B-spline weights     (reproduces S^{q_w+q_p,q_w-1})
///   rational  normalized cubic weights, one-ring
///   masked3   cubic B-splines at 1/3 spacing, mask (1,1,1)
///   masked4   cubic B-splines at 1/4 spacing, mask (1/2,1,1,1,1/2)
///   matched   piecewise-Bezier local bases matched to cubic B-splines
struct Construction {
    enum class Kind { Hat, Smooth, Rational, Masked3, Masked4, Matched };

    Kind kind = Kind::Hat;
    int qw = 3;
    int qp = 3;
    BoundaryMode boundary = BoundaryMode::Full;
    LocalBasisSpec::Kind local = LocalBasisSpec::Kind::Bezier;
    /// Blending family used by the matched construction.
    Kind matched_blend = Kind::Hat;

    /// Throws std::invalid_argument for an unknown name.
    static Kind parse_kind(const std::string& name);
    static std::string kind_name(Kind kind);

    std::string name() const;
    /// Throws std::invalid_argument for unsupported parameter combinations.
    void validate() const;

    BlendingFamily family() const;
    LocalBasisSpec local_spec() const;
    ManifoldConfig config(const Domain& domain) const;

    /// The space the construction fits in: the analysis basis, or the
    /// matched B-spline space for `matched`.
    std::unique_ptr<SparseBasis> make_basis(const Domain& domain) const;
};

}  // namespace mbs
