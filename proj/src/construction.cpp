#include "mbs/construction.hpp"

#include <stdexcept>

namespace mbs {

Construction::Kind Construction::parse_kind(const std::string& name) {
    if (name == "hat") return Kind::Hat;
    if (name == "smooth") return Kind::Smooth;
    if (name == "rational") return Kind::Rational;
    if (name == "masked3") return Kind::Masked3;
    if (name == "masked4") return Kind::Masked4;
    if (name == "matched") return Kind::Matched;
    throw std::invalid_argument("unknown construction '" + name +
                                "' (expected hat, smooth, rational, masked3, masked4 or matched)");
}

std::string Construction::kind_name(Kind kind) {
    switch (kind) {
        case Kind::Hat: return "hat";
        case Kind::Smooth: return "smooth";
        case Kind::Rational: return "rational";
        case Kind::Masked3: return "masked3";
        case Kind::Masked4: return "masked4";
        case Kind::Matched: return "matched";
    }
    return "unknown";
}

std::string Construction::name() const {
    std::string s = kind_name(kind);
    if (kind == Kind::Smooth) s += " q_w=" + std::to_string(qw);
    if (kind == Kind::Matched) s += "(" + kind_name(matched_blend) + ")";
    return s + " q_p=" + std::to_string(qp);
}

void Construction::validate() const {
    if (qp < 0) throw std::invalid_argument("q_p must be non-negative");
    if (kind == Kind::Smooth && (qw < 3 || qw % 2 == 0))
        throw std::invalid_argument("smooth construction needs an odd q_w >= 3 (use hat for q_w = 1)");
    if (kind == Kind::Matched) {
        if (qp != 3) throw std::invalid_argument("matched construction requires q_p = 3");
        if (matched_blend == Kind::Smooth || matched_blend == Kind::Matched)
            throw std::invalid_argument("matched construction needs a one-ring blending family");
    }
}

BlendingFamily Construction::family() const {
    const Kind k = kind == Kind::Matched ? matched_blend : kind;
    switch (k) {
        case Kind::Hat: return BlendingFamily::hat();
        case Kind::Smooth: return BlendingFamily::smooth(qw, boundary);
        case Kind::Rational: return BlendingFamily::rational_cubic();
        case Kind::Masked3: return BlendingFamily::masked3();
        case Kind::Masked4: return BlendingFamily::masked4();
        case Kind::Matched: break;
    }
    throw std::invalid_argument("construction has no blending family");
}

LocalBasisSpec Construction::local_spec() const {
    if (kind == Kind::Matched) return LocalBasisSpec::piecewise_bezier(qp);
    if (local == LocalBasisSpec::Kind::Lagrange) return LocalBasisSpec::lagrange(qp);
    return LocalBasisSpec::bezier(qp);
}

ManifoldConfig Construction::config(const Domain& domain) const {
    validate();
    return {domain, family(), local_spec()};
}

std::unique_ptr<SparseBasis> Construction::make_basis(const Domain& domain) const {
    if (kind == Kind::Matched) return std::make_unique<ManifoldSpace>(ManifoldSpace::matched(config(domain)));
    return std::make_unique<GlobalBasis>(config(domain));
}

}  // namespace mbs
