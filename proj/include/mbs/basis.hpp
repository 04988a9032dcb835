#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mbs {

/// Which one-sided limit to take at a point where a piecewise function may
/// change pieces. Right is the default convention everywhere.
enum class Side { Right, Left };

struct BasisValue {
    int index;
    double value;
};

/// Raised when a least-squares or collocation system cannot determine the
/// requested coefficients.
class RankError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A finite family of functions on a parametric interval, evaluated sparsely.
///
/// Implementations are immutable after construction; eval may be called
/// concurrently.
class SparseBasis {
public:
    virtual ~SparseBasis() = default;

    virtual int size() const = 0;
    virtual double domain_begin() const = 0;
    virtual double domain_end() const = 0;
    virtual bool periodic() const { return false; }

    /// Sorted locations where any function may change piece, including the
    /// domain ends and every element boundary.
    virtual std::vector<double> breakpoints() const = 0;

    /// Appends the d-th derivative of every function that is active at xi.
    virtual void eval(double xi, int d, Side side, std::vector<BasisValue>& out) const = 0;

    virtual int default_quadrature_points() const { return 8; }

    std::vector<BasisValue> eval(double xi, int d = 0, Side side = Side::Right) const {
        std::vector<BasisValue> out;
        eval(xi, d, side, out);
        return out;
    }
};

}  // namespace mbs
