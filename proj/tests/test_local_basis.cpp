#include <doctest.h>

#include <cmath>
#include <random>

#include "mbs/local_basis.hpp"
#include "mbs/spline_core.hpp"

using namespace mbs;

namespace {

double local_sum(const LocalBasis& b, double u, int d = 0, Side side = Side::Right) {
    std::vector<double> v(b.size());
    b.eval_all(u, d, side, v);
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

// Bezier control points of the four polynomial pieces of the uniform cubic B-spline.
constexpr double kCubicPieces[4][4] = {
    {0.0, 0.0, 0.0, 1.0 / 6.0},
    {1.0 / 6.0, 1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0},
    {2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0},
    {1.0 / 6.0, 0.0, 0.0, 0.0},
};

}  // namespace

TEST_CASE("Lagrange basis is cardinal at its nodes") {
    for (int q = 0; q <= 5; ++q) {
        const LocalBasis b(LocalBasisSpec::lagrange(q));
        REQUIRE(b.size() == q + 1);
        for (int i = 0; i <= q; ++i)
            for (int j = 0; j <= q; ++j)
                CHECK(b.eval(j, b.nodes()[i]) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
    const LocalBasis custom(LocalBasisSpec::lagrange(2, {-1.0, 0.3, 1.0}));
    CHECK(custom.eval(1, 0.3) == doctest::Approx(1.0));
    CHECK(std::abs(custom.eval(0, 0.3)) < 1e-14);
}

TEST_CASE("Bezier basis values and derivatives") {
    const LocalBasis b(LocalBasisSpec::bezier(3));
    // u = 0 is s = 1/2 on [0, 1].
    const double expect[4] = {1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8};
    for (int j = 0; j < 4; ++j) CHECK(b.eval(j, 0.0) == doctest::Approx(expect[j]).epsilon(1e-15));
    CHECK(b.eval(0, -1.0) == 1.0);
    CHECK(b.eval(3, 1.0) == 1.0);

    const double h = 1e-6;
    for (double u : {-0.7, 0.0, 0.4})
        for (int j = 0; j < 4; ++j)
            for (int d = 0; d < 3; ++d) {
                const double fd = (b.eval(j, u + h, d) - b.eval(j, u - h, d)) / (2 * h);
                CHECK(b.eval(j, u, d + 1) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
            }
}

TEST_CASE("local bases form a partition of unity and span the polynomials") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int q = 0; q <= 5; ++q)
        for (const auto& spec : {LocalBasisSpec::lagrange(q), LocalBasisSpec::bezier(q)}) {
            const LocalBasis b(spec);
            for (int k = 0; k < 50; ++k) {
                const double u = dist(rng);
                CHECK(local_sum(b, u) == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(std::abs(local_sum(b, u, 1)) < 1e-10);
            }
            // Least-squares fit of each monomial u^m, m <= q, has zero residual.
            const int samples = 3 * (q + 1);
            Eigen::MatrixXd V(samples, b.size());
            Eigen::VectorXd u(samples);
            for (int i = 0; i < samples; ++i) {
                u(i) = -1.0 + 2.0 * i / (samples - 1);
                for (int j = 0; j < b.size(); ++j) V(i, j) = b.eval(j, u(i));
            }
            for (int m = 0; m <= q; ++m) {
                const Eigen::VectorXd f = u.array().pow(m);
                const Eigen::VectorXd c = V.colPivHouseholderQr().solve(f);
                CHECK((V * c - f).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
}

TEST_CASE("piecewise Bezier basis") {
    const LocalBasis b(LocalBasisSpec::piecewise_bezier(3));
    CHECK(b.size() == 8);
    CHECK(b.breakpoints() == std::vector<double>{0.0});
    // At u = 0 the right half owns the point unless the left side is requested.
    CHECK(b.eval(4, 0.0, 0, Side::Right) == 1.0);
    CHECK(b.eval(3, 0.0, 0, Side::Right) == 0.0);
    CHECK(b.eval(3, 0.0, 0, Side::Left) == 1.0);
    CHECK(b.eval(4, 0.0, 0, Side::Left) == 0.0);
    CHECK(b.eval(5, 0.5) == doctest::Approx(3.0 / 8.0));
    CHECK(b.eval(1, -0.5) == doctest::Approx(3.0 / 8.0));
    // Each half has unit length, so derivatives carry no chain factor.
    CHECK(b.eval(4, 0.0, 1, Side::Right) == doctest::Approx(-3.0));
    CHECK(b.eval(3, 0.0, 1, Side::Left) == doctest::Approx(3.0));
    const double h = 1e-6;
    for (double u : {-0.6, 0.3})
        for (int j = 0; j < 8; ++j)
            CHECK(b.eval(j, u, 1) == doctest::Approx((b.eval(j, u + h) - b.eval(j, u - h)) / (2 * h)).epsilon(1e-6).scale(1.0));
    for (double u : {-0.9, -0.2, 0.0, 0.6}) CHECK(local_sum(b, u) == doctest::Approx(1.0));
}

TEST_CASE("matching matrix matches the cubic B-spline Bezier pieces") {
    const MatchingMatrix m = matching_matrix(3);
    REQUIRE(m.A.rows() == 8);
    REQUIRE(m.A.cols() == 5);
    for (int k = 0; k < 5; ++k) {
        const int start = k - 4;  // first knot of column k
        const int left_piece = -1 - start;
        const int right_piece = -start;
        for (int r = 0; r < 4; ++r) {
            const double left = (left_piece >= 0 && left_piece < 4) ? kCubicPieces[left_piece][r] : 0.0;
            const double right = (right_piece >= 0 && right_piece < 4) ? kCubicPieces[right_piece][r] : 0.0;
            CHECK(m.A(r, k) == doctest::Approx(left).epsilon(1e-12).scale(1.0));
            CHECK(m.A(4 + r, k) == doctest::Approx(right).epsilon(1e-12).scale(1.0));
        }
    }
    // Center B-spline: left half is (1/6, 1/3, 2/3, 2/3) by hand.
    CHECK(m.A(0, 2) == doctest::Approx(1.0 / 6.0));
    CHECK(m.A(1, 2) == doctest::Approx(1.0 / 3.0));
    CHECK(m.A(2, 2) == doctest::Approx(2.0 / 3.0));
    CHECK(m.A(3, 2) == doctest::Approx(2.0 / 3.0));

    // Constants and linears are carried through.
    const Eigen::VectorXd ones = m.A * Eigen::VectorXd::Ones(5);
    CHECK((ones.array() - 1.0).abs().maxCoeff() < 1e-12);
    // B-spline coefficients of x are the Greville abscissae start + 2; Bernstein coefficients
    // of x on a half are evenly spaced from its left end to its right end.
    Eigen::VectorXd grev(5);
    for (int k = 0; k < 5; ++k) grev(k) = k - 2.0;
    const Eigen::VectorXd lin = m.A * grev;
    for (int r = 0; r < 4; ++r) {
        CHECK(lin(r) == doctest::Approx(-1.0 + r / 3.0).scale(1.0));
        CHECK(lin(4 + r) == doctest::Approx(r / 3.0).scale(1.0));
    }
}

TEST_CASE("matched local functions reproduce the B-splines pointwise") {
    for (int q : {1, 2, 3, 4}) {
        const MatchingMatrix m = matching_matrix(q);
        const LocalBasis b(LocalBasisSpec::piecewise_bezier(q));
        double worst = 0.0;
        for (int s = 0; s <= 200; ++s) {
            const double u = -1.0 + 2.0 * s / 200.0;
            std::vector<double> v(b.size());
            b.eval_all(u, 0, Side::Right, v);
            for (int k = 0; k < q + 2; ++k) {
                double val = 0.0;
                for (int r = 0; r < b.size(); ++r) val += m.A(r, k) * v[r];
                const double center = (k - q - 1) + 0.5 * (q + 1);
                worst = std::max(worst, std::abs(val - cardinal_eval(q, u - center)));
            }
        }
        CHECK_MESSAGE(worst < 1e-12, "degree " << q);
    }
}

TEST_CASE("chebyshev lobatto points and collocation") {
    const auto p = chebyshev_lobatto(4);
    REQUIRE(p.size() == 4);
    CHECK(p.front() == doctest::Approx(0.0).scale(1.0));
    CHECK(p.back() == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(0.25));
    CHECK(p[2] == doctest::Approx(0.75));
    CHECK_THROWS_AS(bernstein_collocation_solve(2, {0.0, 0.0, 1.0}, Eigen::MatrixXd::Ones(3, 1)), NumericalError);
}

TEST_CASE("local basis errors") {
    const LocalBasis b(LocalBasisSpec::bezier(2));
    CHECK_THROWS_AS(b.eval(3, 0.0), std::out_of_range);
    CHECK_THROWS_AS(b.eval(-1, 0.0), std::out_of_range);
    CHECK_THROWS_AS(LocalBasis(LocalBasisSpec::lagrange(2, {0.0, 1.0})), std::invalid_argument);
    CHECK_THROWS_AS(matching_matrix(0), std::invalid_argument);
}
