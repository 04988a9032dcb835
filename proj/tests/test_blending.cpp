#include <doctest.h>

#include <random>

#include "mbs/blending.hpp"

using namespace mbs;

namespace {

std::vector<BlendingFamily> all_families() {
    return {BlendingFamily::hat(), BlendingFamily::smooth(3), BlendingFamily::rational_cubic(),
            BlendingFamily::masked3(), BlendingFamily::masked4()};
}

double weight_sum(const Blending& b, double xi) {
    double s = 0.0;
    for (int i : b.active_charts(xi)) s += b.eval(i, xi);
    return s;
}

}  // namespace

TEST_CASE("blending_eval examples") {
    const auto hat = BlendingFamily::hat();
    CHECK(shape_eval(hat, 0.0) == 1.0);
    CHECK(shape_eval(hat, 1.0) == 0.0);
    CHECK(shape_eval(hat, -1.0) == 0.0);

    // B(0) / (B(2) + B(0) + B(-2)) with B(+-2) = 0, and B(1/2) = 23/48, B(-3/2) = 1/48.
    CHECK(shape_eval(BlendingFamily::rational_cubic(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(shape_eval(BlendingFamily::rational_cubic(), 0.25) == doctest::Approx(23.0 / 24.0).epsilon(1e-14));

    const auto m3 = BlendingFamily::masked3();
    for (double u : {-1.0, 1.0})
        for (int d = 0; d <= 2; ++d) CHECK(std::abs(shape_eval(m3, u, d)) < 1e-14);

    CHECK(shape_eval(BlendingFamily::smooth(3), 0.0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("partition of unity on intervals and closed polygons") {
    std::mt19937 rng(3);
    for (const auto& fam : all_families())
        for (const Domain dom : {Domain::open_interval(8), Domain::closed_polygon(12)}) {
            const Blending b(fam, dom);
            std::uniform_real_distribution<double> dist(0.0, dom.end());
            double worst = 0.0;
            for (int k = 0; k < 1000; ++k) worst = std::max(worst, std::abs(weight_sum(b, dist(rng)) - 1.0));
            CHECK_MESSAGE(worst < 1e-12, fam.name());
            for (int k = 0; k <= 8; ++k) CHECK(std::abs(weight_sum(b, k) - 1.0) < 1e-12);
        }
    // Corrected boundary mode keeps the partition of unity.
    const Blending corrected(BlendingFamily::smooth(3, BoundaryMode::Corrected), Domain::open_interval(8));
    for (int k = 0; k <= 90; ++k) CHECK(std::abs(weight_sum(corrected, k / 10.0) - 1.0) < 1e-12);
}

TEST_CASE("support exactness and non-negativity") {
    std::mt19937 rng(5);
    for (const auto& fam : all_families()) {
        const Blending b(fam, Domain::open_interval(10));
        std::uniform_real_distribution<double> dist(0.0, 11.0);
        for (int k = 0; k < 1000; ++k) {
            const double xi = dist(rng);
            for (int i = 0; i < b.chart_count(); ++i) {
                const double w = b.eval(i, xi);
                CHECK(w >= 0.0);
                const Chart& c = b.chart(i);
                const double off = b.offset(i, xi);
                if (off < c.lo || off > c.hi) CHECK(w == 0.0);
            }
        }
    }
    const auto m3 = BlendingFamily::masked3();
    CHECK(shape_eval(m3, 1.0000001) == 0.0);
    CHECK(shape_eval(m3, -3.0) == 0.0);
}

TEST_CASE("one-ring families are C2 across their breakpoints, hat only C0") {
    for (const auto& fam : {BlendingFamily::rational_cubic(), BlendingFamily::masked3(), BlendingFamily::masked4()}) {
        const Blending b(fam, Domain::closed_polygon(6));
        const BreakpointSet set = b.breakpoints(2);
        for (double off : set.points) {
            const double xi = 2.0 + off;
            for (int d = 0; d <= 2; ++d) {
                const double jump = b.eval(2, xi, d, Side::Right) - b.eval(2, xi, d, Side::Left);
                CHECK_MESSAGE(std::abs(jump) < 1e-9, fam.name() << " order " << d << " at " << off);
            }
        }
    }
    const Blending hat(BlendingFamily::hat(), Domain::closed_polygon(6));
    CHECK(std::abs(hat.eval(2, 2.0, 0, Side::Right) - hat.eval(2, 2.0, 0, Side::Left)) < 1e-15);
    CHECK(std::abs(hat.eval(2, 2.0, 1, Side::Right) - hat.eval(2, 2.0, 1, Side::Left)) == doctest::Approx(2.0));
    CHECK(std::abs(hat.eval(2, 3.0, 1, Side::Right) - hat.eval(2, 3.0, 1, Side::Left)) == doctest::Approx(1.0));
}

TEST_CASE("rational derivatives match finite differences") {
    const auto fam = BlendingFamily::rational_cubic();
    const double h = 1e-6;
    for (double u : {-0.8, -0.3, 0.1, 0.7})
        for (int d = 0; d <= 2; ++d) {
            const double fd = (shape_eval(fam, u + h, d) - shape_eval(fam, u - h, d)) / (2 * h);
            CHECK(shape_eval(fam, u, d + 1) == doctest::Approx(fd).epsilon(1e-5));
        }
}

TEST_CASE("breakpoints") {
    const Blending m3(BlendingFamily::masked3(), Domain::closed_polygon(8));
    const BreakpointSet s3 = m3.breakpoints(4);
    CHECK(s3.interior_count() == 5);
    REQUIRE(s3.points.size() == 7);
    CHECK(s3.points[1] == doctest::Approx(-2.0 / 3.0));
    CHECK(s3.points[5] == doctest::Approx(2.0 / 3.0));
    CHECK(s3.in_element(0.0) == 2);

    const Blending m4(BlendingFamily::masked4(), Domain::closed_polygon(8));
    CHECK(m4.breakpoints(4).interior_count() == 7);
    CHECK(m4.breakpoints(4).in_element(0.0) == 3);

    const Blending rat(BlendingFamily::rational_cubic(), Domain::closed_polygon(8));
    CHECK(rat.breakpoints(1).points == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
    CHECK(rat.breakpoints(1).in_element(0.0) == 1);

    const Blending hat(BlendingFamily::hat(), Domain::open_interval(5));
    CHECK(hat.breakpoints(3).in_element(0.0) == 0);
    CHECK(hat.breakpoints(3).points == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK(hat.breakpoints(0).points == std::vector<double>{0.0, 1.0});

    const Blending smooth(BlendingFamily::smooth(3), Domain::closed_polygon(8));
    CHECK(smooth.breakpoints(3).points == std::vector<double>{-2.0, -1.0, 0.0, 1.0, 2.0});
    CHECK(smooth.breakpoints(3).in_element(0.0) == 0);

    for (const auto& fam : all_families())
        CHECK(fam.breakpoints_per_element() ==
              (fam.kind == BlendingFamily::Kind::RationalCubic  ? 1
               : fam.kind == BlendingFamily::Kind::MaskedCubic ? fam.scale - 1
                                                               : 0));
}

TEST_CASE("overlap counts") {
    CHECK(Blending(BlendingFamily::hat(), Domain::open_interval(6)).overlap_count(3.4) == 2);
    CHECK(Blending(BlendingFamily::smooth(3), Domain::open_interval(6)).overlap_count(3.4) == 4);
    CHECK(Blending(BlendingFamily::smooth(5), Domain::closed_polygon(10)).overlap_count(3.4) == 6);
    CHECK(Blending(BlendingFamily::masked3(), Domain::open_interval(6)).overlap_count(3.4) == 2);
    CHECK(Blending(BlendingFamily::rational_cubic(), Domain::closed_polygon(6)).overlap_count(0.5) == 2);
}

TEST_CASE("open-interval boundary weight equals the folded weight") {
    for (const auto& fam : {BlendingFamily::hat(), BlendingFamily::rational_cubic(), BlendingFamily::masked3(),
                            BlendingFamily::masked4()}) {
        const Blending b(fam, Domain::open_interval(5));
        for (int k = 0; k <= 50; ++k) {
            const double xi = k / 50.0;
            double others = 0.0;
            for (int i = 1; i < b.chart_count(); ++i) others += b.eval(i, xi);
            CHECK(b.eval(0, xi) == doctest::Approx(1.0 - others).epsilon(1e-15));
        }
    }
    const Blending hat(BlendingFamily::hat(), Domain::open_interval(3));
    CHECK(hat.eval(0, 0.25) == doctest::Approx(0.75));
}

TEST_CASE("smooth blending on an open interval uses the open-knot spline basis") {
    const int n = 5;
    const Blending full(BlendingFamily::smooth(3), Domain::open_interval(n));
    CHECK(full.chart_count() == n + 3 + 1);
    const Blending corrected(BlendingFamily::smooth(3, BoundaryMode::Corrected), Domain::open_interval(n));
    CHECK(corrected.chart_count() == n + 2);
    // Corrected boundary weight stays C2 inside the domain.
    for (double xi : {1.0, 2.0})
        for (int d = 0; d <= 2; ++d)
            CHECK(std::abs(corrected.eval(0, xi, d, Side::Right) - corrected.eval(0, xi, d, Side::Left)) < 1e-12);
}

TEST_CASE("invalid blending parameters") {
    CHECK_THROWS_AS(BlendingFamily::smooth(2), std::invalid_argument);
    CHECK_THROWS_AS(BlendingFamily::smooth(1), std::invalid_argument);
    CHECK_THROWS_AS(BlendingFamily::masked_cubic(3, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(BlendingFamily::masked_cubic(3, {1.0, 2.0, 1.0}), std::invalid_argument);
    CHECK_NOTHROW(BlendingFamily::masked_cubic(5, {0.25, 0.75, 1.0, 1.0, 1.0, 0.75, 0.25}));
    const Blending b(BlendingFamily::hat(), Domain::open_interval(3));
    CHECK_THROWS_AS(b.eval(7, 1.0), std::out_of_range);
    CHECK_THROWS_AS(b.eval(-1, 1.0), std::out_of_range);
    CHECK_THROWS_AS(b.eval(1, 9.0), std::domain_error);
    CHECK_THROWS_AS(Blending(BlendingFamily::smooth(3), Domain::closed_polygon(4)), std::invalid_argument);
}
