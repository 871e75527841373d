#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sobolev/hausdorff.hpp"

using namespace sobolev;

TEST_CASE("ball-volume coefficient") {
    CHECK(alpha(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(alpha(1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(alpha(2.0) == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(alpha(3.0) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(alpha(-0.5), domain_error);
}

TEST_CASE("single point: counting value 1 at s=0, zero at s=1") {
    const PointCloud pt{{{0.3, 0.4}}, 0.0};
    for (double delta : {1.0, 0.25, 0.01}) {
        const CoveringEstimate c0 = hausdorff_upper(pt, 0.0, delta);
        CHECK(c0.boxes.size() == 1);
        CHECK(c0.value == doctest::Approx(1.0).epsilon(1e-12));
        const CoveringEstimate c1 = hausdorff_upper(pt, 1.0, delta);
        CHECK(c1.value == doctest::Approx(0.0).epsilon(1e-15));
    }
}

TEST_CASE("unit segment at s=1: estimates live in [1, 1.5] and end near 1") {
    const PointCloud seg = segment_cloud({0.0, 0.0}, {1.0, 0.0}, 4097);
    const auto history = hausdorff_history(seg, 1.0, 1.0, 8);
    for (const auto& est : history) {
        CHECK(est.value >= 1.0 - 1e-9);
        CHECK(est.value <= 1.5);
        CHECK(est.value <= est.raw_value + 1e-12);  // local optimization never increases
    }
    CHECK(history.back().value == doctest::Approx(1.0).epsilon(0.05));
    // crude dyadic cover sits at sqrt(2)
    CHECK(history[4].raw_value == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("covers actually cover the sample points") {
    const PointCloud seg = segment_cloud({0.1, -0.2}, {0.8, 0.5}, 513);
    for (double delta : {0.7, 0.2, 0.05}) {
        const CoveringEstimate est = hausdorff_upper(seg, 1.0, delta);
        for (const Point& p : seg.points) CHECK(cover_contains(est, p));
    }
}

TEST_CASE("monotone in s on a fixed cover") {
    const PointCloud seg = segment_cloud({0.0, 0.0}, {1.0, 0.0}, 2049);
    for (double delta : {0.4, 0.1}) {
        double prev = 1e300;
        for (double s : {0.5, 1.0, 1.5, 2.0}) {
            const double v = hausdorff_upper(seg, s, delta).value;
            CHECK(v <= prev * 1.0000001);
            prev = v;
        }
    }
}

TEST_CASE("value non-decreasing as delta shrinks, within greedy slack") {
    const PointCloud seg = segment_cloud({0.0, 0.0}, {0.7, 0.7}, 4097);
    const auto history = hausdorff_history(seg, 1.0, 1.0, 7);
    for (std::size_t i = 1; i < history.size(); ++i)
        CHECK(history[i].value >= 0.95 * history[i - 1].value);
}

TEST_CASE("frostman consistency") {
    const FrostmanGrid fgrid{{-1.1, -1.1}, {1.1, 1.1}, Ball{{0.0, 0.0}, 1.0}, 9, 4};
    CapacityOptions qualitative;  // 10%-level verdicts; loose solves suffice
    qualitative.tol = 1e-4;
    qualitative.max_iter = 200000;

    SUBCASE("point in the plane, p=1: estimate vanishes and capacity agrees") {
        const PointCloud pt{{{0.0, 0.0}}, 0.0};
        const FrostmanReport rep = frostman_consistency(pt, 1.0, 2, fgrid, 0.5, 5, qualitative);
        CHECK(rep.hausdorff_tends_to_zero);
        CHECK(rep.assertion_made);
        CHECK(rep.assertion_holds);
    }
    SUBCASE("disc, p=1: positive estimate, no assertion") {
        const PointCloud disc = disc_cloud({0.0, 0.0}, 0.4, 41);
        const FrostmanReport rep = frostman_consistency(disc, 1.0, 2, fgrid, 0.5, 5, qualitative);
        CHECK_FALSE(rep.hausdorff_tends_to_zero);
        CHECK_FALSE(rep.assertion_made);
    }
    SUBCASE("segment, p=1: estimate near its length, no assertion") {
        const PointCloud seg = segment_cloud({-0.4, 0.0}, {0.6, 0.0}, 2049);
        const FrostmanReport rep = frostman_consistency(seg, 1.0, 2, fgrid, 0.5, 5, qualitative);
        CHECK_FALSE(rep.hausdorff_tends_to_zero);
        CHECK(rep.hausdorff.back().value == doctest::Approx(1.0).epsilon(0.06));
        CHECK_FALSE(rep.assertion_made);
    }
    SUBCASE("requires p below the dimension") {
        const PointCloud pt{{{0.0, 0.0}}, 0.0};
        CHECK_THROWS_AS(frostman_consistency(pt, 2.0, 2, fgrid), domain_error);
    }
}
