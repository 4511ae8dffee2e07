#include <doctest.h>

#include <random>

#include "mapreel/error.hpp"
#include "mapreel/trajectory.hpp"
#include "support/oracles.hpp"

using namespace mapreel;

TEST_CASE("flyTo follows the closed form") {
    const CameraState a{{0, 0}, 10, 0, 0, kDefaultFov};
    const CameraState b{{1, 0}, 10, 0, 0, kDefaultFov};
    const auto t = Trajectory::flyTo(a, b, 4.0);
    REQUIRE(t.usesOptimalPath());
    const auto pa = oracle::mercator(0, 0), pb = oracle::mercator(1, 0);
    const oracle::FlyTo o(pa, 10, pb, 10);
    CHECK(t.pathLength() == doctest::Approx(static_cast<double>(o.S)).epsilon(1e-9));
    for (int i = 0; i <= 100; ++i) {
        const double f = i / 100.0;
        const auto s = t.at(f * 4.0);
        const auto m = project(s.center);
        const auto c = o.center(f);
        CHECK(std::abs(m.x - static_cast<double>(c.x)) < 1e-6);
        CHECK(std::abs(m.y - static_cast<double>(c.y)) < 1e-6);
        const double zoom = static_cast<double>(std::log2(1.0L / o.width(f)));
        CHECK(s.zoom == doctest::Approx(zoom).epsilon(1e-9));
    }
    // Same zoom at both ends: the path zooms out in between.
    CHECK(t.at(2.0).zoom < 10.0);
}

TEST_CASE("flyTo endpoints and degenerate cases") {
    const CameraState a{{-20, 10}, 3, 10, 350, kDefaultFov};
    const CameraState b{{30, -5}, 7, 40, 20, kDefaultFov};
    const auto t = Trajectory::flyTo(a, b, 6.0, 1280);
    CHECK(t.at(0.0) == a);
    CHECK(t.at(6.0) == b);
    CHECK(t.at(3.0).pitch == doctest::Approx(25));
    CHECK(t.at(3.0).bearing == doctest::Approx(5));

    const CameraState c{{-20, 10}, 6, 0, 0, kDefaultFov};
    const auto zoomOnly = Trajectory::flyTo(a, c, 2.0);
    CHECK_FALSE(zoomOnly.usesOptimalPath());
    CHECK(zoomOnly.at(1.0).center == a.center);

    CHECK_THROWS_AS(Trajectory::flyTo(a, b, 0.0), ValidationError);
    CHECK_THROWS_AS(t.at(7.0), ValidationError);
    auto wide = b;
    wide.fov = 60;
    CHECK_THROWS_AS(Trajectory::linear(a, wide, 1.0), ValidationError);
}

TEST_CASE("flyTo never drops below zoom zero") {
    const CameraState a{{-170, 60}, 0.2, 0, 0, kDefaultFov};
    const CameraState b{{170, -60}, 0.1, 0, 0, kDefaultFov};
    const auto t = Trajectory::flyTo(a, b, 5.0);
    for (int i = 0; i <= 50; ++i) CHECK(t.at(i * 0.1).zoom >= 0.0);
}

TEST_CASE("linear and hold") {
    const CameraState a{{0, 0}, 2, 0, 0, kDefaultFov};
    const CameraState b{{10, 0}, 4, 0, 90, kDefaultFov};
    const auto l = Trajectory::linear(a, b, 2.0);
    CHECK(l.at(1.0).zoom == doctest::Approx(3));
    CHECK(l.at(1.0).bearing == doctest::Approx(45));
    const auto h = Trajectory::hold(a, 3.0);
    CHECK(h.at(1.7) == a);
    CHECK((parseGapFillMode("linear") == GapFillMode::Linear));
    CHECK(toString(GapFillMode::FlyTo) == "flyTo");
}

TEST_CASE("flyTo zoom dips at most once and keeps its endpoints") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int c = 0; c < 200; ++c) {
        const CameraState a{{-170 + 340 * u(rng), -70 + 140 * u(rng)}, 1 + 15 * u(rng), 0, 0, kDefaultFov};
        const CameraState b{{-170 + 340 * u(rng), -70 + 140 * u(rng)}, 1 + 15 * u(rng), 0, 0, kDefaultFov};
        const auto t = Trajectory::flyTo(a, b, 3.0);
        CHECK(t.at(0.0) == a);
        CHECK(t.at(3.0) == b);
        int turns = 0;
        double prev = a.zoom;
        int dir = 0;
        for (int i = 1; i <= 300; ++i) {
            const double z = t.at(3.0 * (i / 300.0)).zoom;
            const int d = z > prev + 1e-12 ? 1 : z < prev - 1e-12 ? -1 : 0;
            if (d != 0 && dir != 0 && d != dir) ++turns;
            if (d != 0) dir = d;
            prev = z;
        }
        // Falling then rising is one turn; anything more is a second dip.
        CHECK(turns <= 1);
    }
}
