#include <doctest.h>

#include <random>

#include "mapreel/error.hpp"
#include "mapreel/geo.hpp"
#include "mapreel/target.hpp"
#include "support/oracles.hpp"

using namespace mapreel;

TEST_CASE("projection of reference points") {
    const auto origin = project(GeoPoint{0.0, 0.0});
    CHECK(origin.x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(origin.y == doctest::Approx(0.5).epsilon(1e-15));

    // 0.4720801120649163 frozen from a 50-digit evaluation of the closed form.
    const auto p = project(GeoPoint{0.0, 10.0});
    CHECK(p.x == doctest::Approx(0.5));
    CHECK(std::abs(p.y - 0.4720801120649163) < 1e-12);
    CHECK(std::abs(p.y - static_cast<double>(oracle::mercator(0.0L, 10.0L).y)) < 1e-12);

    const auto corner = project(GeoPoint{-180.0, kMaxLatitude});
    CHECK(corner.x == 0.0);
    CHECK(std::abs(corner.y) < 1e-8);
}

TEST_CASE("projection rejects out of range coordinates") {
    CHECK_THROWS_AS(project(GeoPoint{181.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(project(GeoPoint{0.0, 86.0}), ValidationError);
    CHECK_THROWS_AS(project(GeoPoint{std::nan(""), 0.0}), ValidationError);
    try {
        project(GeoPoint{0.0, -90.0});
        FAIL("expected an error");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "lat");
    }
    CHECK_THROWS_AS(unproject(MercatorPoint{1.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(unproject(MercatorPoint{0.5, -0.1}), ValidationError);
}

TEST_CASE("projection round trip matches the oracle") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lon(-180.0, 180.0), lat(-kMaxLatitude, kMaxLatitude);
    for (int i = 0; i < 2000; ++i) {
        const GeoPoint g{lon(rng), lat(rng)};
        const auto m = project(g);
        const auto o = oracle::mercator(g.lon, g.lat);
        CHECK(std::abs(m.x - static_cast<double>(o.x)) < 1e-13);
        CHECK(std::abs(m.y - static_cast<double>(o.y)) < 1e-13);
        const auto back = unproject(m);
        CHECK(std::abs(back.lon - g.lon) < 1e-9);
        CHECK(std::abs(back.lat - g.lat) < 1e-9);
    }
}

TEST_CASE("bounds") {
    const std::vector<GeoPoint> pts{{1, 2}, {-3, 5}, {4, -1}};
    const auto b = GeoBounds::ofPoints(pts);
    CHECK(b == GeoBounds{-3, -1, 4, 5});
    CHECK(b.contains(GeoPoint{0, 0}));
    CHECK_FALSE(b.contains(GeoPoint{5, 0}));
    CHECK(GeoBounds::ofPoint({2, 3}).isPoint());
    CHECK_THROWS_AS(GeoBounds::ofPoints(std::vector<GeoPoint>{}), NoGeometryError);

    auto grown = GeoBounds::ofPoint({0, 0});
    grown.extend(GeoPoint{2, -1});
    CHECK(grown == GeoBounds{0, -1, 2, 0});

    const auto mb = project(GeoBounds{-10, -10, 10, 10});
    CHECK(mb.min.y < mb.max.y);
    CHECK(mb.width() == doctest::Approx(20.0 / 360.0));
}

TEST_CASE("polyline and polygon invariants") {
    CHECK_THROWS_AS(GeoPolyline({{0, 0}}), ValidationError);
    CHECK_THROWS_AS(GeoPolyline({{0, 0}, {0, 0}}), ValidationError);
    CHECK_THROWS_AS(GeoPolyline({{170, 0}, {-170, 0}}), ValidationError);
    CHECK_THROWS_AS(GeoPolygon({{0, 0}, {1, 1}}), ValidationError);
    CHECK_THROWS_AS(GeoPolygon({{0, 0}, {1, 0}, {2, 0}}), ValidationError);

    const GeoPolygon closed({{0, 0}, {1, 0}, {1, 1}, {0, 0}});
    CHECK(closed.ring().size() == 3);
}

TEST_CASE("point along a path uses projected arc length") {
    const GeoPolyline path({{0, 0}, {0, 1}, {1, 1}});
    // Segment lengths 0.0027779188 and 0.0027777778 world units (independent
    // cumulative-length script): the midpoint sits at the interior vertex.
    const auto a = oracle::mercator(0, 0), b = oracle::mercator(0, 1), c = oracle::mercator(1, 1);
    const double l1 = static_cast<double>(std::hypot(b.x - a.x, b.y - a.y));
    const double l2 = static_cast<double>(std::hypot(c.x - b.x, c.y - b.y));
    CHECK(l1 == doctest::Approx(0.0027779188).epsilon(1e-8));
    CHECK(l2 == doctest::Approx(0.0027777778).epsilon(1e-8));
    CHECK(projectedLength(path) == doctest::Approx(l1 + l2).epsilon(1e-12));

    const auto mid = pointAlongPath(path, 0.5);
    CHECK(std::abs(mid.point.lon - 0.0) < 1e-3);
    CHECK(std::abs(mid.point.lat - 1.0) < 1e-3);

    const auto start = pointAlongPath(path, 0.0);
    CHECK(start.point == GeoPoint{0, 0});
    CHECK(start.bearing == doctest::Approx(0.0));
    const auto end = pointAlongPath(path, 1.0);
    CHECK(end.point == GeoPoint{1, 1});
    CHECK(end.bearing == doctest::Approx(90.0));
    CHECK_THROWS_AS(pointAlongPath(path, 1.5), ValidationError);
}

TEST_CASE("point in polygon counts the boundary as inside") {
    const GeoPolygon square({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    CHECK(pointInPolygon({1, 1}, square));
    CHECK(pointInPolygon({0, 1}, square));
    CHECK(pointInPolygon({2, 2}, square));
    CHECK_FALSE(pointInPolygon({3, 1}, square));
    const GeoPolygon ell({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    CHECK_FALSE(pointInPolygon({1.5, 1.5}, ell));
    CHECK(pointInPolygon({0.5, 1.5}, ell));
}

TEST_CASE("bearings") {
    CHECK(normalizeBearing(-90) == 270);
    CHECK(normalizeBearing(720) == 0);
    CHECK(normalizeBearing(359.5) == 359.5);
    CHECK(projectedAzimuth({0.5, 0.5}, {0.5, 0.4}) == doctest::Approx(0.0));
    CHECK(projectedAzimuth({0.5, 0.5}, {0.6, 0.5}) == doctest::Approx(90.0));
    CHECK(projectedAzimuth({0.5, 0.5}, {0.5, 0.6}) == doctest::Approx(180.0));
    CHECK(projectedAzimuth({0.5, 0.5}, {0.4, 0.5}) == doctest::Approx(270.0));
}
