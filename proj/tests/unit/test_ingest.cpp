#include <doctest.h>

#include <random>

#include "mapreel/error.hpp"
#include "mapreel/ingest.hpp"
#include "support/oracles.hpp"

using namespace mapreel;

TEST_CASE("GeoJSON feature collections") {
    const auto features = loadGeoJson(R"({"type": "FeatureCollection", "features": [
      {"type": "Feature", "id": 7, "properties": {"name": "Seven", "count": 3},
       "geometry": {"type": "Point", "coordinates": [1, 2]}},
      {"type": "Feature", "properties": {},
       "geometry": {"type": "LineString", "coordinates": [[0, 0], [1, 1]]}},
      {"type": "Feature", "properties": null,
       "geometry": {"type": "Polygon", "coordinates": [[[0, 0], [1, 0], [1, 1], [0, 0]], [[0.2, 0.2], [0.3, 0.2], [0.3, 0.3]]]}}
    ]})");
    REQUIRE(features.size() == 3);
    CHECK(features[0].id == "7");
    CHECK(features[0].name == "Seven");
    CHECK(std::get<double>(features[0].properties.at("count")) == 3);
    CHECK(features[1].id == "1");
    CHECK((toTarget(features[0]).kind() == TargetKind::Location));
    CHECK((toTarget(features[1]).kind() == TargetKind::Path));
    CHECK(std::get<GeoPolygon>(features[2].geometry).ring().size() == 3);
}

TEST_CASE("GeoJSON errors name the record") {
    try {
        loadGeoJson(R"({"type": "FeatureCollection", "features": [
          {"type": "Feature", "geometry": {"type": "Point", "coordinates": [0, 95]}}]})");
        FAIL("expected an error");
    } catch (const IngestError& e) {
        CHECK(e.record() == 1);
        CHECK(std::string(e.what()).find("latitude out of range at record 1") != std::string::npos);
    }
    CHECK_THROWS_AS(loadGeoJson("{"), IngestError);
    CHECK_THROWS_AS(loadGeoJson(R"({"type": "Feature", "geometry": null})"), IngestError);
}

TEST_CASE("delimited points") {
    const auto features = loadDelimited("id,lon,lat,name\n1,10.5,20.25,\"Place, Here\"\n2,-3,4,\n");
    REQUIRE(features.size() == 2);
    CHECK(features[0].name == "Place, Here");
    CHECK(std::get<GeoPoint>(features[1].geometry) == GeoPoint{-3, 4});
    DelimitedOptions o;
    o.lonColumn = "x";
    o.latColumn = "y";
    o.delimiter = ';';
    CHECK(loadDelimited("x;y\n1;2\n", o).size() == 1);
    CHECK_THROWS_AS(loadDelimited("lon,lat\n1,abc\n"), IngestError);
    CHECK_THROWS_AS(loadDelimited("a,b\n1,2\n"), IngestError);
    try {
        loadDelimited("lon,lat\n1,2\n1,99\n");
    } catch (const IngestError& e) {
        CHECK(e.record() == 2);
    }
}

TEST_CASE("layers check geometry") {
    auto pts = loadDelimited("lon,lat\n1,2\n");
    CHECK(makeLayer(LayerKind::Scatter, pts).features.size() == 1);
    CHECK_THROWS_AS(makeLayer(LayerKind::Region, pts), IngestError);
    CHECK((parseLayerKind("Hexagon3D") == LayerKind::Hexagon3D));
}

TEST_CASE("hex binning matches a nearest-center oracle") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> lon(-90, 3), lat(40, 2);
    std::vector<GeoPoint> points;
    for (int i = 0; i < 3000; ++i) points.push_back({lon(rng), lat(rng)});
    const auto layer = hexAggregate(points, 40000, 100);
    double meanLat = 0;
    for (const auto& p : points) meanLat += p.lat;
    meanLat /= points.size();
    const double size = 40000 / (2 * std::numbers::pi * kEarthRadiusMeters * std::cos(meanLat * std::numbers::pi / 180));
    CHECK(layer.cellSizeWorld == doctest::Approx(size).epsilon(1e-12));

    std::map<std::pair<int, int>, std::size_t> expected;
    for (const auto& p : points) {
        const auto m = project(p);
        const auto a = oracle::nearestHex({m.x, m.y}, size);
        ++expected[{a.q, a.r}];
    }
    REQUIRE(layer.cells.size() == expected.size());
    std::size_t total = 0;
    auto it = expected.begin();
    for (const auto& c : layer.cells) {
        CHECK(c.q == it->first.first);
        CHECK(c.r == it->first.second);
        CHECK(c.count == it->second);
        total += c.count;
        ++it;
    }
    CHECK(total == points.size());
    CHECK(layer.features.size() == layer.cells.size());
    CHECK(layer.features[0].id.rfind("hex:", 0) == 0);
    CHECK(layer.maxHeightMeters() > 0);
}

TEST_CASE("lasso selection") {
    const auto features = loadDelimited("id,lon,lat\n1,0,0\n2,5,5\n3,0.5,0.5\n");
    const GeoPolygon lasso({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
    const auto t = selectByLasso(features, lasso);
    CHECK((t.kind() == TargetKind::Multiple));
    CHECK(t.members().size() == 2);
    const GeoPolygon empty({{10, 10}, {11, 10}, {11, 11}});
    CHECK((selectByLasso(features, empty).kind() == TargetKind::Region));
}

TEST_CASE("nearest feature picking") {
    const auto features = loadDelimited("id,lon,lat\n10,0,0\n9,0,0\n3,1,0\n");
    const CameraState cam{{0, 0}, 6, 0, 0, kDefaultFov};
    const Viewport vp{800, 600};
    CHECK(pickFeature(features, {0.001, 0}, 10, cam, vp).id == "9");
    CHECK(pickFeature(features, {0.999, 0}, 10, cam, vp).id == "3");
    CHECK_THROWS_AS(pickFeature(features, {0.5, 0}, 10, cam, vp), NotFoundError);
    CHECK((selectNearest(features, {1, 0}, 10, cam, vp).kind() == TargetKind::Location));
}

TEST_CASE("extruded bounds grow by the tallest covered cell") {
    // One cell of 10 km at the equator: 10000 / 111195.08 m per degree.
    const std::vector<GeoPoint> pts{{0, 0}};
    const auto layer = hexAggregate(pts, 5000, 10000);
    const auto b = inflatedBounds(GeospatialTarget(Location{{0, 0}, {}}), layer);
    const double deg = static_cast<double>(10000.0L / (2.0L * oracle::kPi * 6371008.8L / 360.0L));
    CHECK(deg == doctest::Approx(0.0899320364).epsilon(1e-9));
    CHECK(b.north == doctest::Approx(deg).epsilon(1e-12));
    CHECK(b.south == doctest::Approx(-deg).epsilon(1e-12));
    CHECK(b.east == doctest::Approx(deg).epsilon(1e-12));
    const auto flat = makeLayer(LayerKind::Scatter, loadDelimited("lon,lat\n0,0\n"));
    CHECK(inflatedBounds(GeospatialTarget(Location{{0, 0}, {}}), flat).isPoint());
    const auto far = inflatedBounds(GeospatialTarget(Location{{40, 40}, {}}), layer);
    CHECK(far.isPoint());
}
