#pragma once

#include <span>
#include <vector>

namespace mapreel {

// Web Mercator validity band.
inline constexpr double kMaxLatitude = 85.051129;
inline constexpr double kMaxLongitude = 180.0;

// WGS84 equatorial radius, used for ground resolution and altitude.
inline constexpr double kEarthRadiusMeters = 6378137.0;
// Mean Earth radius, used for meters-to-degrees conversion of extrusions.
inline constexpr double kMeanEarthRadiusMeters = 6371008.8;

struct GeoPoint {
    double lon = 0.0;
    double lat = 0.0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// Normalized Web Mercator: the world is the unit square, x east, y south.
struct MercatorPoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const MercatorPoint&, const MercatorPoint&) = default;
};

// Throws ValidationError naming "lon" or "lat" when out of range or not finite.
void validate(const GeoPoint& p);

MercatorPoint project(const GeoPoint& p);
GeoPoint unproject(const MercatorPoint& m);

// Same as unproject, but clamps into the valid square first. Used for
// derived geometry (footprints, inflated boxes) that may leave the world.
GeoPoint unprojectClamped(const MercatorPoint& m);

struct GeoBounds {
    double west = 0.0;
    double south = 0.0;
    double east = 0.0;
    double north = 0.0;

    static GeoBounds ofPoint(const GeoPoint& p) { return {p.lon, p.lat, p.lon, p.lat}; }
    static GeoBounds ofPoints(std::span<const GeoPoint> points);

    bool isPoint() const { return west == east && south == north; }
    bool contains(const GeoPoint& p) const;
    bool contains(const GeoBounds& other) const;
    GeoPoint southWest() const { return {west, south}; }
    GeoPoint northEast() const { return {east, north}; }

    void extend(const GeoPoint& p);
    void extend(const GeoBounds& other);

    friend bool operator==(const GeoBounds&, const GeoBounds&) = default;
};

void validate(const GeoBounds& b);

// Axis-aligned box in projected space; min.y is the northern edge.
struct MercatorBounds {
    MercatorPoint min;
    MercatorPoint max;

    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    MercatorPoint center() const { return {(min.x + max.x) / 2.0, (min.y + max.y) / 2.0}; }
};

MercatorBounds project(const GeoBounds& b);

class GeoPolyline {
public:
    // Requires >= 2 valid vertices, consecutive vertices distinct after
    // projection, and no segment crossing the antimeridian.
    explicit GeoPolyline(std::vector<GeoPoint> vertices);

    const std::vector<GeoPoint>& vertices() const { return vertices_; }

    friend bool operator==(const GeoPolyline&, const GeoPolyline&) = default;

private:
    std::vector<GeoPoint> vertices_;
};

class GeoPolygon {
public:
    // Ring is implicitly closed; a repeated closing vertex is dropped.
    // Requires >= 3 distinct vertices and nonzero projected area.
    explicit GeoPolygon(std::vector<GeoPoint> ring);

    const std::vector<GeoPoint>& ring() const { return ring_; }

    friend bool operator==(const GeoPolygon&, const GeoPolygon&) = default;

private:
    std::vector<GeoPoint> ring_;
};

// Signed shoelace area in projected space (positive when the ring runs
// clockwise on the map, since y points south).
double projectedSignedArea(std::span<const GeoPoint> ring);

struct PathPosition {
    GeoPoint point;
    MercatorPoint world;
    double bearing = 0.0;  // forward azimuth, degrees in [0, 360)
};

// Point at arc-length fraction s of the projected polyline.
PathPosition pointAlongPath(const GeoPolyline& path, double s);

// Total projected length in world units.
double projectedLength(const GeoPolyline& path);

// Even-odd test in projected space; points on the boundary are inside.
bool pointInPolygon(const GeoPoint& p, const GeoPolygon& poly);

// Azimuth of the projected segment a->b, clockwise from north, in [0, 360).
double projectedAzimuth(const MercatorPoint& a, const MercatorPoint& b);

double normalizeBearing(double degrees);

double toRadians(double degrees);
double toDegrees(double radians);

}  // namespace mapreel
