#include "mapreel/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mapreel/error.hpp"

namespace mapreel {

namespace {

constexpr double kPi = std::numbers::pi;

// Slack for projected coordinates of points sitting on the latitude clamp;
// y(85.051129°) is about -7e-9.
constexpr double kWorldSlack = 1e-8;

// Boundary tolerance for point-in-polygon, in world units.
constexpr double kEdgeTolerance = 1e-15;

std::string formatValue(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void rejectAntimeridianCrossing(std::span<const GeoPoint> points, bool closed) {
    const auto n = points.size();
    const auto segments = closed ? n : n - 1;
    for (std::size_t i = 0; i < segments; ++i) {
        const auto& a = points[i];
        const auto& b = points[(i + 1) % n];
        if (std::abs(b.lon - a.lon) > 180.0) {
            throw ValidationError("geometry crosses the antimeridian between vertices " + std::to_string(i) +
                                      " and " + std::to_string((i + 1) % n) + "; not supported",
                                  "lon");
        }
    }
}

bool onSegment(const MercatorPoint& p, const MercatorPoint& a, const MercatorPoint& b) {
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (std::abs(cross) > kEdgeTolerance * std::max(1.0, len)) return false;
    const double dot = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
    return dot >= -kEdgeTolerance && dot <= len * len + kEdgeTolerance;
}

}  // namespace

double toRadians(double degrees) { return degrees * kPi / 180.0; }
double toDegrees(double radians) { return radians * 180.0 / kPi; }

double normalizeBearing(double degrees) {
    double b = std::fmod(degrees, 360.0);
    if (b < 0.0) b += 360.0;
    // fmod of a tiny negative value can round up to exactly 360.
    if (b >= 360.0) b = 0.0;
    return b == 0.0 ? 0.0 : b;
}

void validate(const GeoPoint& p) {
    if (!std::isfinite(p.lon) || p.lon < -kMaxLongitude || p.lon > kMaxLongitude) {
        throw ValidationError("longitude out of range: " + formatValue(p.lon), "lon");
    }
    if (!std::isfinite(p.lat) || p.lat < -kMaxLatitude || p.lat > kMaxLatitude) {
        throw ValidationError("latitude out of range: " + formatValue(p.lat), "lat");
    }
}

MercatorPoint project(const GeoPoint& p) {
    validate(p);
    const double phi = toRadians(p.lat);
    return {(p.lon + 180.0) / 360.0, (1.0 - std::log(std::tan(kPi / 4.0 + phi / 2.0)) / kPi) / 2.0};
}

GeoPoint unproject(const MercatorPoint& m) {
    if (!std::isfinite(m.x) || m.x < -kWorldSlack || m.x > 1.0 + kWorldSlack) {
        throw ValidationError("mercator x out of range: " + formatValue(m.x), "x");
    }
    if (!std::isfinite(m.y) || m.y < -kWorldSlack || m.y > 1.0 + kWorldSlack) {
        throw ValidationError("mercator y out of range: " + formatValue(m.y), "y");
    }
    const double lon = m.x * 360.0 - 180.0;
    const double lat = toDegrees(2.0 * std::atan(std::exp(kPi * (1.0 - 2.0 * m.y))) - kPi / 2.0);
    return {std::clamp(lon, -kMaxLongitude, kMaxLongitude), std::clamp(lat, -kMaxLatitude, kMaxLatitude)};
}

GeoPoint unprojectClamped(const MercatorPoint& m) {
    return unproject({std::clamp(m.x, 0.0, 1.0), std::clamp(m.y, 0.0, 1.0)});
}

GeoBounds GeoBounds::ofPoints(std::span<const GeoPoint> points) {
    if (points.empty()) throw NoGeometryError("no geometry: empty point set");
    GeoBounds b = ofPoint(points.front());
    for (const auto& p : points.subspan(1)) b.extend(p);
    return b;
}

bool GeoBounds::contains(const GeoPoint& p) const {
    return p.lon >= west && p.lon <= east && p.lat >= south && p.lat <= north;
}

bool GeoBounds::contains(const GeoBounds& other) const {
    return other.west >= west && other.east <= east && other.south >= south && other.north <= north;
}

void GeoBounds::extend(const GeoPoint& p) {
    west = std::min(west, p.lon);
    east = std::max(east, p.lon);
    south = std::min(south, p.lat);
    north = std::max(north, p.lat);
}

void GeoBounds::extend(const GeoBounds& other) {
    extend(other.southWest());
    extend(other.northEast());
}

void validate(const GeoBounds& b) {
    validate(b.southWest());
    validate(b.northEast());
    if (b.west > b.east) throw ValidationError("bounds west exceeds east", "west");
    if (b.south > b.north) throw ValidationError("bounds south exceeds north", "south");
}

MercatorBounds project(const GeoBounds& b) {
    validate(b);
    const auto nw = project(GeoPoint{b.west, b.north});
    const auto se = project(GeoPoint{b.east, b.south});
    return {nw, se};
}

GeoPolyline::GeoPolyline(std::vector<GeoPoint> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 2) throw ValidationError("polyline needs at least 2 vertices", "vertices");
    MercatorPoint prev = project(vertices_.front());
    for (std::size_t i = 1; i < vertices_.size(); ++i) {
        const auto cur = project(vertices_[i]);
        if (cur == prev) {
            throw ValidationError("polyline has repeated vertex at index " + std::to_string(i), "vertices");
        }
        prev = cur;
    }
    rejectAntimeridianCrossing(vertices_, false);
}

double projectedSignedArea(std::span<const GeoPoint> ring) {
    double twice = 0.0;
    const auto n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto a = project(ring[i]);
        const auto b = project(ring[(i + 1) % n]);
        twice += a.x * b.y - b.x * a.y;
    }
    return twice / 2.0;
}

GeoPolygon::GeoPolygon(std::vector<GeoPoint> ring) : ring_(std::move(ring)) {
    if (ring_.size() > 1 && ring_.front() == ring_.back()) ring_.pop_back();
    if (ring_.size() < 3) throw ValidationError("polygon ring needs at least 3 vertices", "ring");
    for (const auto& p : ring_) validate(p);
    rejectAntimeridianCrossing(ring_, true);
    if (projectedSignedArea(ring_) == 0.0) throw ValidationError("degenerate polygon: zero area", "ring");
}

double projectedAzimuth(const MercatorPoint& a, const MercatorPoint& b) {
    return normalizeBearing(toDegrees(std::atan2(b.x - a.x, -(b.y - a.y))));
}

double projectedLength(const GeoPolyline& path) {
    double total = 0.0;
    const auto& v = path.vertices();
    for (std::size_t i = 1; i < v.size(); ++i) {
        const auto a = project(v[i - 1]);
        const auto b = project(v[i]);
        total += std::hypot(b.x - a.x, b.y - a.y);
    }
    return total;
}

PathPosition pointAlongPath(const GeoPolyline& path, double s) {
    if (!std::isfinite(s) || s < 0.0 || s > 1.0) throw ValidationError("path fraction must be in [0, 1]", "s");
    const auto& v = path.vertices();
    std::vector<MercatorPoint> world;
    world.reserve(v.size());
    for (const auto& p : v) world.push_back(project(p));

    std::vector<double> cumulative(world.size(), 0.0);
    for (std::size_t i = 1; i < world.size(); ++i) {
        cumulative[i] = cumulative[i - 1] + std::hypot(world[i].x - world[i - 1].x, world[i].y - world[i - 1].y);
    }
    const double total = cumulative.back();
    const std::size_t last = world.size() - 1;

    if (s == 0.0) return {v.front(), world.front(), projectedAzimuth(world[0], world[1])};
    if (s == 1.0) return {v.back(), world.back(), projectedAzimuth(world[last - 1], world[last])};

    const double target = s * total;
    // First segment whose end lies strictly beyond the target; a target on a
    // vertex therefore selects the outgoing segment.
    std::size_t seg = 0;
    while (seg + 1 < last && cumulative[seg + 1] <= target) ++seg;

    const double segLen = cumulative[seg + 1] - cumulative[seg];
    const double f = (target - cumulative[seg]) / segLen;
    const MercatorPoint at{world[seg].x + f * (world[seg + 1].x - world[seg].x),
                           world[seg].y + f * (world[seg + 1].y - world[seg].y)};
    const GeoPoint geo = f == 0.0 ? v[seg] : unproject(at);
    return {geo, at, projectedAzimuth(world[seg], world[seg + 1])};
}

bool pointInPolygon(const GeoPoint& p, const GeoPolygon& poly) {
    const auto q = project(p);
    const auto& ring = poly.ring();
    const auto n = ring.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto a = project(ring[i]);
        const auto b = project(ring[j]);
        if (onSegment(q, a, b)) return true;
        if ((a.y > q.y) != (b.y > q.y)) {
            const double xCross = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (q.x < xCross) inside = !inside;
        }
    }
    return inside;
}

}  // namespace mapreel
