#include "mapreel/target.hpp"

#include <array>
#include <cstdio>

#include "mapreel/error.hpp"

namespace mapreel {

namespace {

constexpr std::array<std::string_view, 5> kKindNames{"None", "Location", "Region", "Path", "Multiple"};

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

void appendVertices(const GeospatialTarget::Single& single, std::vector<GeoPoint>& out) {
    std::visit(Overloaded{
                   [&](const Location& l) { out.push_back(l.point); },
                   [&](const Region& r) { out.insert(out.end(), r.polygon.ring().begin(), r.polygon.ring().end()); },
                   [&](const Path& p) {
                       out.insert(out.end(), p.polyline.vertices().begin(), p.polyline.vertices().end());
                   },
               },
               single);
}

GeoPoint boundsCenter(const GeoBounds& b) { return unproject(project(b).center()); }

}  // namespace

std::string_view toString(TargetKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

TargetKind parseTargetKind(std::string_view text) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == text) return static_cast<TargetKind>(i);
    }
    throw ValidationError("unknown target kind '" + std::string(text) +
                              "'; expected one of None, Location, Region, Path, Multiple",
                          "targetKind");
}

GeospatialTarget GeospatialTarget::multiple(std::vector<Single> members, std::optional<std::string> name) {
    if (members.empty()) throw NoGeometryError("no geometry: empty multiple target");
    GeospatialTarget t;
    t.members_ = std::move(members);
    t.multipleName_ = std::move(name);
    return t;
}

TargetKind GeospatialTarget::kind() const {
    if (!members_.empty()) return TargetKind::Multiple;
    if (!single_) return TargetKind::None;
    switch (single_->index()) {
        case 0: return TargetKind::Location;
        case 1: return TargetKind::Region;
        default: return TargetKind::Path;
    }
}

std::optional<std::string> GeospatialTarget::name() const {
    if (!members_.empty()) return multipleName_;
    if (!single_) return std::nullopt;
    return std::visit([](const auto& s) { return s.name; }, *single_);
}

std::vector<GeoPoint> verticesOf(const GeospatialTarget& target) {
    std::vector<GeoPoint> out;
    if (target.single()) appendVertices(*target.single(), out);
    for (const auto& m : target.members()) appendVertices(m, out);
    return out;
}

GeoBounds boundsOf(const GeospatialTarget& target) {
    if (target.isNone()) throw NoGeometryError("no geometry: target is None");
    const auto vertices = verticesOf(target);
    return GeoBounds::ofPoints(vertices);
}

MercatorPoint projectedCentroid(const GeoPolygon& polygon) {
    const auto& ring = polygon.ring();
    const auto n = ring.size();
    std::vector<MercatorPoint> pts;
    pts.reserve(n);
    for (const auto& p : ring) pts.push_back(project(p));
    // Shift to the first vertex to keep the cross products well conditioned.
    const MercatorPoint origin = pts.front();
    double area2 = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ax = pts[i].x - origin.x;
        const double ay = pts[i].y - origin.y;
        const double bx = pts[(i + 1) % n].x - origin.x;
        const double by = pts[(i + 1) % n].y - origin.y;
        const double cross = ax * by - bx * ay;
        area2 += cross;
        cx += (ax + bx) * cross;
        cy += (ay + by) * cross;
    }
    if (area2 == 0.0) throw ValidationError("degenerate polygon: zero area", "ring");
    return {origin.x + cx / (3.0 * area2), origin.y + cy / (3.0 * area2)};
}

GeoPoint centroidOf(const GeospatialTarget& target) {
    switch (target.kind()) {
        case TargetKind::None: throw NoGeometryError("no geometry: target is None");
        case TargetKind::Location: return std::get<Location>(*target.single()).point;
        case TargetKind::Region: return unproject(projectedCentroid(std::get<Region>(*target.single()).polygon));
        case TargetKind::Path:
        case TargetKind::Multiple: return boundsCenter(boundsOf(target));
    }
    return {};
}

std::string labelOf(const GeospatialTarget& target) {
    if (target.isNone()) return "No target";
    if (auto n = target.name(); n && !n->empty()) return *n;
    const auto c = centroidOf(target);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f, %.4f", c.lon, c.lat);
    return buf;
}

}  // namespace mapreel
