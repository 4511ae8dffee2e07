#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mapreel/geo.hpp"

namespace mapreel {

enum class TargetKind { None, Location, Region, Path, Multiple };

std::string_view toString(TargetKind kind);
TargetKind parseTargetKind(std::string_view text);

struct Location {
    GeoPoint point;
    std::optional<std::string> name;

    friend bool operator==(const Location&, const Location&) = default;
};

struct Region {
    GeoPolygon polygon;
    std::optional<std::string> name;

    friend bool operator==(const Region&, const Region&) = default;
};

struct Path {
    GeoPolyline polyline;
    std::optional<std::string> name;

    friend bool operator==(const Path&, const Path&) = default;
};

// What a camera movement serves. Multiple holds one level of Location,
// Region, or Path members and is never empty.
class GeospatialTarget {
public:
    using Single = std::variant<Location, Region, Path>;

    GeospatialTarget() = default;  // None
    GeospatialTarget(Location v) : single_(std::move(v)) {}
    GeospatialTarget(Region v) : single_(std::move(v)) {}
    GeospatialTarget(Path v) : single_(std::move(v)) {}

    static GeospatialTarget none() { return {}; }
    static GeospatialTarget of(const Single& single) {
        return std::visit([](const auto& v) { return GeospatialTarget(v); }, single);
    }
    static GeospatialTarget multiple(std::vector<Single> members, std::optional<std::string> name = {});

    TargetKind kind() const;
    bool isNone() const { return kind() == TargetKind::None; }

    const std::optional<Single>& single() const { return single_; }
    const std::vector<Single>& members() const { return members_; }
    const std::optional<std::string>& multipleName() const { return multipleName_; }

    // Name of a single target, or the name given to a Multiple.
    std::optional<std::string> name() const;

    friend bool operator==(const GeospatialTarget&, const GeospatialTarget&) = default;

private:
    std::optional<Single> single_;
    std::vector<Single> members_;
    std::optional<std::string> multipleName_;
};

// Minimal box containing every vertex; union over members for Multiple.
// Throws NoGeometryError for None.
GeoBounds boundsOf(const GeospatialTarget& target);

// Location: its point. Region: area-weighted centroid of the projected ring.
// Path and Multiple: center of the projected bounds.
GeoPoint centroidOf(const GeospatialTarget& target);

// Projected-space centroid of a polygon ring.
MercatorPoint projectedCentroid(const GeoPolygon& polygon);

// Every vertex of the target, in member order.
std::vector<GeoPoint> verticesOf(const GeospatialTarget& target);

// Timeline label: the target's name, else "lon, lat" of its centroid.
std::string labelOf(const GeospatialTarget& target);

}  // namespace mapreel
