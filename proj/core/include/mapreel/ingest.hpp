#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mapreel/camera.hpp"
#include "mapreel/error.hpp"
#include "mapreel/target.hpp"

namespace mapreel {

using Scalar = std::variant<std::monostate, bool, double, std::string>;
using Geometry = std::variant<GeoPoint, GeoPolyline, GeoPolygon>;

struct Feature {
    std::string id;
    Geometry geometry;
    std::map<std::string, Scalar> properties;
    std::optional<std::string> name;
};

// Location, Path, or Region carrying the feature's name.
GeospatialTarget toTarget(const Feature& feature);

// Bad input record. `record` is 1-based; 0 means the document as a whole.
class IngestError : public ValidationError {
public:
    IngestError(const std::string& message, std::size_t record)
        : ValidationError(message, "record " + std::to_string(record)), record_(record) {}
    std::size_t record() const noexcept { return record_; }

private:
    std::size_t record_;
};

enum class DocumentFormat { GeoJson, Delimited };

DocumentFormat parseDocumentFormat(std::string_view text);

struct DelimitedOptions {
    std::string lonColumn = "lon";
    std::string latColumn = "lat";
    std::string idColumn = "id";
    std::string nameColumn = "name";
    char delimiter = ',';
};

// FeatureCollection, a single Feature, or a bare Point/LineString/Polygon.
// Polygon holes are ignored. Features without an id get their 0-based input
// index.
std::vector<Feature> loadGeoJson(std::string_view text);

// Header row, then one point per row.
std::vector<Feature> loadDelimited(std::string_view text, const DelimitedOptions& options = {});

std::vector<Feature> loadFeatures(std::string_view text, DocumentFormat format, const DelimitedOptions& options = {});

enum class LayerKind { Scatter, Line, Region, Hexagon3D };

std::string_view toString(LayerKind kind);
LayerKind parseLayerKind(std::string_view text);

// Axial coordinates of a pointy-top hexagon.
struct HexCell {
    int q = 0;
    int r = 0;
    std::size_t count = 0;
    GeoPoint center;

    friend bool operator==(const HexCell&, const HexCell&) = default;
};

struct DataLayer {
    LayerKind kind = LayerKind::Scatter;
    std::vector<Feature> features;  // for Hexagon3D, one Region per cell
    double cellRadius = 0.0;        // meters
    double cellSizeWorld = 0.0;     // cell radius in world units
    std::vector<HexCell> cells;
    double heightScale = 1.0;  // meters per count

    double maxHeightMeters() const;
};

// Checks that every feature has the geometry the layer kind draws.
DataLayer makeLayer(LayerKind kind, std::vector<Feature> features);

// Bins points into pointy-top hexagons sized at the points' mean latitude.
// Cells are ordered by (q, r).
DataLayer hexAggregate(std::span<const GeoPoint> points, double cellRadius, double heightScale = 1.0);

// Corners of a cell, in world units.
std::vector<MercatorPoint> hexagonCorners(const HexCell& cell, double cellSizeWorld);

// Multiple of every feature touching the lasso (points by containment,
// lines and polygons by any contained vertex); Region(lasso) when none do.
GeospatialTarget selectByLasso(std::span<const Feature> features, const GeoPolygon& lasso);

// Feature closest to `p` on screen within radiusPx; ties go to the lower id.
// Throws NotFoundError when nothing is in range.
const Feature& pickFeature(std::span<const Feature> features, const GeoPoint& p, double radiusPx,
                           const CameraState& state, const Viewport& viewport);

GeospatialTarget selectNearest(std::span<const Feature> features, const GeoPoint& p, double radiusPx,
                               const CameraState& state, const Viewport& viewport);

// boundsOf(target) grown on every side by the tallest extruded cell the
// target covers. Identity for flat layers.
GeoBounds inflatedBounds(const GeospatialTarget& target, const DataLayer& layer);

// Degrees of latitude spanned by `meters` along a meridian.
double metersToLatitudeDegrees(double meters);

}  // namespace mapreel
