#include "mapreel/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

namespace mapreel {

namespace {

using nlohmann::json;

GeoPoint readPosition(const json& c, std::size_t record) {
    if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) {
        throw IngestError("coordinate must be [lon, lat] at record " + std::to_string(record), record);
    }
    GeoPoint p{c[0].get<double>(), c[1].get<double>()};
    try {
        validate(p);
    } catch (const ValidationError& e) {
        const std::string what = e.field() == "lat" ? "latitude" : "longitude";
        throw IngestError(what + " out of range at record " + std::to_string(record), record);
    }
    return p;
}

std::vector<GeoPoint> readPositions(const json& c, std::size_t record) {
    if (!c.is_array()) throw IngestError("coordinates must be an array at record " + std::to_string(record), record);
    std::vector<GeoPoint> out;
    for (const auto& p : c) out.push_back(readPosition(p, record));
    return out;
}

Geometry readGeometry(const json& g, std::size_t record) {
    if (!g.is_object() || !g.contains("type") || !g.contains("coordinates")) {
        throw IngestError("feature without geometry at record " + std::to_string(record), record);
    }
    const auto type = g["type"].get<std::string>();
    try {
        if (type == "Point") return readPosition(g["coordinates"], record);
        if (type == "LineString") return GeoPolyline(readPositions(g["coordinates"], record));
        if (type == "Polygon") {
            const auto& rings = g["coordinates"];
            if (!rings.is_array() || rings.empty()) {
                throw IngestError("polygon without rings at record " + std::to_string(record), record);
            }
            return GeoPolygon(readPositions(rings[0], record));
        }
    } catch (const IngestError&) {
        throw;
    } catch (const ValidationError& e) {
        throw IngestError(std::string(e.what()) + " at record " + std::to_string(record), record);
    }
    throw IngestError("unsupported geometry type '" + type + "' at record " + std::to_string(record), record);
}

std::optional<std::string> idText(const json& id) {
    if (id.is_string()) return id.get<std::string>();
    if (id.is_number_integer()) return std::to_string(id.get<long long>());
    if (id.is_number()) return json(id).dump();
    return std::nullopt;
}

Scalar toScalar(const json& v) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return std::monostate{};
    return v.dump();
}

Feature readFeature(const json& f, std::size_t index) {
    const std::size_t record = index + 1;
    if (!f.is_object() || f.value("type", "") != "Feature") {
        throw IngestError("expected a Feature at record " + std::to_string(record), record);
    }
    Feature out;
    out.geometry = readGeometry(f.value("geometry", json()), record);
    out.id = f.contains("id") ? idText(f["id"]).value_or(std::to_string(index)) : std::to_string(index);
    if (f.contains("properties") && f["properties"].is_object()) {
        for (const auto& [k, v] : f["properties"].items()) out.properties.emplace(k, toScalar(v));
        if (const auto it = f["properties"].find("name"); it != f["properties"].end() && it->is_string()) {
            out.name = it->get<std::string>();
        }
    }
    return out;
}

void requireUniqueIds(const std::vector<Feature>& features) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (!seen.insert(features[i].id).second) {
            throw IngestError("duplicate feature id '" + features[i].id + "' at record " + std::to_string(i + 1),
                              i + 1);
        }
    }
}

std::vector<std::string> splitRow(std::string_view line, char delim) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

std::optional<double> parseNumber(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::vector<std::string_view> splitLines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

// Cell radius in world units at a latitude.
double worldCellSize(double cellRadius, double latitude) {
    return cellRadius / (2.0 * std::numbers::pi * kEarthRadiusMeters * std::cos(toRadians(latitude)));
}

std::pair<int, int> axialOf(const MercatorPoint& p, double size) {
    const double qf = (std::sqrt(3.0) / 3.0 * p.x - p.y / 3.0) / size;
    const double rf = (2.0 / 3.0 * p.y) / size;
    const double sf = -qf - rf;
    double q = std::round(qf);
    double r = std::round(rf);
    const double s = std::round(sf);
    const double dq = std::abs(q - qf);
    const double dr = std::abs(r - rf);
    const double ds = std::abs(s - sf);
    if (dq > dr && dq > ds) {
        q = -r - s;
    } else if (dr > ds) {
        r = -q - s;
    }
    return {static_cast<int>(q), static_cast<int>(r)};
}

MercatorPoint hexCenter(int q, int r, double size) {
    return {size * std::sqrt(3.0) * (q + r / 2.0), size * 1.5 * r};
}

double segmentDistance(const ScreenPoint& p, const ScreenPoint& a, const ScreenPoint& b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

std::optional<double> chainDistance(const ScreenPoint& click, const std::vector<GeoPoint>& pts, bool closed,
                                    const CameraState& state, const Viewport& viewport) {
    std::optional<double> best;
    const auto n = pts.size();
    const auto segments = closed ? n : n - 1;
    for (std::size_t i = 0; i < segments; ++i) {
        const auto a = worldToScreen(state, viewport, project(pts[i]));
        const auto b = worldToScreen(state, viewport, project(pts[(i + 1) % n]));
        if (!a || !b) continue;
        const double d = segmentDistance(click, *a, *b);
        if (!best || d < *best) best = d;
    }
    return best;
}

bool lowerId(const std::string& a, const std::string& b) {
    const auto na = parseNumber(a);
    const auto nb = parseNumber(b);
    if (na && nb && *na != *nb) return *na < *nb;
    return a < b;
}

}  // namespace

GeospatialTarget toTarget(const Feature& f) {
    return std::visit(
        [&](const auto& g) -> GeospatialTarget {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, GeoPoint>) return Location{g, f.name};
            else if constexpr (std::is_same_v<T, GeoPolyline>) return Path{g, f.name};
            else return Region{g, f.name};
        },
        f.geometry);
}

DocumentFormat parseDocumentFormat(std::string_view text) {
    if (text == "geojson") return DocumentFormat::GeoJson;
    if (text == "csv" || text == "delimited") return DocumentFormat::Delimited;
    throw ValidationError("unknown data format '" + std::string(text) + "'; expected geojson or csv", "format");
}

std::vector<Feature> loadGeoJson(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IngestError(std::string("malformed GeoJSON: ") + e.what(), 0);
    }
    std::vector<Feature> out;
    try {
        const auto type = doc.is_object() ? doc.value("type", "") : "";
        if (type == "FeatureCollection") {
            if (!doc.contains("features") || !doc["features"].is_array()) {
                throw IngestError("FeatureCollection without a features array", 0);
            }
            const auto& fs = doc["features"];
            for (std::size_t i = 0; i < fs.size(); ++i) out.push_back(readFeature(fs[i], i));
        } else if (type == "Feature") {
            out.push_back(readFeature(doc, 0));
        } else if (type == "Point" || type == "LineString" || type == "Polygon") {
            out.push_back({"0", readGeometry(doc, 1), {}, std::nullopt});
        } else {
            throw IngestError("unsupported GeoJSON type '" + type + "'", 0);
        }
    } catch (const json::exception& e) {
        throw IngestError(std::string("malformed GeoJSON: ") + e.what(), 0);
    }
    requireUniqueIds(out);
    return out;
}

std::vector<Feature> loadDelimited(std::string_view text, const DelimitedOptions& options) {
    const auto lines = splitLines(text);
    std::size_t row = 0;
    while (row < lines.size() && lines[row].empty()) ++row;
    if (row == lines.size()) throw IngestError("delimited document has no header row", 0);
    const auto header = splitRow(lines[row++], options.delimiter);

    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto lonCol = column(options.lonColumn);
    const auto latCol = column(options.latColumn);
    if (!lonCol) throw IngestError("missing longitude column '" + options.lonColumn + "'", 0);
    if (!latCol) throw IngestError("missing latitude column '" + options.latColumn + "'", 0);
    const auto idCol = column(options.idColumn);
    const auto nameCol = column(options.nameColumn);

    std::vector<Feature> out;
    for (; row < lines.size(); ++row) {
        if (lines[row].empty()) continue;
        const std::size_t record = out.size() + 1;
        const auto cells = splitRow(lines[row], options.delimiter);
        if (cells.size() != header.size()) {
            throw IngestError("expected " + std::to_string(header.size()) + " fields, found " +
                                  std::to_string(cells.size()) + " at record " + std::to_string(record),
                              record);
        }
        const auto lon = parseNumber(cells[*lonCol]);
        const auto lat = parseNumber(cells[*latCol]);
        if (!lon) throw IngestError("longitude is not a number at record " + std::to_string(record), record);
        if (!lat) throw IngestError("latitude is not a number at record " + std::to_string(record), record);
        if (!std::isfinite(*lon) || *lon < -kMaxLongitude || *lon > kMaxLongitude) {
            throw IngestError("longitude out of range at record " + std::to_string(record), record);
        }
        if (!std::isfinite(*lat) || *lat < -kMaxLatitude || *lat > kMaxLatitude) {
            throw IngestError("latitude out of range at record " + std::to_string(record), record);
        }
        Feature f;
        f.geometry = GeoPoint{*lon, *lat};
        f.id = idCol && !cells[*idCol].empty() ? cells[*idCol] : std::to_string(record - 1);
        if (nameCol && !cells[*nameCol].empty()) f.name = cells[*nameCol];
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c == *lonCol || c == *latCol) continue;
            if (const auto n = parseNumber(cells[c])) f.properties.emplace(header[c], *n);
            else f.properties.emplace(header[c], cells[c]);
        }
        out.push_back(std::move(f));
    }
    requireUniqueIds(out);
    return out;
}

std::vector<Feature> loadFeatures(std::string_view text, DocumentFormat format, const DelimitedOptions& options) {
    return format == DocumentFormat::GeoJson ? loadGeoJson(text) : loadDelimited(text, options);
}

std::string_view toString(LayerKind kind) {
    switch (kind) {
        case LayerKind::Scatter: return "Scatter";
        case LayerKind::Line: return "Line";
        case LayerKind::Region: return "Region";
        case LayerKind::Hexagon3D: return "Hexagon3D";
    }
    return "";
}

LayerKind parseLayerKind(std::string_view text) {
    for (auto k : {LayerKind::Scatter, LayerKind::Line, LayerKind::Region, LayerKind::Hexagon3D}) {
        if (toString(k) == text) return k;
    }
    throw ValidationError("unknown layer kind '" + std::string(text) +
                              "'; expected one of Scatter, Line, Region, Hexagon3D",
                          "kind");
}

double DataLayer::maxHeightMeters() const {
    std::size_t most = 0;
    for (const auto& c : cells) most = std::max(most, c.count);
    return static_cast<double>(most) * heightScale;
}

DataLayer makeLayer(LayerKind kind, std::vector<Feature> features) {
    if (kind == LayerKind::Hexagon3D) throw ValidationError("use hexAggregate to build a Hexagon3D layer", "kind");
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto& g = features[i].geometry;
        const bool ok = (kind == LayerKind::Scatter && std::holds_alternative<GeoPoint>(g)) ||
                        (kind == LayerKind::Line && std::holds_alternative<GeoPolyline>(g)) ||
                        (kind == LayerKind::Region && std::holds_alternative<GeoPolygon>(g));
        if (!ok) {
            throw IngestError("feature '" + features[i].id + "' does not fit a " + std::string(toString(kind)) +
                                  " layer",
                              i + 1);
        }
    }
    DataLayer layer;
    layer.kind = kind;
    layer.features = std::move(features);
    return layer;
}

DataLayer hexAggregate(std::span<const GeoPoint> points, double cellRadius, double heightScale) {
    if (!std::isfinite(cellRadius) || cellRadius <= 0.0) {
        throw ValidationError("cellRadius must be positive", "cellRadius");
    }
    if (!std::isfinite(heightScale) || heightScale < 0.0) {
        throw ValidationError("heightScale must be non-negative", "heightScale");
    }
    DataLayer layer;
    layer.kind = LayerKind::Hexagon3D;
    layer.cellRadius = cellRadius;
    layer.heightScale = heightScale;
    if (points.empty()) return layer;

    double latSum = 0.0;
    for (const auto& p : points) latSum += p.lat;
    layer.cellSizeWorld = worldCellSize(cellRadius, latSum / static_cast<double>(points.size()));

    std::map<std::pair<int, int>, std::size_t> counts;
    for (const auto& p : points) ++counts[axialOf(project(p), layer.cellSizeWorld)];

    for (const auto& [qr, count] : counts) {
        HexCell cell{qr.first, qr.second, count, unprojectClamped(hexCenter(qr.first, qr.second, layer.cellSizeWorld))};
        std::vector<GeoPoint> ring;
        for (const auto& c : hexagonCorners(cell, layer.cellSizeWorld)) ring.push_back(unprojectClamped(c));
        Feature f{"hex:" + std::to_string(cell.q) + ":" + std::to_string(cell.r), GeoPolygon(std::move(ring)),
                  {{"count", static_cast<double>(count)}}, std::nullopt};
        layer.cells.push_back(cell);
        layer.features.push_back(std::move(f));
    }
    return layer;
}

std::vector<MercatorPoint> hexagonCorners(const HexCell& cell, double size) {
    const auto c = hexCenter(cell.q, cell.r, size);
    std::vector<MercatorPoint> out;
    for (int k = 0; k < 6; ++k) {
        const double a = toRadians(60.0 * k - 30.0);
        out.push_back({c.x + size * std::cos(a), c.y + size * std::sin(a)});
    }
    return out;
}

GeospatialTarget selectByLasso(std::span<const Feature> features, const GeoPolygon& lasso) {
    std::vector<GeospatialTarget::Single> hits;
    for (const auto& f : features) {
        const bool hit = std::visit(
            [&](const auto& g) {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, GeoPoint>) {
                    return pointInPolygon(g, lasso);
                } else if constexpr (std::is_same_v<T, GeoPolyline>) {
                    return std::any_of(g.vertices().begin(), g.vertices().end(),
                                       [&](const GeoPoint& p) { return pointInPolygon(p, lasso); });
                } else {
                    return std::any_of(g.ring().begin(), g.ring().end(),
                                       [&](const GeoPoint& p) { return pointInPolygon(p, lasso); });
                }
            },
            f.geometry);
        if (hit) hits.push_back(*toTarget(f).single());
    }
    if (hits.empty()) return Region{lasso, std::nullopt};
    return GeospatialTarget::multiple(std::move(hits));
}

const Feature& pickFeature(std::span<const Feature> features, const GeoPoint& p, double radiusPx,
                           const CameraState& state, const Viewport& viewport) {
    if (!std::isfinite(radiusPx) || radiusPx <= 0.0) throw ValidationError("radiusPx must be positive", "radiusPx");
    const auto click = worldToScreen(state, viewport, project(p));
    if (!click) throw NotFoundError("no feature at point: click is not on screen");

    const Feature* best = nullptr;
    double bestDistance = 0.0;
    for (const auto& f : features) {
        const auto d = std::visit(
            [&](const auto& g) -> std::optional<double> {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, GeoPoint>) {
                    const auto s = worldToScreen(state, viewport, project(g));
                    if (!s) return std::nullopt;
                    return std::hypot(s->x - click->x, s->y - click->y);
                } else if constexpr (std::is_same_v<T, GeoPolyline>) {
                    return chainDistance(*click, g.vertices(), false, state, viewport);
                } else {
                    if (pointInPolygon(p, g)) return 0.0;
                    return chainDistance(*click, g.ring(), true, state, viewport);
                }
            },
            f.geometry);
        if (!d || *d > radiusPx) continue;
        if (!best || *d < bestDistance || (*d == bestDistance && lowerId(f.id, best->id))) {
            best = &f;
            bestDistance = *d;
        }
    }
    if (!best) throw NotFoundError("no feature at point");
    return *best;
}

GeospatialTarget selectNearest(std::span<const Feature> features, const GeoPoint& p, double radiusPx,
                               const CameraState& state, const Viewport& viewport) {
    return toTarget(pickFeature(features, p, radiusPx, state, viewport));
}

double metersToLatitudeDegrees(double meters) {
    return meters / (2.0 * std::numbers::pi * kMeanEarthRadiusMeters / 360.0);
}

GeoBounds inflatedBounds(const GeospatialTarget& target, const DataLayer& layer) {
    const GeoBounds base = boundsOf(target);
    if (layer.kind != LayerKind::Hexagon3D || layer.cells.empty()) return base;

    const auto mb = project(base);
    const double pad = layer.cellSizeWorld;
    std::size_t tallest = 0;
    for (const auto& cell : layer.cells) {
        const auto c = hexCenter(cell.q, cell.r, layer.cellSizeWorld);
        if (c.x >= mb.min.x - pad && c.x <= mb.max.x + pad && c.y >= mb.min.y - pad && c.y <= mb.max.y + pad) {
            tallest = std::max(tallest, cell.count);
        }
    }
    const double meters = static_cast<double>(tallest) * layer.heightScale;
    if (meters <= 0.0) return base;

    const double centerLat = (base.south + base.north) / 2.0;
    const double dLat = metersToLatitudeDegrees(meters);
    const double dLon = dLat / std::cos(toRadians(centerLat));
    return {std::max(-kMaxLongitude, base.west - dLon), std::max(-kMaxLatitude, base.south - dLat),
            std::min(kMaxLongitude, base.east + dLon), std::min(kMaxLatitude, base.north + dLat)};
}

}  // namespace mapreel
