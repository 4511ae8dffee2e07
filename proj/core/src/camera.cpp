#include "mapreel/camera.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mapreel/error.hpp"

namespace mapreel {

namespace {

constexpr double kZoomStep = 0.05;

double worldScale(double zoom) { return kTileSize * std::exp2(zoom); }

void requireFinite(double v, const char* field) {
    if (!std::isfinite(v)) throw ValidationError(std::string(field) + " must be finite", field);
}

}  // namespace

void validate(const CameraState& s) {
    validate(s.center);
    requireFinite(s.zoom, "zoom");
    requireFinite(s.pitch, "pitch");
    requireFinite(s.bearing, "bearing");
    requireFinite(s.fov, "fov");
    if (s.zoom < kMinZoom || s.zoom > kMaxZoom) throw ValidationError("zoom must be in [0, 22]", "zoom");
    if (s.pitch < 0.0 || s.pitch > kMaxPitch) throw ValidationError("pitch must be in [0, 60]", "pitch");
    if (s.bearing < 0.0 || s.bearing >= 360.0) throw ValidationError("bearing must be in [0, 360)", "bearing");
    if (s.fov <= 0.0 || s.pitch + s.fov / 2.0 >= 90.0) {
        throw ValidationError("fov must be positive with pitch + fov/2 < 90", "fov");
    }
}

void validate(const Viewport& v) {
    if (v.width <= 0) throw ValidationError("viewport width must be positive", "width");
    if (v.height <= 0) throw ValidationError("viewport height must be positive", "height");
}

double perspectiveDistance(const CameraState& state, const Viewport& viewport) {
    return (viewport.height / 2.0) / std::tan(toRadians(state.fov) / 2.0);
}

std::optional<ScreenPoint> worldToScreen(const CameraState& state, const Viewport& viewport,
                                         const MercatorPoint& world) {
    const auto c = project(state.center);
    const double scale = worldScale(state.zoom);
    const double rx = (world.x - c.x) * scale;
    const double ry = (world.y - c.y) * scale;
    const double b = toRadians(state.bearing);
    const double p = toRadians(state.pitch);
    const double right = rx * std::cos(b) + ry * std::sin(b);
    const double forward = rx * std::sin(b) - ry * std::cos(b);
    const double d = perspectiveDistance(state, viewport);
    const double depth = forward * std::sin(p) + d;
    if (depth <= 1e-9 * d) return std::nullopt;
    return ScreenPoint{viewport.width / 2.0 + d * right / depth,
                       viewport.height / 2.0 - d * forward * std::cos(p) / depth};
}

MercatorPoint screenToWorld(const CameraState& state, const Viewport& viewport, const ScreenPoint& screen) {
    const double sx = screen.x - viewport.width / 2.0;
    const double sy = screen.y - viewport.height / 2.0;
    const double b = toRadians(state.bearing);
    const double p = toRadians(state.pitch);
    const double d = perspectiveDistance(state, viewport);
    const double forward = -sy * d / (d * std::cos(p) + sy * std::sin(p));
    const double depth = forward * std::sin(p) + d;
    const double right = sx * depth / d;
    const double rx = right * std::cos(b) + forward * std::sin(b);
    const double ry = right * std::sin(b) - forward * std::cos(b);
    const auto c = project(state.center);
    const double scale = worldScale(state.zoom);
    return {c.x + rx / scale, c.y + ry / scale};
}

std::array<GeoPoint, 4> Footprint::corners() const {
    return {unprojectClamped(world[0]), unprojectClamped(world[1]), unprojectClamped(world[2]),
            unprojectClamped(world[3])};
}

double Footprint::area() const {
    double twice = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& a = world[i];
        const auto& b = world[(i + 1) % 4];
        twice += a.x * b.y - b.x * a.y;
    }
    return std::abs(twice) / 2.0;
}

Footprint footprint(const CameraState& state, const Viewport& viewport) {
    validate(viewport);
    const double w = viewport.width;
    const double h = viewport.height;
    return {{screenToWorld(state, viewport, {0.0, 0.0}), screenToWorld(state, viewport, {w, 0.0}),
             screenToWorld(state, viewport, {w, h}), screenToWorld(state, viewport, {0.0, h})}};
}

bool boundsFitWithMargin(const CameraState& state, const Viewport& viewport, const GeoBounds& bounds,
                         double marginFrac, double slackPx) {
    const auto mb = project(bounds);
    const double left = marginFrac * viewport.width - slackPx;
    const double right = viewport.width - marginFrac * viewport.width + slackPx;
    const double top = marginFrac * viewport.height - slackPx;
    const double bottom = viewport.height - marginFrac * viewport.height + slackPx;
    const std::array<MercatorPoint, 4> corners{
        mb.min, MercatorPoint{mb.max.x, mb.min.y}, mb.max, MercatorPoint{mb.min.x, mb.max.y}};
    for (const auto& corner : corners) {
        const auto s = worldToScreen(state, viewport, corner);
        if (!s || s->x < left || s->x > right || s->y < top || s->y > bottom) return false;
    }
    return true;
}

CameraState fitBounds(const GeoBounds& bounds, const Viewport& viewport, double marginFrac, double pitch,
                      double bearing, const FitOptions& options) {
    validate(viewport);
    if (!std::isfinite(marginFrac) || marginFrac < 0.0 || marginFrac > kMaxMarginFrac) {
        throw ValidationError("marginFrac must be in [0, 0.45]", "marginFrac");
    }
    requireFinite(pitch, "pitch");
    requireFinite(bearing, "bearing");
    if (pitch < 0.0 || pitch > kMaxPitch) throw ValidationError("pitch must be in [0, 60]", "pitch");
    if (options.maxFitZoom < kMinZoom || options.maxFitZoom > kMaxZoom) {
        throw ValidationError("maxFitZoom must be in [0, 22]", "maxFitZoom");
    }

    const auto mb = project(bounds);
    CameraState state;
    state.center = unproject(mb.center());
    state.pitch = pitch;
    state.bearing = normalizeBearing(bearing);
    state.fov = options.fov;

    const double dx = mb.width();
    const double dy = mb.height();
    if (dx == 0.0 && dy == 0.0) {
        state.zoom = options.maxFitZoom;
        return state;
    }
    const double usable = 1.0 - 2.0 * marginFrac;
    const double inf = std::numeric_limits<double>::infinity();
    const double scaleX = dx > 0.0 ? usable * viewport.width / (dx * kTileSize) : inf;
    const double scaleY = dy > 0.0 ? usable * viewport.height / (dy * kTileSize) : inf;
    state.zoom = std::clamp(std::log2(std::min(scaleX, scaleY)), kMinZoom, options.maxFitZoom);

    if (state.pitch > 0.0 || state.bearing != 0.0) {
        while (state.zoom > kMinZoom && !boundsFitWithMargin(state, viewport, bounds, marginFrac)) {
            state.zoom = std::max(kMinZoom, state.zoom - kZoomStep);
        }
    }
    return state;
}

std::string_view toString(Easing easing) { return easing == Easing::Linear ? "Linear" : "EaseInOut"; }

Easing parseEasing(std::string_view text) {
    if (text == "Linear") return Easing::Linear;
    if (text == "EaseInOut") return Easing::EaseInOut;
    throw ValidationError("unknown easing '" + std::string(text) + "'; expected Linear or EaseInOut", "easing");
}

double applyEasing(Easing easing, double t) {
    if (easing == Easing::Linear) return t;
    return t * t * (3.0 - 2.0 * t);
}

double shortestBearingSweep(double from, double to) {
    double sweep = normalizeBearing(to - from);
    if (sweep > 180.0) sweep -= 360.0;
    return sweep;
}

CameraState interpolate(const CameraState& a, const CameraState& b, double t, Easing easing) {
    if (!std::isfinite(t) || t < 0.0 || t > 1.0) throw ValidationError("t must be in [0, 1]", "t");
    if (a.fov != b.fov) throw ValidationError("cannot interpolate between different fields of view", "fov");
    if (t == 0.0) return a;
    if (t == 1.0) return b;
    const double e = applyEasing(easing, t);
    const auto ca = project(a.center);
    const auto cb = project(b.center);
    CameraState out;
    out.center = a.center == b.center ? a.center : unproject({ca.x + e * (cb.x - ca.x), ca.y + e * (cb.y - ca.y)});
    out.zoom = a.zoom + e * (b.zoom - a.zoom);
    out.pitch = a.pitch + e * (b.pitch - a.pitch);
    out.bearing = normalizeBearing(a.bearing + e * shortestBearingSweep(a.bearing, b.bearing));
    out.fov = a.fov;
    return out;
}

double groundResolution(double latitude, double zoom) {
    return std::cos(toRadians(latitude)) * 2.0 * std::numbers::pi * kEarthRadiusMeters / worldScale(zoom);
}

double cameraAltitudeMeters(const CameraState& state, const Viewport& viewport) {
    return (viewport.height / 2.0) * groundResolution(state.center.lat, state.zoom) /
           std::tan(toRadians(state.fov) / 2.0);
}

}  // namespace mapreel
