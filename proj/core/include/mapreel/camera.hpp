#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "mapreel/geo.hpp"

namespace mapreel {

// World size in pixels at zoom 0.
inline constexpr double kTileSize = 512.0;
inline constexpr double kMinZoom = 0.0;
inline constexpr double kMaxZoom = 22.0;
inline constexpr double kMaxPitch = 60.0;
inline constexpr double kDefaultFov = 45.0;
inline constexpr double kDefaultMaxFitZoom = 16.0;
inline constexpr double kMaxMarginFrac = 0.45;

// One instant of the map camera. Pitch 0 looks straight down; bearing is
// clockwise from north; fov is the vertical field of view.
struct CameraState {
    GeoPoint center;
    double zoom = 0.0;
    double pitch = 0.0;
    double bearing = 0.0;
    double fov = kDefaultFov;

    friend bool operator==(const CameraState&, const CameraState&) = default;
};

void validate(const CameraState& state);

struct Viewport {
    int width = 0;
    int height = 0;

    friend bool operator==(const Viewport&, const Viewport&) = default;
};

void validate(const Viewport& viewport);

struct ScreenPoint {
    double x = 0.0;  // pixels from the left edge
    double y = 0.0;  // pixels from the top edge
};

// Perspective camera distance in screen pixels for the viewport height.
double perspectiveDistance(const CameraState& state, const Viewport& viewport);

// Screen position of a world point; nullopt when it lies behind the camera.
std::optional<ScreenPoint> worldToScreen(const CameraState& state, const Viewport& viewport,
                                         const MercatorPoint& world);

// Ground point under a screen position. Requires the ray to hit the ground,
// which holds for every screen point while pitch + fov/2 < 90°.
MercatorPoint screenToWorld(const CameraState& state, const Viewport& viewport, const ScreenPoint& screen);

// Ground quadrilateral seen through the viewport, corners in screen-clockwise
// order from top-left. Corners are kept in world units since pitched
// footprints routinely extend past the edge of the world square.
struct Footprint {
    std::array<MercatorPoint, 4> world;

    std::array<GeoPoint, 4> corners() const;
    double area() const;
};

Footprint footprint(const CameraState& state, const Viewport& viewport);

struct FitOptions {
    double maxFitZoom = kDefaultMaxFitZoom;
    double fov = kDefaultFov;
};

// Frames `bounds` with at least marginFrac of each viewport dimension free on
// every side. Pitched or rotated fits step the zoom down by 0.05 until the
// projected corners clear the margin.
CameraState fitBounds(const GeoBounds& bounds, const Viewport& viewport, double marginFrac, double pitch,
                      double bearing, const FitOptions& options = {});

// True when every corner of `bounds` lands inside the viewport inset by the
// margin, within `slackPx`.
bool boundsFitWithMargin(const CameraState& state, const Viewport& viewport, const GeoBounds& bounds,
                         double marginFrac, double slackPx = 1e-9);

enum class Easing { Linear, EaseInOut };

std::string_view toString(Easing easing);
Easing parseEasing(std::string_view text);

double applyEasing(Easing easing, double t);

// Signed shortest sweep from `from` to `to`; exactly 180 resolves clockwise.
double shortestBearingSweep(double from, double to);

CameraState interpolate(const CameraState& a, const CameraState& b, double t, Easing easing);

// Ground resolution in meters per screen pixel.
double groundResolution(double latitude, double zoom);

double cameraAltitudeMeters(const CameraState& state, const Viewport& viewport);

}  // namespace mapreel
