#include "mapreel/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mapreel/error.hpp"

namespace mapreel {

namespace {

constexpr double kRho = std::numbers::sqrt2;
constexpr double kSingular = 1e-12;

// Visible extent in world units for a zoom level.
double visibleExtent(double zoom, double referenceWidthPx) {
    return referenceWidthPx / (kTileSize * std::exp2(zoom));
}

}  // namespace

std::string_view toString(GapFillMode mode) { return mode == GapFillMode::FlyTo ? "flyTo" : "linear"; }

GapFillMode parseGapFillMode(std::string_view text) {
    if (text == "flyTo") return GapFillMode::FlyTo;
    if (text == "linear") return GapFillMode::Linear;
    throw ValidationError("unknown gap fill mode '" + std::string(text) + "'; expected flyTo or linear", "gapFill");
}

Trajectory::Trajectory(const CameraState& from, const CameraState& to, double duration)
    : from_(from), to_(to), duration_(duration) {
    if (!std::isfinite(duration) || duration <= 0.0) {
        throw ValidationError("trajectory duration must be positive", "duration");
    }
    if (from.fov != to.fov) throw ValidationError("cannot interpolate between different fields of view", "fov");
}

Trajectory Trajectory::linear(const CameraState& from, const CameraState& to, double duration) {
    return Trajectory(from, to, duration);
}

Trajectory Trajectory::hold(const CameraState& state, double duration) { return Trajectory(state, state, duration); }

Trajectory Trajectory::flyTo(const CameraState& from, const CameraState& to, double duration,
                             double referenceWidthPx) {
    Trajectory t(from, to, duration);
    t.referenceWidthPx_ = referenceWidthPx;
    t.c0_ = project(from.center);
    t.c1_ = project(to.center);
    t.u1_ = std::hypot(t.c1_.x - t.c0_.x, t.c1_.y - t.c0_.y);
    t.w0_ = visibleExtent(from.zoom, referenceWidthPx);
    const double w1 = visibleExtent(to.zoom, referenceWidthPx);
    if (t.u1_ < kSingular) return t;

    const double rho2 = kRho * kRho;
    const double rho4 = rho2 * rho2;
    const double b0 = (w1 * w1 - t.w0_ * t.w0_ + rho4 * t.u1_ * t.u1_) / (2.0 * t.w0_ * rho2 * t.u1_);
    const double b1 = (w1 * w1 - t.w0_ * t.w0_ - rho4 * t.u1_ * t.u1_) / (2.0 * w1 * rho2 * t.u1_);
    // ln(-b + sqrt(b^2 + 1)) == -asinh(b), without the cancellation.
    t.r0_ = -std::asinh(b0);
    const double r1 = -std::asinh(b1);
    t.pathLength_ = (r1 - t.r0_) / kRho;
    t.optimal_ = std::isfinite(t.pathLength_) && t.pathLength_ > 0.0;
    return t;
}

CameraState Trajectory::at(double seconds) const {
    if (!std::isfinite(seconds) || seconds < 0.0 || seconds > duration_) {
        throw ValidationError("trajectory time out of range", "t");
    }
    const double f = seconds / duration_;
    if (!optimal_) return interpolate(from_, to_, f, Easing::Linear);
    if (f == 0.0) return from_;
    if (f == 1.0) return to_;

    const double s = f * pathLength_;
    const double coshR0 = std::cosh(r0_);
    const double u = w0_ / (kRho * kRho) * (coshR0 * std::tanh(kRho * s + r0_) - std::sinh(r0_));
    const double w = w0_ * coshR0 / std::cosh(kRho * s + r0_);
    const double k = u / u1_;

    CameraState out;
    out.center = unproject({c0_.x + k * (c1_.x - c0_.x), c0_.y + k * (c1_.y - c0_.y)});
    out.zoom = std::max(kMinZoom, std::log2(referenceWidthPx_ / (kTileSize * w)));
    out.pitch = from_.pitch + f * (to_.pitch - from_.pitch);
    out.bearing = normalizeBearing(from_.bearing + f * shortestBearingSweep(from_.bearing, to_.bearing));
    out.fov = from_.fov;
    return out;
}

}  // namespace mapreel
