#include "mapreel/shots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "mapreel/error.hpp"

namespace mapreel {

namespace {

constexpr std::array<std::string_view, 5> kPurposeNames{"Emphasize", "Overview", "Compare", "Supplement", "Dynamics"};
constexpr std::array<std::string_view, 8> kShotNames{"Static", "PushIn", "PullOut", "Pan",
                                                     "Tilt",   "Roll",   "Arc",     "Tracking"};

// Zoom change at intensity 1 for shots without a target.
constexpr double kUntargetedZoomDelta = 0.5;
constexpr double kArcMinPitch = 45.0;
// Largest bearing change between two keyframes of an orbit or roll.
constexpr double kMaxSegmentSweep = 45.0;
// Arc keeps at least 8 intermediate keyframes.
constexpr int kArcMinSegments = 9;
constexpr int kTrackingMinSamples = 16;
constexpr double kSampleMergeEps = 1e-9;

double clampZoom(double z) { return std::clamp(z, kMinZoom, kMaxZoom); }

GeoBounds framingBounds(const GeospatialTarget& target, const PlanContext& ctx) {
    return ctx.framingBounds ? *ctx.framingBounds : boundsOf(target);
}

GeoPoint fitCenter(const GeoBounds& b) { return unproject(project(b).center()); }

// Bounds scaled about their projected center, clipped to the world square.
GeoBounds scaleBounds(const GeoBounds& b, double factor) {
    const auto mb = project(b);
    const auto c = mb.center();
    const double hw = mb.width() / 2.0 * factor;
    const double hh = mb.height() / 2.0 * factor;
    const auto nw = unprojectClamped({c.x - hw, c.y - hh});
    const auto se = unprojectClamped({c.x + hw, c.y + hh});
    return {nw.lon, se.lat, se.lon, nw.lat};
}

double signedSweep(const ShotParams& params, double fallback) {
    const double magnitude = params.sweep.value_or(fallback);
    return params.direction == SweepDirection::Clockwise ? magnitude : -magnitude;
}

// Bearing sweep around a fixed center, split so no segment exceeds 45°.
std::vector<Keyframe> bearingSweep(const CameraState& start, double sweep, double duration, int minSegments) {
    const int segments = std::max(minSegments, static_cast<int>(std::ceil(std::abs(sweep) / kMaxSegmentSweep)));
    std::vector<Keyframe> out;
    out.reserve(segments + 1);
    for (int i = 0; i <= segments; ++i) {
        const double f = static_cast<double>(i) / segments;
        CameraState s = start;
        s.bearing = normalizeBearing(start.bearing + f * sweep);
        out.push_back({f * duration, s});
    }
    out.back().time = duration;
    return out;
}

std::vector<Keyframe> twoKeyframes(const CameraState& a, const CameraState& b, double duration) {
    return {{0.0, a}, {duration, b}};
}

std::vector<Keyframe> panKeyframes(const GeospatialTarget& target, const CameraState& current,
                                   const Viewport& viewport, const ShotParams& params, const PlanContext& ctx,
                                   double duration) {
    std::vector<GeoPoint> stops;
    switch (target.kind()) {
        case TargetKind::None: {
            // Drift toward screen-right by up to half a viewport width.
            const double px = params.intensity * viewport.width / 2.0;
            const double world = px / (kTileSize * std::exp2(current.zoom));
            const double b = toRadians(current.bearing);
            const auto c = project(current.center);
            stops.push_back(unprojectClamped({c.x + world * std::cos(b), c.y + world * std::sin(b)}));
            break;
        }
        case TargetKind::Multiple:
            // Visit members one at a time rather than framing the whole set.
            for (const auto& m : target.members()) stops.push_back(fitCenter(boundsOf(GeospatialTarget::of(m))));
            break;
        default: stops.push_back(fitCenter(framingBounds(target, ctx))); break;
    }

    std::vector<MercatorPoint> world{project(current.center)};
    std::vector<GeoPoint> centers{current.center};
    for (const auto& s : stops) {
        const auto p = project(s);
        if (p == world.back()) continue;
        world.push_back(p);
        centers.push_back(s);
    }
    if (centers.size() == 1) return twoKeyframes(current, current, duration);

    std::vector<double> cumulative{0.0};
    for (std::size_t i = 1; i < world.size(); ++i) {
        cumulative.push_back(cumulative.back() + std::hypot(world[i].x - world[i - 1].x, world[i].y - world[i - 1].y));
    }
    std::vector<Keyframe> out;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        CameraState s = current;
        s.center = centers[i];
        out.push_back({duration * cumulative[i] / cumulative.back(), s});
    }
    out.front().time = 0.0;
    out.back().time = duration;
    return out;
}

std::vector<Keyframe> trackingKeyframes(const GeospatialTarget& target, const CameraState& current,
                                        const Viewport& viewport, const ShotParams& params, double duration) {
    const auto& path = std::get<Path>(*target.single()).polyline;
    const auto& v = path.vertices();

    struct Sample {
        double s;
        GeoPoint point;
        double bearing;
    };
    std::vector<Sample> samples;
    std::vector<MercatorPoint> world;
    for (const auto& p : v) world.push_back(project(p));
    std::vector<double> cumulative{0.0};
    for (std::size_t i = 1; i < world.size(); ++i) {
        cumulative.push_back(cumulative.back() + std::hypot(world[i].x - world[i - 1].x, world[i].y - world[i - 1].y));
    }
    const double total = cumulative.back();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t seg = i + 1 < v.size() ? i : i - 1;
        samples.push_back({cumulative[i] / total, v[i], projectedAzimuth(world[seg], world[seg + 1])});
    }
    samples.front().s = 0.0;
    samples.back().s = 1.0;
    for (int k = 1; k < kTrackingMinSamples; ++k) {
        const double s = static_cast<double>(k) / kTrackingMinSamples;
        const bool nearVertex = std::any_of(samples.begin(), samples.begin() + static_cast<long>(v.size()),
                                            [&](const Sample& x) { return std::abs(x.s - s) < kSampleMergeEps; });
        if (nearVertex) continue;
        const auto pos = pointAlongPath(path, s);
        samples.push_back({s, pos.point, pos.bearing});
    }
    std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.s < b.s; });

    const double lat = centroidOf(target).lat;
    const double metersPerPixel = params.trackingWindowMeters / viewport.width;
    const double zoom =
        clampZoom(std::log2(std::cos(toRadians(lat)) * 2.0 * std::numbers::pi * kEarthRadiusMeters /
                            (kTileSize * metersPerPixel)));

    std::vector<Keyframe> out;
    out.reserve(samples.size());
    for (const auto& sample : samples) {
        CameraState s = current;
        s.center = sample.point;
        s.zoom = zoom;
        s.bearing = params.alignBearingToPath ? sample.bearing : current.bearing;
        out.push_back({sample.s * duration, s});
    }
    out.back().time = duration;
    return out;
}

void finish(MovementPlan& plan, std::vector<Keyframe> keyframes, double motion, double hold) {
    plan.keyframes = std::move(keyframes);
    plan.motionEnd = motion;
    if (hold > 0.0) plan.keyframes.push_back({motion + hold, plan.keyframes.back().state});
    validate(plan);
}

}  // namespace

std::string_view toString(NarrativePurpose purpose) { return kPurposeNames[static_cast<std::size_t>(purpose)]; }
std::string_view toString(ShotType shot) { return kShotNames[static_cast<std::size_t>(shot)]; }

NarrativePurpose parsePurpose(std::string_view text) {
    for (std::size_t i = 0; i < kPurposeNames.size(); ++i) {
        if (kPurposeNames[i] == text) return static_cast<NarrativePurpose>(i);
    }
    throw ValidationError("unknown narrative purpose '" + std::string(text) +
                              "'; expected one of Emphasize, Overview, Compare, Supplement, Dynamics",
                          "purpose");
}

ShotType parseShotType(std::string_view text) {
    for (std::size_t i = 0; i < kShotNames.size(); ++i) {
        if (kShotNames[i] == text) return static_cast<ShotType>(i);
    }
    throw ValidationError("unknown shot '" + std::string(text) + "'; valid shots are " +
                              std::string(kValidShotNames),
                          "shot");
}

std::string shotLabel(const Shot& shot) {
    std::string s(toString(shot.type));
    if (shot.whip) s += "(whip)";
    return s;
}

void validate(const ShotParams& p) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(p.intensity) || p.intensity < 0.0 || p.intensity > 1.0) {
        throw ValidationError("intensity must be in [0, 1]", "intensity");
    }
    if (!finite(p.duration) || p.duration <= 0.0) throw ValidationError("duration must be positive", "duration");
    if (!finite(p.marginFrac) || p.marginFrac < 0.0 || p.marginFrac > kMaxMarginFrac) {
        throw ValidationError("marginFrac must be in [0, 0.45]", "marginFrac");
    }
    if (p.sweep && !finite(*p.sweep)) throw ValidationError("sweep must be finite", "sweep");
    if (!finite(p.hold) || p.hold < 0.0) throw ValidationError("hold must be non-negative", "hold");
    if (!finite(p.trackingWindowMeters) || p.trackingWindowMeters <= 0.0) {
        throw ValidationError("trackingWindowMeters must be positive", "trackingWindowMeters");
    }
}

void validate(const MovementPlan& plan) {
    if (plan.keyframes.size() < 2) throw ValidationError("a plan needs at least 2 keyframes", "keyframes");
    if (plan.keyframes.front().time != 0.0) throw ValidationError("plan keyframes must start at 0", "keyframes");
    for (std::size_t i = 1; i < plan.keyframes.size(); ++i) {
        if (!(plan.keyframes[i].time > plan.keyframes[i - 1].time)) {
            throw ValidationError("plan keyframe times must be strictly increasing", "keyframes");
        }
    }
    if (plan.shots.empty() || plan.shots.size() > 2) {
        throw ValidationError("a camera design holds one or two shots", "shots");
    }
    if (!(plan.motionEnd > 0.0) || plan.motionEnd > plan.duration()) {
        throw ValidationError("plan motion end must lie within the plan", "motionEnd");
    }
    for (const auto& k : plan.keyframes) validate(k.state);
}

CameraState MovementPlan::keyframeState(double t) const {
    if (t <= keyframes.front().time) return keyframes.front().state;
    if (t >= keyframes.back().time) return keyframes.back().state;
    const auto next = std::upper_bound(keyframes.begin(), keyframes.end(), t,
                                       [](double value, const Keyframe& k) { return value < k.time; });
    const auto prev = next - 1;
    if (prev->time == t) return prev->state;
    const double local = (t - prev->time) / (next->time - prev->time);
    return interpolate(prev->state, next->state, local, Easing::Linear);
}

CameraState MovementPlan::sample(double t) const {
    if (!std::isfinite(t) || t < 0.0 || t > duration()) throw ValidationError("plan time out of range", "t");
    if (t >= motionEnd) return final();
    return keyframeState(motionEnd * applyEasing(easing, t / motionEnd));
}

void checkPurposeTarget(NarrativePurpose purpose, TargetKind kind) {
    if (purpose == NarrativePurpose::Compare && kind != TargetKind::Multiple) {
        throw MismatchError("comparison requires multiple targets (Compare only serves a set of targets, got " +
                            std::string(toString(kind)) + ")");
    }
    if (purpose == NarrativePurpose::Dynamics && kind != TargetKind::None) {
        throw MismatchError("increasing dynamics requires no target (Dynamics is for moments with no target "
                            "selected, got " +
                            std::string(toString(kind)) + ")");
    }
}

MovementPlan planShot(const Shot& shot, const GeospatialTarget& target, std::optional<NarrativePurpose> purpose,
                      const CameraState& current, const Viewport& viewport, const ShotParams& params,
                      const PlanContext& context) {
    validate(current);
    validate(viewport);
    validate(params);
    if (purpose) checkPurposeTarget(*purpose, target.kind());
    if (shot.whip && shot.type != ShotType::Pan) throw ValidationError("whip applies only to Pan", "whip");
    if (shot.type == ShotType::Tracking && target.kind() != TargetKind::Path) {
        throw MismatchError("Tracking requires a Path target, got " + std::string(toString(target.kind())));
    }
    if ((shot.type == ShotType::Arc || shot.type == ShotType::Roll) && params.sweep && *params.sweep == 0.0) {
        throw ValidationError(std::string(toString(shot.type)) + " sweep must be nonzero", "sweep");
    }

    PlanContext ctx = context;
    ctx.fit.fov = current.fov;
    const double motion = shot.whip ? params.duration / 4.0 : params.duration;
    const bool untargeted = target.isNone();

    MovementPlan plan;
    plan.easing = params.easing;
    plan.target = target;
    plan.purpose = purpose;
    plan.shots = {shot};

    switch (shot.type) {
        case ShotType::Static: finish(plan, twoKeyframes(current, current, motion), motion, params.hold); break;

        case ShotType::PushIn: {
            CameraState end = current;
            if (untargeted) {
                end.zoom = clampZoom(current.zoom + kUntargetedZoomDelta * params.intensity);
            } else {
                end = fitBounds(framingBounds(target, ctx), viewport, params.marginFrac, current.pitch,
                                  current.bearing, ctx.fit);
            }
            finish(plan, twoKeyframes(current, end, motion), motion, params.hold);
            break;
        }

        case ShotType::PullOut: {
            CameraState end = current;
            const double factor = 1.0 + 2.0 * params.intensity;
            if (untargeted) {
                end.zoom = clampZoom(current.zoom - kUntargetedZoomDelta * params.intensity);
            } else if (const auto frame = framingBounds(target, ctx); frame.isPoint()) {
                // A point has no extent to inflate; back off by the same factor.
                end.center = frame.southWest();
                end.zoom = clampZoom(std::min(current.zoom, ctx.fit.maxFitZoom) - std::log2(factor));
            } else {
                end = fitBounds(scaleBounds(frame, factor), viewport, params.marginFrac, current.pitch,
                                  current.bearing, ctx.fit);
            }
            finish(plan, twoKeyframes(current, end, motion), motion, params.hold);
            break;
        }

        case ShotType::Pan:
            finish(plan, panKeyframes(target, current, viewport, params, ctx, motion), motion, params.hold);
            break;

        case ShotType::Tilt: {
            CameraState end = current;
            end.pitch = std::clamp(current.pitch + params.sweep.value_or(30.0 * (1.0 + params.intensity)), 0.0,
                                     kMaxPitch);
            finish(plan, twoKeyframes(current, end, motion), motion, params.hold);
            break;
        }

        case ShotType::Roll: {
            CameraState start = current;
            if (!untargeted) start.center = centroidOf(target);
            finish(plan, bearingSweep(start, signedSweep(params, 45.0 * (1.0 + params.intensity)), motion, 1), motion,
                   params.hold);
            break;
        }

        case ShotType::Arc: {
            CameraState start = current;
            if (!untargeted) start.center = centroidOf(target);
            start.pitch = std::min(kMaxPitch, std::max(current.pitch, kArcMinPitch));
            finish(plan,
                   bearingSweep(start, signedSweep(params, 90.0 * (1.0 + params.intensity)), motion, kArcMinSegments),
                   motion, params.hold);
            break;
        }

        case ShotType::Tracking:
            finish(plan, trackingKeyframes(target, current, viewport, params, motion), motion, params.hold);
            break;
    }
    return plan;
}

MovementPlan planManual(const std::vector<Shot>& shots, const GeospatialTarget& target,
                        std::optional<NarrativePurpose> purpose, const CameraState& initial,
                        const CameraState& end, const ShotParams& params) {
    validate(initial);
    validate(end);
    validate(params);
    if (purpose) checkPurposeTarget(*purpose, target.kind());
    if (initial.fov != end.fov) throw ValidationError("initial and end fov must match", "fov");
    MovementPlan plan;
    plan.easing = params.easing;
    plan.target = target;
    plan.purpose = purpose;
    plan.shots = shots;
    finish(plan, twoKeyframes(initial, end, params.duration), params.duration, params.hold);
    return plan;
}

std::vector<std::string> variedParameters(const MovementPlan& plan) {
    const auto& first = plan.initial();
    bool zoom = false, pitch = false, bearing = false, center = false;
    for (const auto& k : plan.keyframes) {
        zoom = zoom || k.state.zoom != first.zoom;
        pitch = pitch || k.state.pitch != first.pitch;
        bearing = bearing || k.state.bearing != first.bearing;
        center = center || k.state.center != first.center;
    }
    std::vector<std::string> out;
    if (zoom) out.emplace_back("zoom");
    if (pitch) out.emplace_back("pitch");
    if (bearing) out.emplace_back("bearing");
    if (center) out.emplace_back("center");
    return out;
}

MovementPlan combineShots(const MovementPlan& a, const MovementPlan& b) {
    validate(a);
    validate(b);
    if (!(a.target == b.target)) throw ValidationError("combined shots must serve the same target", "target");
    if (std::abs(a.duration() - b.duration()) > 1e-9 || std::abs(a.motionEnd - b.motionEnd) > 1e-9) {
        throw ValidationError("combined shots must have the same duration", "duration");
    }
    if (a.easing != b.easing) throw ValidationError("combined shots must use the same easing", "easing");

    const auto va = variedParameters(a);
    const auto vb = variedParameters(b);
    for (const auto& p : va) {
        if (std::find(vb.begin(), vb.end(), p) != vb.end()) {
            throw ConflictError("conflicting parameter: " + p, p);
        }
    }
    auto varies = [&](const char* name) { return std::find(vb.begin(), vb.end(), name) != vb.end(); };

    std::vector<double> times;
    for (const auto& k : a.keyframes) times.push_back(k.time);
    for (const auto& k : b.keyframes) times.push_back(k.time);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end(), [](double x, double y) { return std::abs(x - y) <= 1e-12; }),
                times.end());

    MovementPlan out;
    out.easing = a.easing;
    out.target = a.target;
    out.purpose = a.purpose;
    out.motionEnd = a.motionEnd;
    out.shots = a.shots;
    for (const auto& s : b.shots) {
        if (std::find(out.shots.begin(), out.shots.end(), s) == out.shots.end()) out.shots.push_back(s);
    }
    for (double t : times) {
        CameraState s = a.keyframeState(t);
        const CameraState sb = b.keyframeState(t);
        if (varies("zoom")) s.zoom = sb.zoom;
        if (varies("pitch")) s.pitch = sb.pitch;
        if (varies("bearing")) s.bearing = sb.bearing;
        if (varies("center")) s.center = sb.center;
        out.keyframes.push_back({t, s});
    }
    out.keyframes.back().time = a.duration();
    validate(out);
    return out;
}

}  // namespace mapreel
