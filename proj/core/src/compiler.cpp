#include "mapreel/compiler.hpp"

#include <algorithm>
#include <cmath>

namespace mapreel {

namespace {

ShotParams resolveParams(const DesignSpec& design, const std::optional<ShotDefault>& fallback,
                         const StoryDefaults& defaults) {
    ShotParams p = fallback ? fallback->params : ShotParams{};
    p.marginFrac = defaults.marginFrac;
    p.easing = defaults.easing;
    const auto& s = design.params;
    if (s.intensity) p.intensity = *s.intensity;
    if (s.duration) p.duration = *s.duration;
    if (s.marginFrac) p.marginFrac = *s.marginFrac;
    if (s.sweep) p.sweep = *s.sweep;
    if (s.direction) p.direction = *s.direction;
    if (s.alignBearingToPath) p.alignBearingToPath = *s.alignBearingToPath;
    if (s.hold) p.hold = *s.hold;
    if (s.trackingWindowMeters) p.trackingWindowMeters = *s.trackingWindowMeters;
    if (s.easing) p.easing = *s.easing;
    return p;
}

std::optional<GeoBounds> framingBounds(const ResolvedStory& story, const GeospatialTarget& target) {
    if (target.isNone()) return std::nullopt;
    std::optional<GeoBounds> out;
    for (const auto& l : story.layers) {
        if (l.layer.kind != LayerKind::Hexagon3D) continue;
        const auto b = inflatedBounds(target, l.layer);
        if (out) out->extend(b);
        else out = b;
    }
    return out;
}

struct Planned {
    MovementPlan plan;
    std::vector<Shot> shots;
};

Planned planDesign(const ResolvedStory& story, const ResolvedDesign& design, const CameraState& current,
                   const Viewport& viewport, const ShotTable& table) {
    const auto& spec = design.spec;
    const auto& defaults = story.story.defaults;
    std::optional<ShotDefault> fallback;
    if (spec.purpose) fallback = table.lookup(*spec.purpose, design.target.kind());
    const ShotParams params = resolveParams(spec, fallback, defaults);
    const std::vector<Shot> shots = spec.shots.empty() ? std::vector<Shot>{fallback->shot} : spec.shots;

    if (spec.manual()) {
        return {planManual(shots, design.target, spec.purpose, *spec.initial, *spec.final, params), shots};
    }
    PlanContext ctx;
    ctx.framingBounds = framingBounds(story, design.target);
    ctx.fit.maxFitZoom = defaults.maxFitZoom;
    ctx.fit.fov = current.fov;
    MovementPlan plan = planShot(shots[0], design.target, spec.purpose, current, viewport, params, ctx);
    if (shots.size() == 2) {
        plan = combineShots(plan, planShot(shots[1], design.target, spec.purpose, current, viewport, params, ctx));
    }
    return {std::move(plan), shots};
}

std::vector<ViewportWindow> windowsFor(const ResolvedScene& scene, const Viewport& vp) {
    const ViewportWindow full{0, 0, vp.width, vp.height};
    switch (scene.layout) {
        case LayoutKind::Full: return {full};
        case LayoutKind::SideBySide: {
            const int half = vp.width / 2;
            return {{0, 0, half, vp.height}, {half, 0, vp.width - half, vp.height}};
        }
        case LayoutKind::PictureInPicture: {
            const int w = std::max(1, static_cast<int>(std::lround(vp.width * scene.insetFraction)));
            const int h = std::max(1, static_cast<int>(std::lround(vp.height * scene.insetFraction)));
            return {full, {vp.width - w, 0, w, h}};
        }
    }
    return {full};
}

[[noreturn]] void rethrowInScene(const ValidationError& e, std::size_t index, const ResolvedScene& scene,
                                 const std::string& path) {
    throw ValidationError("scene " + std::to_string(index + 1) + " ('" + scene.id + "'): " + e.what(), path);
}

}  // namespace

long firstFrameAt(double seconds, int fps) { return static_cast<long>(std::ceil(seconds * fps - 1e-9)); }

long lastFrameAt(double seconds, int fps) { return static_cast<long>(std::floor(seconds * fps + 1e-9)); }

std::size_t frameCount(double duration, int fps) {
    if (duration <= 0.0) return 0;
    return static_cast<std::size_t>(lastFrameAt(duration, fps)) + 1;
}

CameraState initialStateFor(const ResolvedStory& story, const Viewport& viewport) {
    const auto& d = story.story.defaults;
    if (d.initialState) return *d.initialState;
    if (d.initialSnapshot) return story.story.snapshots.at(*d.initialSnapshot);
    std::optional<GeoBounds> extent;
    for (const auto& ds : story.datasets) {
        for (const auto& f : ds.features) {
            const auto b = boundsOf(toTarget(f));
            if (extent) extent->extend(b);
            else extent = b;
        }
    }
    if (!extent) return CameraState{{0.0, 0.0}, 1.0, 0.0, 0.0, kDefaultFov};
    return fitBounds(*extent, viewport, d.marginFrac, 0.0, 0.0, {d.maxFitZoom, kDefaultFov});
}

CameraScript scheduleStory(const ResolvedStory& story, const CompileOptions& options) {
    validate(options.viewport);
    const ShotTable& table = options.table ? *options.table : ShotTable::builtin();
    CameraScript script;
    script.fps = options.fps.value_or(story.story.defaults.fps);
    if (script.fps <= 0) throw ValidationError("fps must be positive", "fps");
    script.viewport = options.viewport;
    script.gapFill = story.story.defaults.gapFill;

    CameraState current = initialStateFor(story, options.viewport);
    std::optional<CameraState> secondary;

    for (std::size_t i = 0; i < story.scenes.size(); ++i) {
        const auto& scene = story.scenes[i];
        const auto windows = windowsFor(scene, options.viewport);
        const CameraState sceneStart = current;
        for (std::size_t k = 0; k < scene.designs.size(); ++k) {
            const auto& design = scene.designs[k];
            MovementRecord rec;
            rec.id = k == 0 ? scene.id : scene.id + "-2";
            rec.sceneId = scene.id;
            rec.sceneIndex = i;
            rec.track = static_cast<int>(k);
            rec.purpose = design.spec.purpose;
            rec.label = design.label;
            rec.target = design.target;
            rec.window = windows[k];
            try {
                const CameraState& from = k == 0 ? sceneStart : secondary.value_or(sceneStart);
                auto planned = planDesign(story, design, from, windows[k].size(), table);
                rec.shots = planned.shots;
                if (k == 0) {
                    AppendOptions ao;
                    ao.id = rec.id;
                    ao.annotation = design.spec.annotation;
                    ao.duration = design.spec.duration;
                    ao.manualOverride = design.spec.manual();
                    ao.gapBefore = scene.gapBefore;
                    script.timeline = appendMovement(script.timeline, planned.plan, ao);
                    rec.movement = *script.timeline.find(rec.id);
                    current = rec.movement.endState();
                } else {
                    // The second design shares the scene's window on its own track.
                    const auto& primary = script.movements.back().movement;
                    rec.movement.id = rec.id;
                    rec.movement.plan = std::move(planned.plan);
                    rec.movement.startTime = primary.startTime;
                    rec.movement.duration = primary.duration;
                    rec.movement.annotation = design.spec.annotation;
                    rec.movement.manualOverride = design.spec.manual();
                    secondary = rec.movement.endState();
                }
            } catch (const ValidationError& e) {
                rethrowInScene(e, i, scene, design.spec.path);
            }
            script.movements.push_back(std::move(rec));
        }
    }

    script.timeline = fillGaps(script.timeline, {script.gapFill, static_cast<double>(options.viewport.width)});
    for (auto& rec : script.movements) {
        if (rec.track == 0) rec.movement = *script.timeline.find(rec.id);
        rec.startFrame = firstFrameAt(rec.movement.startTime, script.fps);
        rec.endFrame = lastFrameAt(rec.movement.endTime(), script.fps);
    }
    script.duration = script.timeline.endTime();
    return script;
}

CameraScript compile(const ResolvedStory& story, const CompileOptions& options) {
    CameraScript script = scheduleStory(story, options);
    const std::size_t n = frameCount(script.duration, script.fps);
    if (n == 0) return script;

    const ViewportWindow full{0, 0, script.viewport.width, script.viewport.height};
    const auto segs = segments(script.timeline);
    const bool split = std::any_of(script.movements.begin(), script.movements.end(),
                                   [](const MovementRecord& r) { return r.track == 1; });

    auto windowOf = [&](const Segment& s) {
        if (!s.movement) return full;
        for (const auto& r : script.movements) {
            if (r.track == 0 && r.id == s.movement->id) return r.window;
        }
        return full;
    };

    ScriptTrack primary;
    primary.frames.reserve(n);
    std::size_t seg = 0;
    for (std::size_t f = 0; f < n; ++f) {
        const double t = std::min(static_cast<double>(f) / script.fps, script.duration);
        while (seg + 1 < segs.size() && t >= segs[seg].endTime) ++seg;
        ScriptFrame frame;
        frame.t = t;
        frame.state = segs[seg].stateAt(t);
        frame.window = windowOf(segs[seg]);
        frame.altitudeMeters = cameraAltitudeMeters(frame.state, frame.window.size());
        primary.frames.push_back(frame);
    }
    script.tracks.push_back(std::move(primary));

    if (split) {
        ScriptTrack second;
        second.frames.reserve(n);
        for (std::size_t f = 0; f < n; ++f) {
            const auto& base = script.tracks[0].frames[f];
            ScriptFrame frame;
            frame.t = base.t;
            frame.state = base.state;
            const MovementRecord* active = nullptr;
            for (const auto& r : script.movements) {
                if (r.track != 1 || base.t < r.movement.startTime - 1e-12 || base.t > r.movement.endTime() + 1e-12) {
                    continue;
                }
                // At a shared boundary the later movement wins.
                if (!active || r.movement.startTime > active->movement.startTime) active = &r;
            }
            if (active) {
                frame.state = active->movement.stateAt(base.t - active->movement.startTime);
                frame.window = active->window;
                frame.altitudeMeters = cameraAltitudeMeters(frame.state, frame.window.size());
            }
            second.frames.push_back(frame);
        }
        script.tracks.push_back(std::move(second));
    }

    const long last = static_cast<long>(n) - 1;
    for (const auto& r : script.movements) {
        if (!r.movement.annotation) continue;
        script.annotations.push_back(
            {*r.movement.annotation, r.id, r.track, std::min(r.startFrame, last), std::min(r.endFrame, last)});
    }
    return script;
}

}  // namespace mapreel
