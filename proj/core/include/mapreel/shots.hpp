#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mapreel/camera.hpp"
#include "mapreel/target.hpp"

namespace mapreel {

enum class NarrativePurpose { Emphasize, Overview, Compare, Supplement, Dynamics };

enum class ShotType { Static, PushIn, PullOut, Pan, Tilt, Roll, Arc, Tracking };

inline constexpr std::string_view kValidShotNames = "Static, PushIn, PullOut, Pan, Tilt, Roll, Arc, Tracking";

std::string_view toString(NarrativePurpose purpose);
std::string_view toString(ShotType shot);
NarrativePurpose parsePurpose(std::string_view text);
// Throws ValidationError listing the eight valid names.
ShotType parseShotType(std::string_view text);

struct Shot {
    ShotType type = ShotType::Static;
    bool whip = false;  // Pan only

    friend bool operator==(const Shot&, const Shot&) = default;
};

// "PushIn", or "Pan(whip)" for a whip pan.
std::string shotLabel(const Shot& shot);

enum class SweepDirection { Clockwise, Counterclockwise };

struct ShotParams {
    double intensity = 0.5;
    double duration = 3.0;  // seconds of motion, before any hold
    double marginFrac = 0.1;
    std::optional<double> sweep;  // degrees; Arc, Roll, Tilt
    SweepDirection direction = SweepDirection::Clockwise;
    bool alignBearingToPath = true;  // Tracking
    double hold = 0.0;               // seconds of dwell on the final state
    double trackingWindowMeters = 5000.0;
    Easing easing = Easing::Linear;

    friend bool operator==(const ShotParams&, const ShotParams&) = default;
};

void validate(const ShotParams& params);

struct Keyframe {
    double time = 0.0;
    CameraState state;
};

struct MovementPlan {
    std::vector<Keyframe> keyframes;
    Easing easing = Easing::Linear;
    GeospatialTarget target;
    std::optional<NarrativePurpose> purpose;  // empty in manual mode
    std::vector<Shot> shots;
    // End of the moving part; keyframes after it only hold the final state.
    double motionEnd = 0.0;

    double duration() const { return keyframes.back().time; }
    const CameraState& initial() const { return keyframes.front().state; }
    const CameraState& final() const { return keyframes.back().state; }

    // Camera state at plan time t in [0, duration()], with easing applied
    // over the moving part.
    CameraState sample(double t) const;

    // Piecewise-linear state between keyframes, no easing.
    CameraState keyframeState(double t) const;
};

// Throws ValidationError when keyframe times are not strictly increasing
// from 0, there are fewer than 2 keyframes, or more than two shots.
void validate(const MovementPlan& plan);

// Throws MismatchError for Compare without Multiple and for Dynamics with a target.
void checkPurposeTarget(NarrativePurpose purpose, TargetKind kind);

struct PlanContext {
    // Box to frame instead of boundsOf(target), e.g. inflated for extrusions.
    std::optional<GeoBounds> framingBounds;
    FitOptions fit;
};

MovementPlan planShot(const Shot& shot, const GeospatialTarget& target, std::optional<NarrativePurpose> purpose,
                      const CameraState& current, const Viewport& viewport, const ShotParams& params,
                      const PlanContext& context = {});

// Two-keyframe plan between explicit states; used by manual authoring.
MovementPlan planManual(const std::vector<Shot>& shots, const GeospatialTarget& target,
                        std::optional<NarrativePurpose> purpose, const CameraState& initial,
                        const CameraState& end, const ShotParams& params);

// Camera parameters a plan actually changes, in the fixed order
// zoom, pitch, bearing, center.
std::vector<std::string> variedParameters(const MovementPlan& plan);

// Runs both plans at once. Throws ConflictError naming the first parameter
// both of them vary.
MovementPlan combineShots(const MovementPlan& a, const MovementPlan& b);

}  // namespace mapreel
