#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mapreel/error.hpp"
#include "mapreel/shots.hpp"
#include "mapreel/trajectory.hpp"

namespace mapreel {

// A planned movement placed on the timeline. `duration` stretches or
// compresses the plan uniformly.
struct CameraMovement {
    std::string id;
    MovementPlan plan;
    double startTime = 0.0;
    double duration = 0.0;
    std::optional<std::string> annotation;
    bool manualOverride = false;

    double endTime() const { return startTime + duration; }
    const CameraState& startState() const { return plan.initial(); }
    const CameraState& endState() const { return plan.final(); }
    // State at `local` seconds into the movement.
    CameraState stateAt(double local) const;
};

// A maximal run of back-to-back movements serving one target.
struct LocationGroup {
    std::string label;
    GeospatialTarget target;
    std::vector<CameraMovement> movements;

    double startTime() const { return movements.front().startTime; }
    double endTime() const { return movements.back().endTime(); }
};

// Fly-to bridge over a gap between groups; serves no target.
struct Filler {
    std::string id;
    double startTime = 0.0;
    Trajectory trajectory;

    double endTime() const { return startTime + trajectory.duration(); }
};

struct Timeline {
    std::vector<LocationGroup> groups;
    std::vector<Filler> fillers;

    // End of the last movement or filler; 0 when empty.
    double endTime() const;
    std::size_t movementCount() const;
    const CameraMovement* find(const std::string& id) const;
    // Movement ids in timeline order.
    std::vector<std::string> movementIds() const;
};

struct AppendOptions {
    std::optional<std::string> id;
    std::optional<std::string> annotation;
    std::optional<double> duration;  // defaults to the plan's own duration
    bool manualOverride = false;
    // Idle time before the movement; only allowed when it opens a new group.
    double gapBefore = 0.0;
};

Timeline appendMovement(const Timeline& timeline, const MovementPlan& plan, const AppendOptions& options = {});

Timeline setDuration(const Timeline& timeline, const std::string& id, double duration);

enum class ViolationKind { Overlap, IntraGroupGap, OutOfOrderGroups, MixedTargets };

std::string_view toString(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::vector<std::string> movementIds;
    std::string message;
};

std::vector<Violation> validate(const Timeline& timeline);

class TimelineError : public ValidationError {
public:
    explicit TimelineError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

struct FillOptions {
    GapFillMode mode = GapFillMode::FlyTo;
    double referenceWidthPx = kTileSize;
};

// Regenerates fillers so movements and fillers tile [0, endTime()]. A gap
// before the first group is held on the first movement's start state.
// Throws TimelineError when validate() reports anything.
Timeline fillGaps(const Timeline& timeline, const FillOptions& options = {});

// One contiguous piece of the tiled timeline.
struct Segment {
    double startTime = 0.0;
    double endTime = 0.0;
    const CameraMovement* movement = nullptr;  // exactly one of these is set
    const Filler* filler = nullptr;

    CameraState stateAt(double t) const;
};

// Movements and fillers in time order.
std::vector<Segment> segments(const Timeline& timeline);

}  // namespace mapreel
