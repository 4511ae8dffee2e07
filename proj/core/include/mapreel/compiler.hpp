#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mapreel/shot_table.hpp"
#include "mapreel/story.hpp"
#include "mapreel/timeline.hpp"

namespace mapreel {

struct CompileOptions {
    Viewport viewport{1280, 720};
    std::optional<int> fps;             // story default when unset
    const ShotTable* table = nullptr;   // builtin table when null
};

// Pixel rectangle of the output frame a track draws into.
struct ViewportWindow {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    Viewport size() const { return {width, height}; }
    bool empty() const { return width <= 0 || height <= 0; }
    friend bool operator==(const ViewportWindow&, const ViewportWindow&) = default;
};

// One authored camera design as placed on a track.
struct MovementRecord {
    std::string id;
    std::string sceneId;
    std::size_t sceneIndex = 0;
    int track = 0;
    std::optional<NarrativePurpose> purpose;
    std::vector<Shot> shots;
    std::string label;
    GeospatialTarget target;
    ViewportWindow window;
    CameraMovement movement;
    long startFrame = 0;  // first and last frame inside [start, end]
    long endFrame = 0;
};

struct ScriptFrame {
    double t = 0.0;
    CameraState state;
    ViewportWindow window;  // empty when the track is idle
    double altitudeMeters = 0.0;
};

struct ScriptTrack {
    std::vector<ScriptFrame> frames;
};

struct ScriptAnnotation {
    std::string text;
    std::string movementId;
    int track = 0;
    long startFrame = 0;
    long endFrame = 0;
};

struct CameraScript {
    int fps = 30;
    double duration = 0.0;
    Viewport viewport;
    std::vector<ScriptTrack> tracks;
    std::vector<ScriptAnnotation> annotations;
    std::vector<MovementRecord> movements;  // authored movements in timeline order
    Timeline timeline;                      // track 0, with fillers
    GapFillMode gapFill = GapFillMode::FlyTo;
};

// Plans every design and lays the primary track out on a timeline, without
// sampling frames.
CameraScript scheduleStory(const ResolvedStory& story, const CompileOptions& options = {});

// Full compile: schedule, fill gaps, sample every track at fps.
CameraScript compile(const ResolvedStory& story, const CompileOptions& options = {});

// Camera the story opens on: explicit state, named snapshot, a fit of all
// data, or the whole world.
CameraState initialStateFor(const ResolvedStory& story, const Viewport& viewport);

// Frames of [start, start + duration] at fps.
long firstFrameAt(double seconds, int fps);
long lastFrameAt(double seconds, int fps);
std::size_t frameCount(double duration, int fps);

}  // namespace mapreel
