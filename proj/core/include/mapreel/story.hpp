#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mapreel/ingest.hpp"
#include "mapreel/shots.hpp"
#include "mapreel/trajectory.hpp"

namespace mapreel {

// Schema violation; field() holds the JSON path, e.g. $.scenes[1].designs[0].shot.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& path, const std::string& message)
        : ValidationError(path + ": " + message, path) {}
};

struct DatasetRef {
    std::string id;
    DocumentFormat format = DocumentFormat::GeoJson;
    std::optional<std::string> path;  // relative to the story file
    DelimitedOptions delimited;
};

struct LayerSpec {
    std::string id;
    std::string data;
    LayerKind kind = LayerKind::Scatter;
    double cellRadius = 0.0;
    double heightScale = 1.0;
};

struct TargetSpec {
    enum class Form { None, FeatureId, Name, Point, Region, Path, Lasso, Multiple };

    Form form = Form::None;
    std::string ref;                  // FeatureId / Name
    std::optional<std::string> data;  // restricts FeatureId / Name / Lasso lookups
    std::optional<std::string> name;  // label for inline geometry
    std::vector<GeoPoint> coordinates;
    std::vector<TargetSpec> members;
    std::string path;

    // Target kind when it is fixed by the document alone (lasso is not).
    std::optional<TargetKind> staticKind() const;
};

// Shot parameters as written; unset fields fall back to the shot table and
// then to the story defaults.
struct ParamsSpec {
    std::optional<double> intensity;
    std::optional<double> duration;
    std::optional<double> marginFrac;
    std::optional<double> sweep;
    std::optional<SweepDirection> direction;
    std::optional<bool> alignBearingToPath;
    std::optional<double> hold;
    std::optional<double> trackingWindowMeters;
    std::optional<Easing> easing;
};

struct DesignSpec {
    std::optional<NarrativePurpose> purpose;
    TargetSpec target;
    std::vector<Shot> shots;  // empty: take the default for purpose and target
    ParamsSpec params;
    std::optional<std::string> annotation;
    // Timeline span of the movement; the plan is rescaled to fit it.
    std::optional<double> duration;
    std::optional<CameraState> initial;  // manual mode
    std::optional<CameraState> final;
    std::string path;

    bool manual() const { return initial.has_value(); }
};

enum class LayoutKind { Full, SideBySide, PictureInPicture };

std::string_view toString(LayoutKind layout);

struct SceneSpec {
    std::string id;
    LayoutKind layout = LayoutKind::Full;
    double insetFraction = 0.3;
    double gapBefore = 0.0;
    std::vector<DesignSpec> designs;
    std::string path;
};

struct StoryDefaults {
    double marginFrac = 0.1;
    int fps = 30;
    Easing easing = Easing::Linear;
    GapFillMode gapFill = GapFillMode::FlyTo;
    double maxFitZoom = kDefaultMaxFitZoom;
    std::optional<CameraState> initialState;
    std::optional<std::string> initialSnapshot;
};

struct Story {
    std::vector<DatasetRef> data;
    std::vector<LayerSpec> layers;
    std::vector<SceneSpec> scenes;
    std::map<std::string, CameraState> snapshots;
    StoryDefaults defaults;
    // "$.path = value" for every default the parser filled in.
    std::vector<std::string> injectedDefaults;
};

// Strict: unknown fields, bad enumerations, duplicate ids, dangling
// references, and purpose/target mismatches visible in the document are
// all rejected with the JSON path of the offending value.
Story parseStory(std::string_view text);

struct Dataset {
    std::string id;
    std::vector<Feature> features;
};

// Reads every dataset of the story. `overrides` maps dataset id to a file
// path; other paths resolve against `baseDir`. Throws IoError when a file
// cannot be read and IngestError when its content is bad.
std::vector<Dataset> loadDatasets(const Story& story, const std::filesystem::path& baseDir,
                                  const std::map<std::string, std::filesystem::path>& overrides = {});

struct ResolvedDesign {
    DesignSpec spec;
    GeospatialTarget target;
    std::string label;
};

struct ResolvedScene {
    std::string id;
    LayoutKind layout = LayoutKind::Full;
    double insetFraction = 0.3;
    double gapBefore = 0.0;
    std::vector<ResolvedDesign> designs;
    std::string path;
};

struct NamedLayer {
    LayerSpec spec;
    DataLayer layer;
};

struct ResolvedStory {
    Story story;
    std::vector<Dataset> datasets;
    std::vector<NamedLayer> layers;
    std::vector<ResolvedScene> scenes;
};

// Turns every target spec into a concrete target and builds the layers.
// Errors name the 1-based scene number and the spec.
ResolvedStory resolveTargets(const Story& story, std::vector<Dataset> datasets);

// Reads a story file, its datasets (relative to the file), and resolves it.
// Throws IoError for unreadable files.
ResolvedStory loadResolvedStory(const std::filesystem::path& storyFile,
                                const std::map<std::string, std::filesystem::path>& overrides = {});

// Story document reader for camera states: {lon, lat, zoom, pitch?, bearing?}.
CameraState cameraStateFromJson(const nlohmann::json& j, const std::string& path);
nlohmann::json cameraStateToJson(const CameraState& state);

}  // namespace mapreel
