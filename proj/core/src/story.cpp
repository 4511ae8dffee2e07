#include "mapreel/story.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mapreel {

namespace {

using nlohmann::json;

std::string joinNames(std::initializer_list<std::string_view> names) {
    std::string s;
    for (auto n : names) {
        if (!s.empty()) s += ", ";
        s += n;
    }
    return s;
}

void checkKeys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ParseError(path, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ParseError(path + "." + key, "unknown field '" + key + "'; allowed fields are " + joinNames(allowed));
        }
    }
}

const json& require(const json& obj, const std::string& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + "." + key, "required field is missing");
    return *it;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ParseError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ParseError(path, "expected a finite number");
    return d;
}

std::string string(const json& v, const std::string& path) {
    if (!v.is_string()) throw ParseError(path, "expected a string");
    return v.get<std::string>();
}

bool boolean(const json& v, const std::string& path) {
    if (!v.is_boolean()) throw ParseError(path, "expected true or false");
    return v.get<bool>();
}

template <class F>
auto rethrowAt(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParseError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ParseError(path, e.what());
    }
}

std::vector<GeoPoint> coordinateList(const json& v, const std::string& path) {
    if (!v.is_array()) throw ParseError(path, "expected an array of [lon, lat] pairs");
    std::vector<GeoPoint> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        const auto& c = v[i];
        if (!c.is_array() || c.size() != 2) throw ParseError(p, "expected [lon, lat]");
        GeoPoint g{number(c[0], p + "[0]"), number(c[1], p + "[1]")};
        rethrowAt(p, [&] { validate(g); });
        out.push_back(g);
    }
    return out;
}

TargetSpec parseTarget(const json& v, const std::string& path, int depth) {
    TargetSpec t;
    t.path = path;
    if (v.is_null()) return t;
    checkKeys(v, path, {"featureId", "name", "point", "region", "path", "lasso", "multiple", "data"});

    int forms = 0;
    for (const char* k : {"featureId", "point", "region", "path", "lasso", "multiple"}) forms += v.contains(k) ? 1 : 0;
    const bool nameIsRef = forms == 0 && v.contains("name");
    if (forms + (nameIsRef ? 1 : 0) != 1) {
        throw ParseError(path, "a target needs exactly one of featureId, name, point, region, path, lasso, multiple");
    }
    if (v.contains("data")) t.data = string(v["data"], path + ".data");

    if (nameIsRef) {
        t.form = TargetSpec::Form::Name;
        t.ref = string(v["name"], path + ".name");
        return t;
    }
    if (v.contains("name")) t.name = string(v["name"], path + ".name");

    if (v.contains("featureId")) {
        t.form = TargetSpec::Form::FeatureId;
        const auto& id = v["featureId"];
        if (id.is_number_integer()) t.ref = std::to_string(id.get<long long>());
        else t.ref = string(id, path + ".featureId");
    } else if (v.contains("point")) {
        t.form = TargetSpec::Form::Point;
        const auto& p = v["point"];
        if (!p.is_array() || p.size() != 2) throw ParseError(path + ".point", "expected [lon, lat]");
        t.coordinates = coordinateList(json::array({p}), path + ".point");
    } else if (v.contains("region")) {
        t.form = TargetSpec::Form::Region;
        t.coordinates = coordinateList(v["region"], path + ".region");
        rethrowAt(path + ".region", [&] { GeoPolygon{t.coordinates}; });
    } else if (v.contains("path")) {
        t.form = TargetSpec::Form::Path;
        t.coordinates = coordinateList(v["path"], path + ".path");
        rethrowAt(path + ".path", [&] { GeoPolyline{t.coordinates}; });
    } else if (v.contains("lasso")) {
        t.form = TargetSpec::Form::Lasso;
        t.coordinates = coordinateList(v["lasso"], path + ".lasso");
        rethrowAt(path + ".lasso", [&] { GeoPolygon{t.coordinates}; });
    } else {
        t.form = TargetSpec::Form::Multiple;
        if (depth > 0) throw ParseError(path + ".multiple", "multiple targets cannot be nested");
        const auto& ms = v["multiple"];
        if (!ms.is_array() || ms.empty()) throw ParseError(path + ".multiple", "expected a non-empty array of targets");
        for (std::size_t i = 0; i < ms.size(); ++i) {
            const std::string p = path + ".multiple[" + std::to_string(i) + "]";
            if (ms[i].is_null()) throw ParseError(p, "a multiple target cannot contain None");
            auto m = parseTarget(ms[i], p, depth + 1);
            if (m.form == TargetSpec::Form::Lasso) throw ParseError(p, "lasso selections cannot be nested in multiple");
            t.members.push_back(std::move(m));
        }
    }
    return t;
}

ParamsSpec parseParams(const json& v, const std::string& path) {
    checkKeys(v, path,
              {"intensity", "duration", "marginFrac", "sweep", "direction", "alignBearingToPath", "hold",
               "trackingWindowMeters", "easing"});
    ParamsSpec p;
    if (v.contains("intensity")) p.intensity = number(v["intensity"], path + ".intensity");
    if (v.contains("duration")) p.duration = number(v["duration"], path + ".duration");
    if (v.contains("marginFrac")) p.marginFrac = number(v["marginFrac"], path + ".marginFrac");
    if (v.contains("sweep")) p.sweep = number(v["sweep"], path + ".sweep");
    if (v.contains("direction")) {
        const auto d = string(v["direction"], path + ".direction");
        if (d == "clockwise") p.direction = SweepDirection::Clockwise;
        else if (d == "counterclockwise") p.direction = SweepDirection::Counterclockwise;
        else throw ParseError(path + ".direction", "expected clockwise or counterclockwise");
    }
    if (v.contains("alignBearingToPath")) {
        p.alignBearingToPath = boolean(v["alignBearingToPath"], path + ".alignBearingToPath");
    }
    if (v.contains("hold")) p.hold = number(v["hold"], path + ".hold");
    if (v.contains("trackingWindowMeters")) {
        p.trackingWindowMeters = number(v["trackingWindowMeters"], path + ".trackingWindowMeters");
    }
    if (v.contains("easing")) {
        const auto e = string(v["easing"], path + ".easing");
        p.easing = rethrowAt(path + ".easing", [&] { return parseEasing(e); });
    }
    // Range checks on whatever was given.
    ShotParams probe;
    probe.intensity = p.intensity.value_or(probe.intensity);
    probe.duration = p.duration.value_or(probe.duration);
    probe.marginFrac = p.marginFrac.value_or(probe.marginFrac);
    probe.sweep = p.sweep;
    probe.hold = p.hold.value_or(probe.hold);
    probe.trackingWindowMeters = p.trackingWindowMeters.value_or(probe.trackingWindowMeters);
    try {
        validate(probe);
    } catch (const ValidationError& e) {
        throw ParseError(path + "." + e.field(), e.what());
    }
    return p;
}

std::vector<Shot> parseShots(const json& v, bool whip, const std::string& path) {
    std::vector<json> names;
    if (v.is_string()) names.push_back(v);
    else if (v.is_array() && !v.empty() && v.size() <= 2) names.assign(v.begin(), v.end());
    else throw ParseError(path, "expected a shot name or an array of one or two shot names");
    std::vector<Shot> out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::string p = v.is_array() ? path + "[" + std::to_string(i) + "]" : path;
        const auto name = string(names[i], p);
        out.push_back({rethrowAt(p, [&] { return parseShotType(name); }), false});
    }
    if (whip) {
        auto it = std::find_if(out.begin(), out.end(), [](const Shot& s) { return s.type == ShotType::Pan; });
        if (it == out.end()) throw ParseError(path, "whip applies only to Pan");
        it->whip = true;
    }
    return out;
}

DesignSpec parseDesign(const json& v, const std::string& path) {
    checkKeys(v, path, {"purpose", "target", "shot", "whip", "params", "annotation", "duration", "initial", "final"});
    DesignSpec d;
    d.path = path;
    if (v.contains("purpose")) {
        const auto s = string(v["purpose"], path + ".purpose");
        d.purpose = rethrowAt(path + ".purpose", [&] { return parsePurpose(s); });
    }
    d.target = parseTarget(v.contains("target") ? v["target"] : json(), path + ".target", 0);
    const bool whip = v.contains("whip") && boolean(v["whip"], path + ".whip");
    if (v.contains("shot")) d.shots = parseShots(v["shot"], whip, path + ".shot");
    else if (whip) throw ParseError(path + ".whip", "whip needs an explicit Pan shot");
    if (v.contains("params")) d.params = parseParams(v["params"], path + ".params");
    if (v.contains("annotation")) d.annotation = string(v["annotation"], path + ".annotation");
    if (v.contains("duration")) {
        d.duration = number(v["duration"], path + ".duration");
        if (*d.duration <= 0.0) throw ParseError(path + ".duration", "must be positive");
    }
    if (v.contains("initial")) d.initial = cameraStateFromJson(v["initial"], path + ".initial");
    if (v.contains("final")) d.final = cameraStateFromJson(v["final"], path + ".final");

    if (d.initial.has_value() != d.final.has_value()) {
        throw ParseError(path, "manual mode needs both initial and final states");
    }
    if (d.manual() && d.shots.empty()) throw ParseError(path + ".shot", "manual mode needs an explicit shot");
    if (!d.purpose && !d.manual()) {
        throw ParseError(path + ".purpose", "purpose is required unless shot, initial, and final are all given");
    }
    if (d.purpose) {
        // Purpose/target rules that the document alone can decide.
        const auto kind = d.target.staticKind();
        const bool hasTarget = d.target.form != TargetSpec::Form::None;
        if (*d.purpose == NarrativePurpose::Dynamics && hasTarget) {
            throw ParseError(path + ".target", "increasing dynamics requires no target (Dynamics is for moments "
                                               "with no target selected)");
        }
        if (*d.purpose == NarrativePurpose::Compare && kind && *kind != TargetKind::Multiple) {
            throw ParseError(path + ".target", "comparison requires multiple targets (Compare only serves a set of "
                                               "targets, got " +
                                                   std::string(toString(*kind)) + ")");
        }
    }
    return d;
}

LayoutKind parseLayout(const std::string& s, const std::string& path) {
    if (s == "Full") return LayoutKind::Full;
    if (s == "SideBySide") return LayoutKind::SideBySide;
    if (s == "PictureInPicture") return LayoutKind::PictureInPicture;
    throw ParseError(path, "unknown layout '" + s + "'; expected Full, SideBySide, or PictureInPicture");
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string readFile(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read data file: " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::optional<TargetKind> TargetSpec::staticKind() const {
    switch (form) {
        case Form::None: return TargetKind::None;
        case Form::Point: return TargetKind::Location;
        case Form::Region: return TargetKind::Region;
        case Form::Path: return TargetKind::Path;
        case Form::Multiple: return TargetKind::Multiple;
        case Form::FeatureId:
        case Form::Name: return std::nullopt;  // Location, Region, or Path; never Multiple
        case Form::Lasso: return std::nullopt;
    }
    return std::nullopt;
}

std::string_view toString(LayoutKind layout) {
    switch (layout) {
        case LayoutKind::Full: return "Full";
        case LayoutKind::SideBySide: return "SideBySide";
        case LayoutKind::PictureInPicture: return "PictureInPicture";
    }
    return "";
}

CameraState cameraStateFromJson(const json& j, const std::string& path) {
    checkKeys(j, path, {"lon", "lat", "zoom", "pitch", "bearing"});
    CameraState s;
    s.center = {number(require(j, path, "lon"), path + ".lon"), number(require(j, path, "lat"), path + ".lat")};
    s.zoom = number(require(j, path, "zoom"), path + ".zoom");
    if (j.contains("pitch")) s.pitch = number(j["pitch"], path + ".pitch");
    if (j.contains("bearing")) s.bearing = normalizeBearing(number(j["bearing"], path + ".bearing"));
    try {
        validate(s);
    } catch (const ValidationError& e) {
        throw ParseError(path + "." + (e.field() == "lon" || e.field() == "lat" ? e.field() : e.field()), e.what());
    }
    return s;
}

json cameraStateToJson(const CameraState& s) {
    return {{"lon", s.center.lon}, {"lat", s.center.lat}, {"zoom", s.zoom}, {"pitch", s.pitch}, {"bearing", s.bearing}};
}

Story parseStory(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("$", std::string("not valid JSON: ") + e.what());
    }
    checkKeys(doc, "$", {"data", "layers", "scenes", "snapshots", "defaults"});

    Story story;
    auto record = [&](const std::string& path, const std::string& value) {
        story.injectedDefaults.push_back(path + " = " + value);
    };

    // defaults
    const json defaults = doc.contains("defaults") ? doc["defaults"] : json::object();
    checkKeys(defaults, "$.defaults",
              {"marginFrac", "fps", "easing", "gapFill", "maxFitZoom", "initialState", "initialSnapshot"});
    auto& d = story.defaults;
    if (defaults.contains("marginFrac")) {
        d.marginFrac = number(defaults["marginFrac"], "$.defaults.marginFrac");
        if (d.marginFrac < 0.0 || d.marginFrac > kMaxMarginFrac) {
            throw ParseError("$.defaults.marginFrac", "must be in [0, 0.45]");
        }
    } else {
        record("$.defaults.marginFrac", fmt(d.marginFrac));
    }
    if (defaults.contains("fps")) {
        const auto& f = defaults["fps"];
        if (!f.is_number_integer() || f.get<long long>() <= 0 || f.get<long long>() > 240) {
            throw ParseError("$.defaults.fps", "expected an integer in [1, 240]");
        }
        d.fps = f.get<int>();
    } else {
        record("$.defaults.fps", std::to_string(d.fps));
    }
    if (defaults.contains("easing")) {
        const auto e = string(defaults["easing"], "$.defaults.easing");
        d.easing = rethrowAt("$.defaults.easing", [&] { return parseEasing(e); });
    } else {
        record("$.defaults.easing", std::string(toString(d.easing)));
    }
    if (defaults.contains("gapFill")) {
        const auto g = string(defaults["gapFill"], "$.defaults.gapFill");
        d.gapFill = rethrowAt("$.defaults.gapFill", [&] { return parseGapFillMode(g); });
    } else {
        record("$.defaults.gapFill", std::string(toString(d.gapFill)));
    }
    if (defaults.contains("maxFitZoom")) {
        d.maxFitZoom = number(defaults["maxFitZoom"], "$.defaults.maxFitZoom");
        if (d.maxFitZoom < kMinZoom || d.maxFitZoom > kMaxZoom) {
            throw ParseError("$.defaults.maxFitZoom", "must be in [0, 22]");
        }
    } else {
        record("$.defaults.maxFitZoom", fmt(d.maxFitZoom));
    }
    if (defaults.contains("initialState") && defaults.contains("initialSnapshot")) {
        throw ParseError("$.defaults", "give initialState or initialSnapshot, not both");
    }
    if (defaults.contains("initialState")) {
        d.initialState = cameraStateFromJson(defaults["initialState"], "$.defaults.initialState");
    }
    if (defaults.contains("initialSnapshot")) {
        d.initialSnapshot = string(defaults["initialSnapshot"], "$.defaults.initialSnapshot");
    }

    // snapshots
    if (doc.contains("snapshots")) {
        const auto& snaps = doc["snapshots"];
        if (!snaps.is_object()) throw ParseError("$.snapshots", "expected an object of named camera states");
        for (const auto& [name, state] : snaps.items()) {
            story.snapshots.emplace(name, cameraStateFromJson(state, "$.snapshots." + name));
        }
    }
    if (d.initialSnapshot && !story.snapshots.contains(*d.initialSnapshot)) {
        throw ParseError("$.defaults.initialSnapshot", "no snapshot named '" + *d.initialSnapshot + "'");
    }

    // data
    std::set<std::string> dataIds;
    if (doc.contains("data")) {
        const auto& data = doc["data"];
        if (!data.is_array()) throw ParseError("$.data", "expected an array of datasets");
        for (std::size_t i = 0; i < data.size(); ++i) {
            const std::string p = "$.data[" + std::to_string(i) + "]";
            checkKeys(data[i], p, {"id", "format", "path", "lonColumn", "latColumn", "idColumn", "nameColumn",
                                   "delimiter"});
            DatasetRef ref;
            ref.id = string(require(data[i], p, "id"), p + ".id");
            if (!dataIds.insert(ref.id).second) throw ParseError(p + ".id", "duplicate dataset id '" + ref.id + "'");
            const auto format = string(require(data[i], p, "format"), p + ".format");
            ref.format = rethrowAt(p + ".format", [&] { return parseDocumentFormat(format); });
            if (data[i].contains("path")) ref.path = string(data[i]["path"], p + ".path");
            auto opt = [&](const char* key, std::string& out) {
                if (!data[i].contains(key)) return;
                if (ref.format != DocumentFormat::Delimited) {
                    throw ParseError(p + "." + key, "only applies to csv datasets");
                }
                out = string(data[i][key], p + "." + key);
            };
            opt("lonColumn", ref.delimited.lonColumn);
            opt("latColumn", ref.delimited.latColumn);
            opt("idColumn", ref.delimited.idColumn);
            opt("nameColumn", ref.delimited.nameColumn);
            if (data[i].contains("delimiter")) {
                std::string delim;
                opt("delimiter", delim);
                if (delim.size() != 1) throw ParseError(p + ".delimiter", "expected a single character");
                ref.delimited.delimiter = delim[0];
            }
            story.data.push_back(std::move(ref));
        }
    }

    // layers
    if (doc.contains("layers")) {
        const auto& layers = doc["layers"];
        if (!layers.is_array()) throw ParseError("$.layers", "expected an array of layers");
        std::set<std::string> ids;
        for (std::size_t i = 0; i < layers.size(); ++i) {
            const std::string p = "$.layers[" + std::to_string(i) + "]";
            checkKeys(layers[i], p, {"id", "data", "kind", "cellRadius", "heightScale"});
            LayerSpec l;
            l.id = string(require(layers[i], p, "id"), p + ".id");
            if (!ids.insert(l.id).second) throw ParseError(p + ".id", "duplicate layer id '" + l.id + "'");
            l.data = string(require(layers[i], p, "data"), p + ".data");
            if (!dataIds.contains(l.data)) throw ParseError(p + ".data", "no dataset with id '" + l.data + "'");
            const auto kind = string(require(layers[i], p, "kind"), p + ".kind");
            l.kind = rethrowAt(p + ".kind", [&] { return parseLayerKind(kind); });
            const bool hex = l.kind == LayerKind::Hexagon3D;
            if (layers[i].contains("cellRadius")) {
                if (!hex) throw ParseError(p + ".cellRadius", "only applies to Hexagon3D layers");
                l.cellRadius = number(layers[i]["cellRadius"], p + ".cellRadius");
                if (l.cellRadius <= 0.0) throw ParseError(p + ".cellRadius", "must be positive");
            } else if (hex) {
                throw ParseError(p + ".cellRadius", "required field is missing");
            }
            if (layers[i].contains("heightScale")) {
                if (!hex) throw ParseError(p + ".heightScale", "only applies to Hexagon3D layers");
                l.heightScale = number(layers[i]["heightScale"], p + ".heightScale");
                if (l.heightScale < 0.0) throw ParseError(p + ".heightScale", "must be non-negative");
            } else if (hex) {
                record(p + ".heightScale", fmt(l.heightScale));
            }
            story.layers.push_back(std::move(l));
        }
    }

    // scenes
    const auto& scenes = require(doc, "$", "scenes");
    if (!scenes.is_array()) throw ParseError("$.scenes", "expected an array of scenes");
    std::set<std::string> sceneIds;
    for (std::size_t i = 0; i < scenes.size(); ++i) {
        const std::string p = "$.scenes[" + std::to_string(i) + "]";
        checkKeys(scenes[i], p, {"id", "layout", "insetFraction", "gapBefore", "designs"});
        SceneSpec s;
        s.path = p;
        if (scenes[i].contains("id")) {
            s.id = string(scenes[i]["id"], p + ".id");
            if (s.id.empty()) throw ParseError(p + ".id", "scene id must not be empty");
        } else {
            s.id = "s" + std::to_string(i + 1);
            record(p + ".id", s.id);
        }
        if (!sceneIds.insert(s.id).second) throw ParseError(p + ".id", "duplicate scene id '" + s.id + "'");
        if (scenes[i].contains("layout")) s.layout = parseLayout(string(scenes[i]["layout"], p + ".layout"), p + ".layout");
        if (scenes[i].contains("insetFraction")) {
            if (s.layout != LayoutKind::PictureInPicture) {
                throw ParseError(p + ".insetFraction", "only applies to PictureInPicture scenes");
            }
            s.insetFraction = number(scenes[i]["insetFraction"], p + ".insetFraction");
            if (s.insetFraction <= 0.0 || s.insetFraction >= 1.0) {
                throw ParseError(p + ".insetFraction", "must be in (0, 1)");
            }
        } else if (s.layout == LayoutKind::PictureInPicture) {
            record(p + ".insetFraction", fmt(s.insetFraction));
        }
        if (scenes[i].contains("gapBefore")) {
            s.gapBefore = number(scenes[i]["gapBefore"], p + ".gapBefore");
            if (s.gapBefore < 0.0) throw ParseError(p + ".gapBefore", "must be non-negative");
        }
        const auto& designs = require(scenes[i], p, "designs");
        if (!designs.is_array()) throw ParseError(p + ".designs", "expected an array of camera designs");
        const std::size_t expected = s.layout == LayoutKind::Full ? 1 : 2;
        if (designs.size() != expected) {
            throw ParseError(p + ".designs", std::string(toString(s.layout)) + " scenes take exactly " +
                                                 std::to_string(expected) + " camera design" +
                                                 (expected == 1 ? "" : "s"));
        }
        for (std::size_t k = 0; k < designs.size(); ++k) {
            auto design = parseDesign(designs[k], p + ".designs[" + std::to_string(k) + "]");
            for (const auto* t : {&design.target}) {
                auto checkData = [&](const TargetSpec& spec, auto&& self) -> void {
                    if (spec.data && !dataIds.contains(*spec.data)) {
                        throw ParseError(spec.path + ".data", "no dataset with id '" + *spec.data + "'");
                    }
                    for (const auto& m : spec.members) self(m, self);
                };
                checkData(*t, checkData);
            }
            s.designs.push_back(std::move(design));
        }
        story.scenes.push_back(std::move(s));
    }
    return story;
}

std::vector<Dataset> loadDatasets(const Story& story, const std::filesystem::path& baseDir,
                                  const std::map<std::string, std::filesystem::path>& overrides) {
    std::vector<Dataset> out;
    for (const auto& ref : story.data) {
        std::filesystem::path file;
        if (const auto it = overrides.find(ref.id); it != overrides.end()) {
            file = it->second;
        } else if (ref.path) {
            file = baseDir / *ref.path;
        } else {
            throw IoError("no file given for dataset '" + ref.id + "'");
        }
        const auto text = readFile(file);
        try {
            out.push_back({ref.id, loadFeatures(text, ref.format, ref.delimited)});
        } catch (const IngestError& e) {
            throw IngestError("dataset '" + ref.id + "': " + e.what(), e.record());
        }
    }
    return out;
}

namespace {

struct Resolver {
    const std::vector<Dataset>& datasets;
    std::size_t sceneNumber;

    std::vector<const Dataset*> scope(const TargetSpec& spec) const {
        std::vector<const Dataset*> out;
        for (const auto& d : datasets) {
            if (!spec.data || d.id == *spec.data) out.push_back(&d);
        }
        return out;
    }

    [[noreturn]] void unresolved(const TargetSpec& spec) const {
        throw ParseError(spec.path, "unresolved target '" + spec.ref + "' in scene " + std::to_string(sceneNumber));
    }

    GeospatialTarget single(const TargetSpec& spec) const {
        switch (spec.form) {
            case TargetSpec::Form::FeatureId:
                for (const auto* d : scope(spec)) {
                    for (const auto& f : d->features) {
                        if (f.id == spec.ref) return toTarget(f);
                    }
                }
                unresolved(spec);
            case TargetSpec::Form::Name:
                for (const auto* d : scope(spec)) {
                    for (const auto& f : d->features) {
                        if (f.name && *f.name == spec.ref) return toTarget(f);
                    }
                }
                unresolved(spec);
            case TargetSpec::Form::Point: return Location{spec.coordinates.front(), spec.name};
            case TargetSpec::Form::Region: return Region{GeoPolygon(spec.coordinates), spec.name};
            case TargetSpec::Form::Path: return Path{GeoPolyline(spec.coordinates), spec.name};
            default: break;
        }
        return {};
    }

    GeospatialTarget resolve(const TargetSpec& spec) const {
        switch (spec.form) {
            case TargetSpec::Form::None: return {};
            case TargetSpec::Form::Lasso: {
                std::vector<Feature> pool;
                for (const auto* d : scope(spec)) pool.insert(pool.end(), d->features.begin(), d->features.end());
                auto t = selectByLasso(pool, GeoPolygon(spec.coordinates));
                if (spec.name && t.kind() == TargetKind::Multiple) {
                    return GeospatialTarget::multiple(t.members(), spec.name);
                }
                if (spec.name) return Region{GeoPolygon(spec.coordinates), spec.name};
                return t;
            }
            case TargetSpec::Form::Multiple: {
                std::vector<GeospatialTarget::Single> members;
                for (const auto& m : spec.members) members.push_back(*single(m).single());
                return GeospatialTarget::multiple(std::move(members), spec.name);
            }
            default: return single(spec);
        }
    }
};

}  // namespace

ResolvedStory resolveTargets(const Story& story, std::vector<Dataset> datasets) {
    ResolvedStory out;
    out.story = story;
    out.datasets = std::move(datasets);

    for (const auto& ref : story.data) {
        const bool found = std::any_of(out.datasets.begin(), out.datasets.end(),
                                       [&](const Dataset& d) { return d.id == ref.id; });
        if (!found) throw ParseError("$.data", "dataset '" + ref.id + "' was not loaded");
    }

    for (std::size_t i = 0; i < story.layers.size(); ++i) {
        const auto& spec = story.layers[i];
        const std::string p = "$.layers[" + std::to_string(i) + "]";
        const auto& ds = *std::find_if(out.datasets.begin(), out.datasets.end(),
                                       [&](const Dataset& d) { return d.id == spec.data; });
        DataLayer layer = rethrowAt(p, [&] {
            if (spec.kind != LayerKind::Hexagon3D) return makeLayer(spec.kind, ds.features);
            std::vector<GeoPoint> points;
            for (const auto& f : ds.features) {
                if (const auto* g = std::get_if<GeoPoint>(&f.geometry)) points.push_back(*g);
            }
            return hexAggregate(points, spec.cellRadius, spec.heightScale);
        });
        out.layers.push_back({spec, std::move(layer)});
    }

    for (std::size_t i = 0; i < story.scenes.size(); ++i) {
        const auto& scene = story.scenes[i];
        Resolver resolver{out.datasets, i + 1};
        ResolvedScene rs{scene.id, scene.layout, scene.insetFraction, scene.gapBefore, {}, scene.path};
        for (const auto& design : scene.designs) {
            ResolvedDesign rd;
            rd.spec = design;
            rd.target = rethrowAt(design.target.path, [&] { return resolver.resolve(design.target); });
            if (design.purpose) {
                try {
                    checkPurposeTarget(*design.purpose, rd.target.kind());
                } catch (const MismatchError& e) {
                    throw ParseError(design.target.path, std::string(e.what()) + " in scene " + std::to_string(i + 1));
                }
            }
            rd.label = labelOf(rd.target);
            rs.designs.push_back(std::move(rd));
        }
        out.scenes.push_back(std::move(rs));
    }
    return out;
}

ResolvedStory loadResolvedStory(const std::filesystem::path& storyFile,
                                const std::map<std::string, std::filesystem::path>& overrides) {
    std::ifstream in(storyFile, std::ios::binary);
    if (!in) throw IoError("cannot read story file: " + storyFile.string());
    std::stringstream ss;
    ss << in.rdbuf();
    const Story story = parseStory(ss.str());
    return resolveTargets(story, loadDatasets(story, storyFile.parent_path(), overrides));
}

}  // namespace mapreel
