#include "mapreel/script_json.hpp"

#include <cmath>
#include <cstdio>

namespace mapreel {

namespace {

using nlohmann::json;

void writeNumber(std::string& out, double v) {
    if (v == 0.0) v = 0.0;  // folds -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%#.9g", v);
    out += buf;
}

void write(std::string& out, const json& v) {
    switch (v.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [key, item] : v.items()) {
                if (!first) out += ',';
                first = false;
                out += json(key).dump();
                out += ':';
                write(out, item);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ',';
                write(out, v[i]);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float: writeNumber(out, v.get<double>()); break;
        default: out += v.dump(); break;
    }
}

json windowJson(const ViewportWindow& w) { return json::array({w.x, w.y, w.width, w.height}); }

json frameJson(const ScriptFrame& f) {
    return {{"t", f.t},
            {"lon", f.state.center.lon},
            {"lat", f.state.center.lat},
            {"zoom", f.state.zoom},
            {"pitch", f.state.pitch},
            {"bearing", f.state.bearing},
            {"altitudeMeters", f.altitudeMeters},
            {"viewport", windowJson(f.window)}};
}

}  // namespace

json scriptToJson(const CameraScript& script) {
    json tracks = json::array();
    for (std::size_t i = 0; i < script.tracks.size(); ++i) {
        json frames = json::array();
        for (const auto& f : script.tracks[i].frames) frames.push_back(frameJson(f));
        tracks.push_back({{"index", i}, {"frames", std::move(frames)}});
    }

    json annotations = json::array();
    for (const auto& a : script.annotations) {
        annotations.push_back({{"text", a.text},
                               {"movement", a.movementId},
                               {"track", a.track},
                               {"startFrame", a.startFrame},
                               {"endFrame", a.endFrame}});
    }

    json movements = json::array();
    for (const auto& m : script.movements) {
        json shots = json::array();
        for (const auto& s : m.shots) shots.push_back(shotLabel(s));
        movements.push_back({{"id", m.id},
                             {"scene", m.sceneId},
                             {"track", m.track},
                             {"purpose", m.purpose ? json(std::string(toString(*m.purpose))) : json()},
                             {"shots", std::move(shots)},
                             {"target", {{"kind", std::string(toString(m.target.kind()))}, {"label", m.label}}},
                             {"startTime", m.movement.startTime},
                             {"duration", m.movement.duration},
                             {"startFrame", m.startFrame},
                             {"endFrame", m.endFrame},
                             {"manual", m.movement.manualOverride},
                             {"viewport", windowJson(m.window)},
                             {"initial", cameraStateToJson(m.movement.startState())},
                             {"final", cameraStateToJson(m.movement.endState())}});
    }

    json fillers = json::array();
    for (const auto& f : script.timeline.fillers) {
        fillers.push_back({{"id", f.id},
                           {"startTime", f.startTime},
                           {"duration", f.trajectory.duration()},
                           {"mode", f.trajectory.usesOptimalPath() ? "flyTo" : "linear"}});
    }

    json groups = json::array();
    for (const auto& g : script.timeline.groups) {
        json ids = json::array();
        for (const auto& m : g.movements) ids.push_back(m.id);
        groups.push_back({{"label", g.label},
                          {"kind", std::string(toString(g.target.kind()))},
                          {"startTime", g.startTime()},
                          {"endTime", g.endTime()},
                          {"movements", std::move(ids)}});
    }

    return {{"fps", script.fps},
            {"duration", script.duration},
            {"viewport", {{"width", script.viewport.width}, {"height", script.viewport.height}}},
            {"tracks", std::move(tracks)},
            {"annotations", std::move(annotations)},
            {"movements", std::move(movements)},
            {"fillers", std::move(fillers)},
            {"groups", std::move(groups)}};
}

std::string canonicalJson(const json& value) {
    std::string out;
    write(out, value);
    out += '\n';
    return out;
}

std::string exportScript(const CameraScript& script) { return canonicalJson(scriptToJson(script)); }

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string digestHex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

}  // namespace mapreel
