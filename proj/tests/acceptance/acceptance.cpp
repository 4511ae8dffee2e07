// Acceptance suite: one PASS/FAIL line per criterion, exit 1 on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mapreel/compiler.hpp"
#include "mapreel/script_json.hpp"
#include "mapreel/storyboard.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace mapreel;

namespace {

struct Result {
    bool ok = true;
    std::string detail;
};

int failures = 0;

// Runs one criterion and prints its line; `budget` is the runtime limit in seconds.
void criterion(const char* name, double budget, const std::function<Result()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= budget) {
        r.ok = false;
        r.detail += " (over the " + std::to_string(budget) + " s budget)";
    }
    std::printf("%s %s: %s [%.3f s, budget %.0f s]\n", r.ok ? "PASS" : "FAIL", name, r.detail.c_str(), secs, budget);
    if (!r.ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

double bearingGap(double a, double b) { return std::fabs(shortestBearingSweep(a, b)); }

double stateGap(const CameraState& a, const CameraState& b) {
    return std::max({std::fabs(a.center.lon - b.center.lon), std::fabs(a.center.lat - b.center.lat),
                     std::fabs(a.zoom - b.zoom), std::fabs(a.pitch - b.pitch), bearingGap(a.bearing, b.bearing)});
}

Result caseStudy() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto script = compile(loadResolvedStory(fixtures::caseStudyStory()));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::vector<NarrativePurpose> purposes{NarrativePurpose::Dynamics,  NarrativePurpose::Overview,
                                                 NarrativePurpose::Compare,   NarrativePurpose::Emphasize,
                                                 NarrativePurpose::Emphasize, NarrativePurpose::Dynamics};
    const std::vector<ShotType> shots{ShotType::PushIn, ShotType::PushIn, ShotType::PullOut,
                                      ShotType::Roll,   ShotType::PushIn, ShotType::PullOut};
    const std::vector<std::pair<double, double>> durations{{10, 0}, {2, 5}, {2, 2}, {8, 0}, {3, 0}, {10, 0}};

    if (script.movements.size() != 6) return {false, "movements = " + std::to_string(script.movements.size())};
    for (std::size_t i = 0; i < 6; ++i) {
        const auto& m = script.movements[i];
        if (m.purpose != purposes[i]) return {false, "purpose mismatch at movement " + std::to_string(i + 1)};
        if (m.shots.size() != 1 || m.shots[0].type != shots[i]) {
            return {false, "shot mismatch at movement " + std::to_string(i + 1)};
        }
        const double motion = m.movement.plan.motionEnd;
        const double hold = m.movement.duration - motion;
        if (std::fabs(motion - durations[i].first) > 1e-9 || std::fabs(hold - durations[i].second) > 1e-9) {
            return {false, "movement " + std::to_string(i + 1) + fmt(" runs %g + %g s", motion, hold)};
        }
    }
    if (std::fabs(script.duration - 42.0) > 1.0) return {false, fmt("total %g s", script.duration)};
    if (secs >= 1.0) return {false, fmt("compile took %g s", secs)};
    return {true, fmt("6 movements, total %g s, compile %.3f s", script.duration, secs)};
}

Result marginProperty() {
    std::mt19937_64 rng(0x6d617267);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = INFINITY;
    for (int i = 0; i < 1000; ++i) {
        const double west = -170.0 + 300.0 * u(rng);
        const double south = -60.0 + 100.0 * u(rng);
        const GeoBounds b{west, south, west + 0.001 + 40.0 * u(rng) * u(rng), south + 0.001 + 20.0 * u(rng) * u(rng)};
        const Viewport vp{320 + static_cast<int>(1600 * u(rng)), 240 + static_cast<int>(1000 * u(rng))};
        const double margin = 0.3 * u(rng);
        const double pitch = 60.0 * u(rng);
        const double bearing = 360.0 * u(rng);
        const auto s = fitBounds(b, vp, margin, pitch, bearing);

        const auto c = oracle::mercator(s.center.lon, s.center.lat);
        const oracle::Camera cam{c.x, c.y, s.zoom, s.pitch, s.bearing, s.fov, (long double)vp.width, (long double)vp.height};
        for (const auto& [lon, lat] : {std::pair{b.west, b.south}, {b.east, b.south}, {b.east, b.north}, {b.west, b.north}}) {
            const auto p = cam.width > 0 ? oracle::screenOf(cam, oracle::mercator(lon, lat)) : std::nullopt;
            if (!p) return {false, "case " + std::to_string(i) + ": corner behind the camera"};
            const double mx = margin * vp.width, my = margin * vp.height;
            const double slack = std::min({(double)p->x - mx, vp.width - mx - (double)p->x, (double)p->y - my,
                                           vp.height - my - (double)p->y});
            worst = std::min(worst, slack);
            if (slack < -0.5) return {false, "case " + std::to_string(i) + fmt(": corner %g px inside the margin", -slack)};
        }
    }
    return {true, fmt("1000 fits, tightest corner %.3g px from the margin", worst)};
}

Result roundTrip() {
    std::mt19937_64 rng(0x726f756e);
    std::uniform_real_distribution<double> lon(-180.0, 180.0), lat(-85.05, 85.05);
    double worst = 0.0, worstOracle = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const GeoPoint g{lon(rng), lat(rng)};
        const auto m = project(g);
        const auto back = unproject(m);
        worst = std::max({worst, std::fabs(back.lon - g.lon), std::fabs(back.lat - g.lat)});
        const auto o = oracle::mercator(g.lon, g.lat);
        worstOracle = std::max({worstOracle, (double)std::fabs(o.x - m.x), (double)std::fabs(o.y - m.y)});
    }
    const bool ok = worst < 1e-9 && worstOracle < 1e-12;
    return {ok, fmt("10000 points, max error %.3g deg, max deviation from oracle %.3g", worst, worstOracle)};
}

Result shotConstancy() {
    std::mt19937_64 rng(0x73686f74);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    struct Held {
        ShotType type;
        bool center, zoom, pitch, bearing;
        NarrativePurpose purpose;
    };
    const std::vector<Held> held{{ShotType::Static, true, true, true, true, NarrativePurpose::Emphasize},
                                 {ShotType::Pan, false, true, true, true, NarrativePurpose::Supplement},
                                 {ShotType::Tilt, true, true, false, true, NarrativePurpose::Emphasize},
                                 {ShotType::Roll, true, true, false, false, NarrativePurpose::Emphasize},
                                 {ShotType::Arc, true, true, false, false, NarrativePurpose::Emphasize}};
    double worst = 0.0;
    for (const auto& h : held) {
        for (int i = 0; i < 500; ++i) {
            const GeoPoint p{-170.0 + 340.0 * u(rng), -70.0 + 140.0 * u(rng)};
            GeospatialTarget target;
            if (u(rng) < 0.5) {
                target = Location{p, {}};
            } else {
                const double w = 0.01 + 10.0 * u(rng), ht = 0.01 + 8.0 * u(rng);
                target = Region{GeoPolygon({p, {p.lon + w, p.lat}, {p.lon + w, p.lat + ht}, {p.lon, p.lat + ht}}), {}};
            }
            CameraState current{{-170.0 + 340.0 * u(rng), -70.0 + 140.0 * u(rng)}, 1.0 + 12.0 * u(rng), 50.0 * u(rng),
                                360.0 * u(rng), kDefaultFov};
            const Viewport vp{320 + static_cast<int>(1600 * u(rng)), 240 + static_cast<int>(1000 * u(rng))};
            ShotParams params;
            params.intensity = u(rng);
            params.duration = 0.5 + 9.5 * u(rng);
            params.hold = u(rng) < 0.3 ? 3.0 * u(rng) : 0.0;
            params.easing = u(rng) < 0.5 ? Easing::Linear : Easing::EaseInOut;
            params.direction = u(rng) < 0.5 ? SweepDirection::Clockwise : SweepDirection::Counterclockwise;
            const auto plan = planShot({h.type}, target, h.purpose, current, vp, params);
            const auto first = plan.sample(0.0);
            for (int k = 0; k <= 120; ++k) {
                const auto s = plan.sample(plan.duration() * (k / 120.0));
                double gap = 0.0;
                if (h.center) gap = std::max({gap, std::fabs(s.center.lon - first.center.lon), std::fabs(s.center.lat - first.center.lat)});
                if (h.zoom) gap = std::max(gap, std::fabs(s.zoom - first.zoom));
                if (h.pitch) gap = std::max(gap, std::fabs(s.pitch - first.pitch));
                if (h.bearing) gap = std::max(gap, bearingGap(s.bearing, first.bearing));
                worst = std::max(worst, gap);
                if (gap > 1e-9) {
                    return {false, std::string(toString(h.type)) + " plan " + std::to_string(i) + fmt(" drifts by %.3g", gap)};
                }
            }
        }
    }
    return {true, fmt("5 shot types x 500 plans x 121 frames, max drift %.3g", worst)};
}

Result timelineTiling() {
    std::mt19937_64 rng(0x74696c65);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<GeoPoint> places{{2.35, 48.86}, {13.4, 52.52}, {-3.7, 40.42}, {-74.0, 40.7}, {139.7, 35.7}};
    const std::vector<ShotType> types{ShotType::Static, ShotType::PushIn, ShotType::PullOut, ShotType::Pan};
    const Viewport vp{1280, 720};
    double worstGap = 0.0, worstJump = 0.0;
    for (int c = 0; c < 200; ++c) {
        Timeline tl;
        CameraState current{{0.0, 20.0}, 2.0, 0.0, 0.0, kDefaultFov};
        std::optional<std::size_t> lastPlace;
        std::vector<std::string> ids;
        const int steps = 2 + static_cast<int>(u(rng) * 14);
        for (int s = 0; s < steps; ++s) {
            if (!ids.empty() && u(rng) < 0.3) {
                const auto& id = ids[static_cast<std::size_t>(u(rng) * ids.size())];
                tl = setDuration(tl, id, 0.2 + 8.0 * u(rng));
            } else {
                const auto place = u(rng) < 0.5 && lastPlace ? *lastPlace : static_cast<std::size_t>(u(rng) * places.size());
                ShotParams params;
                params.duration = 0.5 + 5.0 * u(rng);
                params.intensity = u(rng);
                const auto type = types[static_cast<std::size_t>(u(rng) * types.size())];
                const auto purpose = type == ShotType::Pan ? NarrativePurpose::Supplement : NarrativePurpose::Emphasize;
                const auto plan = planShot({type}, Location{places[place], {}}, purpose, current, vp, params);
                AppendOptions ao;
                ao.id = "m" + std::to_string(s);
                if (lastPlace != place && u(rng) < 0.5) ao.gapBefore = 3.0 * u(rng);
                tl = appendMovement(tl, plan, ao);
                ids.push_back(*ao.id);
                lastPlace = place;
            }
            current = tl.groups.back().movements.back().endState();
            if (!validate(tl).empty()) return {false, "case " + std::to_string(c) + ": " + validate(tl).front().message};
        }
        const auto filled = fillGaps(tl, {u(rng) < 0.5 ? GapFillMode::FlyTo : GapFillMode::Linear, 1280.0});
        if (!validate(filled).empty()) return {false, "case " + std::to_string(c) + ": invalid after filling"};
        const auto segs = segments(filled);
        const double T = filled.endTime();
        worstGap = std::max({worstGap, std::fabs(segs.front().startTime), std::fabs(segs.back().endTime - T)});
        for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
            worstGap = std::max(worstGap, std::fabs(segs[i].endTime - segs[i + 1].startTime));
            if (segs[i].endTime > segs[i + 1].startTime + 1e-12) return {false, "case " + std::to_string(c) + ": overlap"};
            worstJump = std::max(worstJump, stateGap(segs[i].stateAt(segs[i].endTime), segs[i + 1].stateAt(segs[i + 1].startTime)));
        }
        if (worstGap > 1e-12 || worstJump > 1e-12) {
            return {false, "case " + std::to_string(c) + fmt(": boundary gap %.3g s, state jump %.3g", worstGap, worstJump)};
        }
    }
    return {true, fmt("200 sequences, max boundary gap %.3g s, max state jump %.3g", worstGap, worstJump)};
}

Result flyToOracle() {
    std::mt19937_64 rng(0x666c7974);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const CameraState a{{-170.0 + 340.0 * u(rng), -70.0 + 140.0 * u(rng)}, 1.0 + 13.0 * u(rng), 0.0, 0.0, kDefaultFov};
        const CameraState b{{-170.0 + 340.0 * u(rng), -70.0 + 140.0 * u(rng)}, 1.0 + 13.0 * u(rng), 0.0, 0.0, kDefaultFov};
        const double refWidth = 512.0 + 1500.0 * u(rng);
        const double duration = 1.0 + 9.0 * u(rng);
        const auto traj = Trajectory::flyTo(a, b, duration, refWidth);
        const oracle::FlyTo o(oracle::mercator(a.center.lon, a.center.lat), a.zoom,
                              oracle::mercator(b.center.lon, b.center.lat), b.zoom, refWidth);
        for (int k = 0; k < 100; ++k) {
            const double f = k / 99.0;
            const auto s = traj.at(duration * f);
            const auto m = project(s.center);
            const auto c = o.center(f);
            double gap = std::max(std::fabs(m.x - (double)c.x), std::fabs(m.y - (double)c.y));
            if (s.zoom > kMinZoom) {
                gap = std::max(gap, std::fabs(refWidth / (kTileSize * std::exp2(s.zoom)) - (double)o.width(f)));
            }
            worst = std::max(worst, gap);
            if (gap > 1e-6) return {false, "pair " + std::to_string(i) + fmt(" at f = %g differs by %.3g", f, gap)};
        }
    }
    return {true, fmt("50 pairs x 100 samples, max deviation %.3g world units", worst)};
}

Result determinism() {
    auto run = [] {
        const auto story = loadResolvedStory(fixtures::caseStudyStory());
        const auto script = compile(story);
        return std::pair{exportScript(script), storyboard(story, script)};
    };
    const auto a = run();
    const auto b = run();
    const bool ok = a.first == b.first && a.second == b.second;
    return {ok, "script " + digestHex(a.first) + " / " + digestHex(b.first) + ", storyboard " + digestHex(a.second) +
                    " / " + digestHex(b.second)};
}

Result constraintErrors() {
    auto messageOf = [](const std::string& doc) -> std::string {
        try {
            parseStory(doc);
        } catch (const ParseError& e) {
            return e.what();
        }
        return "";
    };
    const auto compare = messageOf(R"({"scenes": [{"designs": [{"purpose": "Compare", "target": {"point": [1, 2]}}]}]})");
    const auto dynamics = messageOf(R"({"scenes": [{"designs": [{"purpose": "Dynamics", "target": {"point": [1, 2]}}]}]})");
    const bool ok = compare.find("comparison requires multiple targets") != std::string::npos &&
                    dynamics.find("increasing dynamics requires no target") != std::string::npos;
    return {ok, "\"" + compare + "\"; \"" + dynamics + "\""};
}

}  // namespace

int main() {
    criterion("us-incidents story", 5.0, caseStudy);
    criterion("margin property", 5.0, marginProperty);
    criterion("projection round-trip", 1.0, roundTrip);
    criterion("shot constancy", 10.0, shotConstancy);
    criterion("timeline tiling", 5.0, timelineTiling);
    criterion("fly-to oracle", 5.0, flyToOracle);
    criterion("determinism", 10.0, determinism);
    criterion("constraint errors", 1.0, constraintErrors);
    return failures == 0 ? 0 : 1;
}
