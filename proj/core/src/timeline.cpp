#include "mapreel/timeline.hpp"

#include <algorithm>
#include <cmath>

namespace mapreel {

namespace {

constexpr double kTimeEps = 1e-9;

std::string formatSeconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", s);
    return buf;
}

std::pair<std::size_t, std::size_t> locate(const Timeline& t, const std::string& id) {
    for (std::size_t g = 0; g < t.groups.size(); ++g) {
        const auto& ms = t.groups[g].movements;
        for (std::size_t i = 0; i < ms.size(); ++i) {
            if (ms[i].id == id) return {g, i};
        }
    }
    throw NotFoundError("unknown movement id '" + id + "'");
}

void shiftGroup(LocationGroup& g, double delta) {
    for (auto& m : g.movements) m.startTime += delta;
}

std::string joinIds(const std::vector<Violation>& violations) {
    std::string s = "timeline is not well formed:";
    for (const auto& v : violations) s += " [" + std::string(toString(v.kind)) + "] " + v.message + ";";
    return s;
}

}  // namespace

CameraState CameraMovement::stateAt(double local) const {
    const double clamped = std::clamp(local, 0.0, duration);
    return plan.sample(clamped == duration ? plan.duration() : clamped * plan.duration() / duration);
}

double Timeline::endTime() const {
    double end = 0.0;
    if (!groups.empty()) end = groups.back().endTime();
    for (const auto& g : groups) end = std::max(end, g.endTime());
    for (const auto& f : fillers) end = std::max(end, f.endTime());
    return end;
}

std::size_t Timeline::movementCount() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.movements.size();
    return n;
}

const CameraMovement* Timeline::find(const std::string& id) const {
    for (const auto& g : groups) {
        for (const auto& m : g.movements) {
            if (m.id == id) return &m;
        }
    }
    return nullptr;
}

std::vector<std::string> Timeline::movementIds() const {
    std::vector<std::string> ids;
    for (const auto& g : groups) {
        for (const auto& m : g.movements) ids.push_back(m.id);
    }
    return ids;
}

Timeline appendMovement(const Timeline& timeline, const MovementPlan& plan, const AppendOptions& options) {
    validate(plan);
    if (!std::isfinite(options.gapBefore) || options.gapBefore < 0.0) {
        throw ValidationError("gapBefore must be non-negative", "gapBefore");
    }
    const double duration = options.duration.value_or(plan.duration());
    if (!std::isfinite(duration) || duration <= 0.0) throw ValidationError("duration must be positive", "duration");

    Timeline out = timeline;
    out.fillers.clear();

    CameraMovement m;
    if (options.id) {
        if (options.id->empty()) throw ValidationError("movement id must not be empty", "id");
        if (timeline.find(*options.id)) throw ValidationError("duplicate movement id '" + *options.id + "'", "id");
        m.id = *options.id;
    } else {
        std::size_t n = timeline.movementCount() + 1;
        while (timeline.find("m" + std::to_string(n))) ++n;
        m.id = "m" + std::to_string(n);
    }
    m.plan = plan;
    m.duration = duration;
    m.annotation = options.annotation;
    m.manualOverride = options.manualOverride;

    const double end = out.groups.empty() ? 0.0 : out.groups.back().endTime();
    if (!out.groups.empty() && out.groups.back().target == plan.target) {
        if (options.gapBefore > 0.0) {
            throw ValidationError("movement '" + m.id + "' continues a location group; gaps are only allowed "
                                  "between groups",
                                  "gapBefore");
        }
        m.startTime = end;
        out.groups.back().movements.push_back(std::move(m));
    } else {
        m.startTime = end + options.gapBefore;
        LocationGroup g;
        g.label = labelOf(plan.target);
        g.target = plan.target;
        g.movements.push_back(std::move(m));
        out.groups.push_back(std::move(g));
    }
    return out;
}

Timeline setDuration(const Timeline& timeline, const std::string& id, double duration) {
    if (!std::isfinite(duration) || duration <= 0.0) throw ValidationError("duration must be positive", "duration");
    const auto [g, i] = locate(timeline, id);

    Timeline out = timeline;
    out.fillers.clear();
    auto& group = out.groups[g];
    group.movements[i].duration = duration;
    for (std::size_t k = i + 1; k < group.movements.size(); ++k) {
        group.movements[k].startTime = group.movements[k - 1].endTime();
    }
    // Later groups move only when they would otherwise overlap.
    double prevEnd = group.endTime();
    for (std::size_t k = g + 1; k < out.groups.size(); ++k) {
        auto& next = out.groups[k];
        if (next.startTime() < prevEnd) shiftGroup(next, prevEnd - next.startTime());
        prevEnd = next.endTime();
    }
    return out;
}

std::string_view toString(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Overlap: return "Overlap";
        case ViolationKind::IntraGroupGap: return "IntraGroupGap";
        case ViolationKind::OutOfOrderGroups: return "OutOfOrderGroups";
        case ViolationKind::MixedTargets: return "MixedTargets";
    }
    return "";
}

std::vector<Violation> validate(const Timeline& timeline) {
    std::vector<Violation> out;

    std::vector<const CameraMovement*> all;
    for (const auto& g : timeline.groups) {
        for (const auto& m : g.movements) all.push_back(&m);
    }
    std::stable_sort(all.begin(), all.end(),
                     [](const CameraMovement* a, const CameraMovement* b) { return a->startTime < b->startTime; });
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size() && all[j]->startTime < all[i]->endTime() - kTimeEps; ++j) {
            out.push_back({ViolationKind::Overlap,
                           {all[i]->id, all[j]->id},
                           "movements '" + all[i]->id + "' and '" + all[j]->id + "' overlap"});
        }
    }

    for (std::size_t k = 0; k < timeline.groups.size(); ++k) {
        const auto& g = timeline.groups[k];
        if (g.movements.empty()) continue;
        for (std::size_t i = 1; i < g.movements.size(); ++i) {
            const auto& a = g.movements[i - 1];
            const auto& b = g.movements[i];
            const double gap = b.startTime - a.endTime();
            if (gap > kTimeEps) {
                out.push_back({ViolationKind::IntraGroupGap,
                               {a.id, b.id},
                               "gap of " + formatSeconds(gap) + " s between '" + a.id + "' and '" + b.id +
                                   "' in group '" + g.label + "'"});
            }
        }
        for (const auto& m : g.movements) {
            if (!(m.plan.target == g.target)) {
                out.push_back({ViolationKind::MixedTargets,
                               {m.id},
                               "movement '" + m.id + "' does not serve the target of group '" + g.label + "'"});
            }
        }
        if (k > 0 && !timeline.groups[k - 1].movements.empty() &&
            g.startTime() < timeline.groups[k - 1].startTime() - kTimeEps) {
            out.push_back({ViolationKind::OutOfOrderGroups,
                           {timeline.groups[k - 1].movements.front().id, g.movements.front().id},
                           "group '" + g.label + "' starts before the group preceding it"});
        }
    }
    return out;
}

TimelineError::TimelineError(std::vector<Violation> violations)
    : ValidationError(joinIds(violations)), violations_(std::move(violations)) {}

Timeline fillGaps(const Timeline& timeline, const FillOptions& options) {
    if (auto v = validate(timeline); !v.empty()) throw TimelineError(std::move(v));

    Timeline out = timeline;
    out.fillers.clear();
    if (out.groups.empty()) return out;

    int n = 0;
    auto nextId = [&] { return "gap-" + std::to_string(++n); };

    const auto& first = out.groups.front().movements.front();
    if (first.startTime > kTimeEps) {
        out.fillers.push_back({nextId(), 0.0, Trajectory::hold(first.startState(), first.startTime)});
    }
    for (std::size_t k = 1; k < out.groups.size(); ++k) {
        const auto& prev = out.groups[k - 1].movements.back();
        const auto& next = out.groups[k].movements.front();
        const double gap = next.startTime - prev.endTime();
        if (gap <= kTimeEps) continue;
        auto trajectory = options.mode == GapFillMode::FlyTo
                              ? Trajectory::flyTo(prev.endState(), next.startState(), gap, options.referenceWidthPx)
                              : Trajectory::linear(prev.endState(), next.startState(), gap);
        out.fillers.push_back({nextId(), prev.endTime(), std::move(trajectory)});
    }
    return out;
}

CameraState Segment::stateAt(double t) const {
    if (movement) return movement->stateAt(t - startTime);
    return filler->trajectory.at(std::clamp(t - startTime, 0.0, filler->trajectory.duration()));
}

std::vector<Segment> segments(const Timeline& timeline) {
    std::vector<Segment> out;
    for (const auto& g : timeline.groups) {
        for (const auto& m : g.movements) out.push_back({m.startTime, m.endTime(), &m, nullptr});
    }
    for (const auto& f : timeline.fillers) out.push_back({f.startTime, f.endTime(), nullptr, &f});
    std::stable_sort(out.begin(), out.end(), [](const Segment& a, const Segment& b) { return a.startTime < b.startTime; });
    return out;
}

}  // namespace mapreel
