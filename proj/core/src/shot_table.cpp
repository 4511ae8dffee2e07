#include "mapreel/shot_table.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mapreel/error.hpp"

namespace mapreel {

namespace {

constexpr std::array<NarrativePurpose, 5> kPurposes{NarrativePurpose::Emphasize, NarrativePurpose::Overview,
                                                    NarrativePurpose::Compare, NarrativePurpose::Supplement,
                                                    NarrativePurpose::Dynamics};
constexpr std::array<TargetKind, 5> kKinds{TargetKind::None, TargetKind::Location, TargetKind::Region,
                                           TargetKind::Path, TargetKind::Multiple};

bool validPair(NarrativePurpose purpose, TargetKind kind) {
    try {
        checkPurposeTarget(purpose, kind);
        return true;
    } catch (const MismatchError&) {
        return false;
    }
}

}  // namespace

const ShotTable& ShotTable::builtin() {
    static const ShotTable table = fromJson(builtinShotTableJson());
    return table;
}

ShotTable ShotTable::fromJson(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("shot table is not valid JSON: ") + e.what(), "$");
    }
    if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
        throw ValidationError("shot table needs an 'entries' array", "$.entries");
    }

    ShotTable table;
    const auto& entries = doc["entries"];
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        const std::string path = "$.entries[" + std::to_string(i) + "]";
        try {
            const auto purpose = parsePurpose(e.at("purpose").get<std::string>());
            ShotDefault d;
            d.shot.type = parseShotType(e.at("shot").get<std::string>());
            d.shot.whip = e.value("whip", false);
            d.params.intensity = e.value("intensity", d.params.intensity);
            d.params.duration = e.value("duration", d.params.duration);
            d.params.hold = e.value("hold", d.params.hold);
            if (e.contains("sweep")) d.params.sweep = e["sweep"].get<double>();
            validate(d.params);
            for (const auto& k : e.at("targetKinds")) {
                const auto kind = parseTargetKind(k.get<std::string>());
                if (!validPair(purpose, kind)) {
                    throw ValidationError("entry pairs " + std::string(toString(purpose)) + " with " +
                                          std::string(toString(kind)) + ", which is never valid");
                }
                if (!table.entries_.emplace(std::pair{purpose, kind}, d).second) {
                    throw ValidationError("duplicate entry for " + std::string(toString(purpose)) + "/" +
                                          std::string(toString(kind)));
                }
            }
        } catch (const nlohmann::json::exception& ex) {
            throw ValidationError("malformed shot table entry: " + std::string(ex.what()), path);
        } catch (const ValidationError& ex) {
            throw ValidationError(ex.what(), path);
        }
    }

    for (auto p : kPurposes) {
        for (auto k : kKinds) {
            if (validPair(p, k) && !table.entries_.contains({p, k})) {
                throw ValidationError("shot table has no entry for " + std::string(toString(p)) + "/" +
                                          std::string(toString(k)),
                                      "$.entries");
            }
        }
    }
    return table;
}

ShotTable ShotTable::fromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read shot table: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return fromJson(ss.str());
}

ShotTable ShotTable::fromEnvironment() {
    if (const char* path = std::getenv("MAPREEL_SHOT_TABLE"); path && *path) return fromFile(path);
    return builtin();
}

ShotDefault ShotTable::lookup(NarrativePurpose purpose, TargetKind kind) const {
    checkPurposeTarget(purpose, kind);
    return entries_.at({purpose, kind});
}

}  // namespace mapreel
