#pragma once

#include <map>
#include <string>
#include <utility>

#include "mapreel/shots.hpp"

namespace mapreel {

struct ShotDefault {
    Shot shot;
    ShotParams params;
};

// Purpose x target-kind table of default shots. Loaded from a JSON data
// file so the frequencies behind it can be swapped without a rebuild.
class ShotTable {
public:
    // The table shipped in data/default_shots.json.
    static const ShotTable& builtin();

    static ShotTable fromJson(std::string_view text);
    static ShotTable fromFile(const std::string& path);

    // Table named by $MAPREEL_SHOT_TABLE, else the builtin one.
    static ShotTable fromEnvironment();

    // Throws MismatchError for the two invalid purpose/target families.
    ShotDefault lookup(NarrativePurpose purpose, TargetKind kind) const;

private:
    std::map<std::pair<NarrativePurpose, TargetKind>, ShotDefault> entries_;
};

inline ShotDefault defaultShotFor(NarrativePurpose purpose, TargetKind kind) {
    return ShotTable::builtin().lookup(purpose, kind);
}

// Text of the builtin table.
std::string_view builtinShotTableJson();

}  // namespace mapreel
