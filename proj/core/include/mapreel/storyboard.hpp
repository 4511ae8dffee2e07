#pragma once

#include <string>

#include "mapreel/compiler.hpp"

namespace mapreel {

struct StoryboardOptions {
    int columns = 3;
    int panelWidth = 320;
    int panelHeight = 200;
};

// Standalone SVG: one panel per authored movement with the data, the
// target, and the start and end footprints joined by an arrow; location
// group bands along the bottom.
std::string storyboard(const ResolvedStory& story, const CameraScript& script, const StoryboardOptions& options = {});

// "<purpose>/<shot> @ <t0>–<t1>s"
std::string panelLabel(const MovementRecord& movement);

}  // namespace mapreel
