#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fixtures {

inline std::filesystem::path sourceDir() { return MAPREEL_SOURCE_DIR; }

inline std::filesystem::path caseStudyStory() { return sourceDir() / "stories" / "us-incidents" / "story.json"; }

inline std::string read(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("mapreel-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fixtures
