#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "mapreel/compiler.hpp"
#include "mapreel/shot_table.hpp"

namespace mapreel::service {

// The caller's base revision is not the current one.
class StaleRevisionError : public std::runtime_error {
public:
    StaleRevisionError(long expected, long actual);
    long expected() const noexcept { return expected_; }
    long actual() const noexcept { return actual_; }

private:
    long expected_;
    long actual_;
};

class ProjectExistsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The stored script belongs to an older revision.
class StaleScriptError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DatasetDoc {
    DocumentFormat format = DocumentFormat::GeoJson;
    std::string content;
    DelimitedOptions delimited;
};

struct CompiledArtifacts {
    long revision = 0;
    std::string digest;
    std::string script;
    std::string storyboard;
};

// One committed revision of a project. Never modified once published.
struct Project {
    std::string id;
    long revision = 0;
    nlohmann::json story;
    std::map<std::string, DatasetDoc> datasets;
    std::optional<CameraState> viewpoint;
    Viewport viewport{1280, 720};
    std::optional<CompiledArtifacts> compiled;
};

nlohmann::json projectToJson(const Project& project);
Project projectFromJson(const nlohmann::json& j);

// Story and datasets of a project, parsed and resolved.
ResolvedStory resolveProject(const Project& project);

// Projects persisted as JSON files under one directory. Mutations of one
// project are serialized; reads see the last committed revision without
// taking a lock.
class ProjectStore {
public:
    explicit ProjectStore(std::filesystem::path dir, ShotTable table = ShotTable::builtin());

    std::shared_ptr<const Project> create(const std::optional<std::string>& id, const nlohmann::json& story);
    std::shared_ptr<const Project> get(const std::string& id) const;

    std::shared_ptr<const Project> putStory(const std::string& id, long base, const nlohmann::json& story);
    std::shared_ptr<const Project> putDataset(const std::string& id, long base, const std::string& dataset,
                                              const DatasetDoc& doc);
    // Appends a scene; returns the project and the new scene id.
    std::pair<std::shared_ptr<const Project>, std::string> appendMovement(const std::string& id, long base,
                                                                          nlohmann::json scene);
    // Fields: duration, params (merged), annotation, shot, initial, final.
    std::shared_ptr<const Project> patchMovement(const std::string& id, long base, const std::string& movement,
                                                 const nlohmann::json& patch);
    std::shared_ptr<const Project> saveSnapshot(const std::string& id, long base, const std::string& name,
                                                const std::optional<CameraState>& state);
    std::shared_ptr<const Project> resetToSnapshot(const std::string& id, long base, const std::string& name);
    std::shared_ptr<const Project> setViewpoint(const std::string& id, long base, const CameraState& state);

    // Compiles the current revision and records its digest; not a mutation,
    // so the revision stays put.
    std::shared_ptr<const Project> compile(const std::string& id, const std::optional<Viewport>& viewport,
                                           const std::optional<int>& fps);

    // Compiled artifacts of the current revision; StaleScriptError otherwise.
    CompiledArtifacts artifacts(const std::string& id) const;

    const ShotTable& table() const { return table_; }

    // Writes the project file; exposed for round-trip checks.
    static std::string serialize(const Project& project);

private:
    struct Entry {
        std::mutex write;
        std::shared_ptr<const Project> current;
    };

    std::shared_ptr<Entry> entry(const std::string& id) const;
    template <class F>
    std::shared_ptr<const Project> mutate(const std::string& id, long base, F&& change);
    void persist(const Project& project) const;

    std::filesystem::path dir_;
    ShotTable table_;
    mutable std::shared_mutex mapMutex_;
    std::map<std::string, std::shared_ptr<Entry>> entries_;
};

}  // namespace mapreel::service
