#include "service/project_store.hpp"

#include <atomic>
#include <fstream>
#include <regex>
#include <sstream>

#include "mapreel/script_json.hpp"
#include "mapreel/storyboard.hpp"

namespace mapreel::service {

namespace {

using nlohmann::json;

bool validToken(const std::string& id) {
    static const std::regex re("[A-Za-z0-9_-]{1,64}");
    return std::regex_match(id, re);
}

std::string readFile(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void writeFile(const std::filesystem::path& p, const std::string& bytes) {
    const auto tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp);
        out << bytes;
        if (!out.flush()) throw IoError("cannot write " + tmp);
    }
    std::filesystem::rename(tmp, p);
}

// Parses the story document so every stored revision is a valid one.
void checkStory(const json& story) {
    if (!story.is_object()) throw ValidationError("story must be a JSON object", "$");
    parseStory(story.dump());
}

json& designFor(json& story, const std::string& movement) {
    if (story.contains("scenes") && story["scenes"].is_array()) {
        for (auto& scene : story["scenes"]) {
            if (!scene.contains("id") || !scene["id"].is_string()) continue;
            const auto sid = scene["id"].get<std::string>();
            if (sid == movement && !scene["designs"].empty()) return scene["designs"][0];
            if (movement == sid + "-2" && scene["designs"].size() > 1) return scene["designs"][1];
        }
    }
    throw NotFoundError("no movement '" + movement + "'");
}

json datasetToJson(const DatasetDoc& d) {
    return {{"format", d.format == DocumentFormat::GeoJson ? "geojson" : "csv"},
            {"content", d.content},
            {"options",
             {{"lonColumn", d.delimited.lonColumn},
              {"latColumn", d.delimited.latColumn},
              {"idColumn", d.delimited.idColumn},
              {"nameColumn", d.delimited.nameColumn},
              {"delimiter", std::string(1, d.delimited.delimiter)}}}};
}

DatasetDoc datasetFromJson(const json& j) {
    DatasetDoc d;
    d.format = parseDocumentFormat(j.at("format").get<std::string>());
    d.content = j.at("content").get<std::string>();
    if (j.contains("options")) {
        const auto& o = j["options"];
        d.delimited.lonColumn = o.value("lonColumn", d.delimited.lonColumn);
        d.delimited.latColumn = o.value("latColumn", d.delimited.latColumn);
        d.delimited.idColumn = o.value("idColumn", d.delimited.idColumn);
        d.delimited.nameColumn = o.value("nameColumn", d.delimited.nameColumn);
        const auto delim = o.value("delimiter", std::string(","));
        if (delim.size() != 1) throw ValidationError("delimiter must be a single character", "options.delimiter");
        d.delimited.delimiter = delim[0];
    }
    return d;
}

}  // namespace

StaleRevisionError::StaleRevisionError(long expected, long actual)
    : std::runtime_error("stale revision: request is based on " + std::to_string(expected) + ", current is " +
                         std::to_string(actual)),
      expected_(expected),
      actual_(actual) {}

json projectToJson(const Project& p) {
    json datasets = json::object();
    for (const auto& [id, d] : p.datasets) datasets[id] = datasetToJson(d);
    json compiled;
    if (p.compiled) compiled = {{"revision", p.compiled->revision}, {"digest", p.compiled->digest}};
    return {{"id", p.id},
            {"revision", p.revision},
            {"story", p.story},
            {"datasets", std::move(datasets)},
            {"viewpoint", p.viewpoint ? cameraStateToJson(*p.viewpoint) : json()},
            {"viewport", {{"width", p.viewport.width}, {"height", p.viewport.height}}},
            {"lastCompiled", std::move(compiled)}};
}

Project projectFromJson(const json& j) {
    Project p;
    p.id = j.at("id").get<std::string>();
    p.revision = j.at("revision").get<long>();
    p.story = j.at("story");
    for (const auto& [id, d] : j.at("datasets").items()) p.datasets.emplace(id, datasetFromJson(d));
    if (!j.at("viewpoint").is_null()) p.viewpoint = cameraStateFromJson(j["viewpoint"], "$.viewpoint");
    p.viewport = {j.at("viewport").at("width").get<int>(), j.at("viewport").at("height").get<int>()};
    if (!j.at("lastCompiled").is_null()) {
        CompiledArtifacts c;
        c.revision = j["lastCompiled"].at("revision").get<long>();
        c.digest = j["lastCompiled"].at("digest").get<std::string>();
        p.compiled = std::move(c);
    }
    return p;
}

ResolvedStory resolveProject(const Project& project) {
    const Story story = parseStory(project.story.dump());
    std::vector<Dataset> datasets;
    for (const auto& ref : story.data) {
        const auto it = project.datasets.find(ref.id);
        if (it == project.datasets.end()) {
            throw ValidationError("dataset '" + ref.id + "' has not been uploaded", "$.data");
        }
        try {
            datasets.push_back({ref.id, loadFeatures(it->second.content, ref.format, ref.delimited)});
        } catch (const IngestError& e) {
            throw IngestError("dataset '" + ref.id + "': " + e.what(), e.record());
        }
    }
    return resolveTargets(story, std::move(datasets));
}

std::string ProjectStore::serialize(const Project& project) { return projectToJson(project).dump(2) + "\n"; }

ProjectStore::ProjectStore(std::filesystem::path dir, ShotTable table) : dir_(std::move(dir)), table_(std::move(table)) {
    std::filesystem::create_directories(dir_);
    for (const auto& file : std::filesystem::directory_iterator(dir_)) {
        const auto name = file.path().filename().string();
        const std::string suffix = ".project.json";
        if (name.size() <= suffix.size() || name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) {
            continue;
        }
        Project p = projectFromJson(json::parse(readFile(file.path())));
        if (p.compiled) {
            // Artifacts are only trusted when their bytes still hash to the digest.
            try {
                p.compiled->script = readFile(dir_ / (p.id + ".script.json"));
                p.compiled->storyboard = readFile(dir_ / (p.id + ".storyboard.svg"));
                if (digestHex(p.compiled->script) != p.compiled->digest) p.compiled.reset();
            } catch (const IoError&) {
                p.compiled.reset();
            }
        }
        auto e = std::make_shared<Entry>();
        const auto id = p.id;
        e->current = std::make_shared<const Project>(std::move(p));
        entries_.emplace(id, std::move(e));
    }
}

std::shared_ptr<ProjectStore::Entry> ProjectStore::entry(const std::string& id) const {
    std::shared_lock lock(mapMutex_);
    const auto it = entries_.find(id);
    if (it == entries_.end()) throw NotFoundError("no project '" + id + "'");
    return it->second;
}

void ProjectStore::persist(const Project& project) const {
    if (project.compiled) {
        writeFile(dir_ / (project.id + ".script.json"), project.compiled->script);
        writeFile(dir_ / (project.id + ".storyboard.svg"), project.compiled->storyboard);
    }
    writeFile(dir_ / (project.id + ".project.json"), serialize(project));
}

template <class F>
std::shared_ptr<const Project> ProjectStore::mutate(const std::string& id, long base, F&& change) {
    auto e = entry(id);
    std::lock_guard lock(e->write);
    const auto current = std::atomic_load(&e->current);
    if (base != current->revision) throw StaleRevisionError(base, current->revision);
    auto next = std::make_shared<Project>(*current);
    change(*next);
    next->revision = current->revision + 1;
    persist(*next);
    std::shared_ptr<const Project> published = std::move(next);
    std::atomic_store(&e->current, published);
    return published;
}

std::shared_ptr<const Project> ProjectStore::create(const std::optional<std::string>& id, const json& story) {
    checkStory(story);
    std::unique_lock lock(mapMutex_);
    std::string pid;
    if (id) {
        if (!validToken(*id)) throw ValidationError("project id must match [A-Za-z0-9_-]{1,64}", "id");
        if (entries_.contains(*id)) throw ProjectExistsError("project '" + *id + "' already exists");
        pid = *id;
    } else {
        std::size_t n = entries_.size() + 1;
        while (entries_.contains("p" + std::to_string(n))) ++n;
        pid = "p" + std::to_string(n);
    }
    auto p = std::make_shared<Project>();
    p->id = pid;
    p->revision = 1;
    p->story = story;
    persist(*p);
    auto e = std::make_shared<Entry>();
    e->current = p;
    entries_.emplace(pid, e);
    return p;
}

std::shared_ptr<const Project> ProjectStore::get(const std::string& id) const {
    return std::atomic_load(&entry(id)->current);
}

std::shared_ptr<const Project> ProjectStore::putStory(const std::string& id, long base, const json& story) {
    checkStory(story);
    return mutate(id, base, [&](Project& p) { p.story = story; });
}

std::shared_ptr<const Project> ProjectStore::putDataset(const std::string& id, long base, const std::string& dataset,
                                                        const DatasetDoc& doc) {
    if (!validToken(dataset)) throw ValidationError("dataset id must match [A-Za-z0-9_-]{1,64}", "dataset");
    loadFeatures(doc.content, doc.format, doc.delimited);
    return mutate(id, base, [&](Project& p) { p.datasets[dataset] = doc; });
}

std::pair<std::shared_ptr<const Project>, std::string> ProjectStore::appendMovement(const std::string& id, long base,
                                                                                   json scene) {
    if (!scene.is_object()) throw ValidationError("scene must be an object", "scene");
    std::string sid;
    auto p = mutate(id, base, [&](Project& next) {
        json story = next.story;
        if (!story.contains("scenes")) story["scenes"] = json::array();
        auto& scenes = story["scenes"];
        if (!scene.contains("id")) {
            std::size_t n = scenes.size() + 1;
            auto taken = [&](const std::string& c) {
                for (const auto& s : scenes) {
                    if (s.value("id", std::string()) == c) return true;
                }
                return false;
            };
            while (taken("s" + std::to_string(n))) ++n;
            scene["id"] = "s" + std::to_string(n);
        }
        sid = scene["id"].is_string() ? scene["id"].get<std::string>() : std::string();
        scenes.push_back(scene);
        checkStory(story);
        next.story = std::move(story);
    });
    return {p, sid};
}

std::shared_ptr<const Project> ProjectStore::patchMovement(const std::string& id, long base,
                                                           const std::string& movement, const json& patch) {
    if (!patch.is_object()) throw ValidationError("patch must be an object", "$");
    return mutate(id, base, [&](Project& next) {
        json story = next.story;
        json& design = designFor(story, movement);
        for (const auto& [key, value] : patch.items()) {
            if (key == "params") {
                if (!value.is_object()) throw ValidationError("params must be an object", "params");
                if (!design.contains("params")) design["params"] = json::object();
                for (const auto& [pk, pv] : value.items()) {
                    if (pv.is_null()) design["params"].erase(pk);
                    else design["params"][pk] = pv;
                }
            } else if (key == "duration" || key == "annotation" || key == "shot" || key == "initial" ||
                       key == "final" || key == "purpose" || key == "target" || key == "whip") {
                if (value.is_null()) design.erase(key);
                else design[key] = value;
            } else {
                throw ValidationError("unknown field '" + key + "'", key);
            }
        }
        checkStory(story);
        next.story = std::move(story);
    });
}

std::shared_ptr<const Project> ProjectStore::saveSnapshot(const std::string& id, long base, const std::string& name,
                                                          const std::optional<CameraState>& state) {
    if (name.empty()) throw ValidationError("snapshot name must not be empty", "name");
    return mutate(id, base, [&](Project& next) {
        const auto s = state ? state : next.viewpoint;
        if (!s) throw ValidationError("no state given and no current viewpoint to save", "state");
        json story = next.story;
        story["snapshots"][name] = cameraStateToJson(*s);
        checkStory(story);
        next.story = std::move(story);
        next.viewpoint = *s;
    });
}

std::shared_ptr<const Project> ProjectStore::resetToSnapshot(const std::string& id, long base,
                                                             const std::string& name) {
    {
        const auto current = get(id);
        if (!current->story.contains("snapshots") || !current->story["snapshots"].contains(name)) {
            throw NotFoundError("no snapshot '" + name + "'");
        }
    }
    return mutate(id, base, [&](Project& next) {
        if (!next.story.contains("snapshots") || !next.story["snapshots"].contains(name)) {
            throw NotFoundError("no snapshot '" + name + "'");
        }
        next.viewpoint = cameraStateFromJson(next.story["snapshots"][name], "$.snapshots." + name);
    });
}

std::shared_ptr<const Project> ProjectStore::setViewpoint(const std::string& id, long base,
                                                          const CameraState& state) {
    validate(state);
    return mutate(id, base, [&](Project& next) { next.viewpoint = state; });
}

std::shared_ptr<const Project> ProjectStore::compile(const std::string& id, const std::optional<Viewport>& viewport,
                                                     const std::optional<int>& fps) {
    auto e = entry(id);
    std::lock_guard lock(e->write);
    const auto current = std::atomic_load(&e->current);
    const auto resolved = resolveProject(*current);
    CompileOptions options;
    options.viewport = viewport.value_or(current->viewport);
    options.fps = fps;
    options.table = &table_;
    const auto script = mapreel::compile(resolved, options);

    auto next = std::make_shared<Project>(*current);
    CompiledArtifacts c;
    c.revision = current->revision;
    c.script = exportScript(script);
    c.digest = digestHex(c.script);
    c.storyboard = storyboard(resolved, script);
    next->compiled = std::move(c);
    persist(*next);
    std::shared_ptr<const Project> published = std::move(next);
    std::atomic_store(&e->current, published);
    return published;
}

CompiledArtifacts ProjectStore::artifacts(const std::string& id) const {
    const auto p = get(id);
    if (!p->compiled || p->compiled->revision != p->revision) {
        throw StaleScriptError("project '" + id + "' has no compiled script for revision " +
                               std::to_string(p->revision) + "; compile it first");
    }
    return *p->compiled;
}

}  // namespace mapreel::service
