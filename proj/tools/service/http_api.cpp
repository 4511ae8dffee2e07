#include "service/http_api.hpp"

#include <optional>

namespace mapreel::service {

namespace {

using nlohmann::json;

// Thrown for malformed request bodies.
class BadRequest : public ValidationError {
public:
    using ValidationError::ValidationError;
};

json parseBody(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        return json::parse(req.body);
    } catch (const json::parse_error& e) {
        throw BadRequest(std::string("request body is not valid JSON: ") + e.what(), "$");
    }
}

long baseRevision(const json& body) {
    const auto it = body.find("revision");
    if (it == body.end() || !it->is_number_integer()) {
        throw BadRequest("revision is required: send the revision the change is based on", "revision");
    }
    return it->get<long>();
}

template <class T>
std::optional<T> optionalField(const json& body, const char* key) {
    const auto it = body.find(key);
    if (it == body.end() || it->is_null()) return std::nullopt;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw BadRequest(std::string("field '") + key + "' has the wrong type", key);
    }
}

GeoPoint pointField(const json& body, const char* key) {
    const auto it = body.find(key);
    if (it == body.end() || !it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
        throw BadRequest(std::string(key) + " must be [lon, lat]", key);
    }
    GeoPoint p{(*it)[0].get<double>(), (*it)[1].get<double>()};
    validate(p);
    return p;
}

std::optional<Viewport> viewportField(const json& body) {
    if (!body.contains("viewport")) return std::nullopt;
    const auto& v = body["viewport"];
    if (!v.is_object() || !v.contains("width") || !v.contains("height") || !v["width"].is_number_integer() ||
        !v["height"].is_number_integer()) {
        throw BadRequest("viewport must be {width, height} in whole pixels", "viewport");
    }
    Viewport vp{v["width"].get<int>(), v["height"].get<int>()};
    validate(vp);
    return vp;
}

void sendJson(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
}

json summary(const Project& p) {
    json datasets = json::object();
    for (const auto& [id, d] : p.datasets) {
        datasets[id] = {{"format", d.format == DocumentFormat::GeoJson ? "geojson" : "csv"},
                        {"bytes", d.content.size()}};
    }
    json compiled;
    if (p.compiled) {
        compiled = {{"revision", p.compiled->revision},
                    {"digest", p.compiled->digest},
                    {"current", p.compiled->revision == p.revision}};
    }
    return {{"id", p.id},
            {"revision", p.revision},
            {"story", p.story},
            {"datasets", std::move(datasets)},
            {"viewpoint", p.viewpoint ? cameraStateToJson(*p.viewpoint) : json()},
            {"viewport", {{"width", p.viewport.width}, {"height", p.viewport.height}}},
            {"lastCompiled", std::move(compiled)}};
}

// All features of a project, or of one dataset.
std::vector<std::pair<std::string, Feature>> featuresOf(const Project& p, const std::optional<std::string>& data) {
    std::vector<std::pair<std::string, Feature>> out;
    if (data && !p.datasets.contains(*data)) throw NotFoundError("no dataset '" + *data + "'");
    for (const auto& [id, doc] : p.datasets) {
        if (data && id != *data) continue;
        for (auto& f : loadFeatures(doc.content, doc.format, doc.delimited)) out.emplace_back(id, std::move(f));
    }
    return out;
}

json targetSummary(const GeospatialTarget& t) {
    json j = {{"kind", std::string(toString(t.kind()))}, {"label", labelOf(t)}};
    if (!t.isNone()) {
        const auto b = boundsOf(t);
        j["bounds"] = json::array({b.west, b.south, b.east, b.north});
    }
    return j;
}

template <class F>
void guarded(httplib::Response& res, F&& f) {
    try {
        f();
    } catch (const TimelineError& e) {
        json violations = json::array();
        for (const auto& v : e.violations()) {
            violations.push_back({{"path", std::string(toString(v.kind))}, {"message", v.message}});
        }
        sendJson(res, 400, errorBody(e.what(), violations));
    } catch (const ValidationError& e) {
        sendJson(res, 400, errorBody(e.what(), json::array({{{"path", e.field()}, {"message", e.what()}}})));
    } catch (const NotFoundError& e) {
        sendJson(res, 404, errorBody(e.what()));
    } catch (const StaleRevisionError& e) {
        json body = errorBody(e.what());
        body["revision"] = e.actual();
        sendJson(res, 409, body);
    } catch (const ProjectExistsError& e) {
        sendJson(res, 409, errorBody(e.what()));
    } catch (const StaleScriptError& e) {
        sendJson(res, 409, errorBody(e.what()));
    } catch (const IoError& e) {
        sendJson(res, 500, errorBody(e.what()));
    } catch (const std::exception& e) {
        sendJson(res, 500, errorBody(std::string("internal error: ") + e.what()));
    }
}

}  // namespace

json errorBody(const std::string& message, const json& violations) {
    return {{"error", message}, {"violations", violations}};
}

void registerRoutes(httplib::Server& server, ProjectStore& store) {
    server.Post("/projects", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = parseBody(req);
            const auto story = body.contains("story") ? body["story"] : json{{"scenes", json::array()}};
            const auto p = store.create(optionalField<std::string>(body, "id"), story);
            sendJson(res, 201, summary(*p));
        });
    });

    server.Get(R"(/projects/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { sendJson(res, 200, summary(*store.get(req.matches[1]))); });
    });

    server.Put(R"(/projects/([^/]+)/story)", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = parseBody(req);
            if (!body.contains("story")) throw BadRequest("story is required", "story");
            const auto p = store.putStory(req.matches[1], baseRevision(body), body["story"]);
            sendJson(res, 200, summary(*p));
        });
    });

    server.Put(R"(/projects/([^/]+)/datasets/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = parseBody(req);
            DatasetDoc doc;
            doc.format = parseDocumentFormat(optionalField<std::string>(body, "format").value_or("geojson"));
            const auto content = optionalField<std::string>(body, "content");
            if (!content) throw BadRequest("content is required", "content");
            doc.content = *content;
            if (body.contains("options")) {
                const auto& o = body["options"];
                if (!o.is_object()) throw BadRequest("options must be an object", "options");
                doc.delimited.lonColumn = optionalField<std::string>(o, "lonColumn").value_or("lon");
                doc.delimited.latColumn = optionalField<std::string>(o, "latColumn").value_or("lat");
                doc.delimited.idColumn = optionalField<std::string>(o, "idColumn").value_or("id");
                doc.delimited.nameColumn = optionalField<std::string>(o, "nameColumn").value_or("name");
                const auto d = optionalField<std::string>(o, "delimiter").value_or(",");
                if (d.size() != 1) throw BadRequest("delimiter must be one character", "options.delimiter");
                doc.delimited.delimiter = d[0];
            }
            const auto p = store.putDataset(req.matches[1], baseRevision(body), req.matches[2], doc);
            sendJson(res, 200, summary(*p));
        });
    });

    server.Post(R"(/projects/([^/]+)/targets/lasso)", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = parseBody(req);
            const auto p = store.get(req.matches[1]);
            if (!body.contains("ring")) throw BadRequest("ring is required", "ring");
            std::vector<GeoPoint> ring;
            for (const auto& c : body["ring"]) {
                if (!c.is_array() || c.size() != 2) throw BadRequest("ring must be a list of [lon, lat]", "ring");
                ring.push_back({c[0].get<double>(), c[1].get<double>()});
                validate(ring.back());
            }
            const GeoPolygon lasso(ring);
            const auto data = optionalField<std::string>(body, "data");
            std::vector<Feature> features;
            for (auto& [_, f] : featuresOf(*p, data)) features.push_back(std::move(f));
            const auto target = selectByLasso(features, lasso);
            json spec = {{"lasso", body["ring"]}};
            if (data) spec["data"] = *data;
            json out = targetSummary(target);
            out["members"] = target.kind() == TargetKind::Multiple ? target.members().size() : 0;
            out["target"] = spec;
            out["revision"] = p->revision;
            sendJson(res, 200, out);
        });
    });

    server.Post(R"(/projects/([^/]+)/targets/pick)", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = parseBody(req);
            const auto p = store.get(req.matches[1]);
            const auto point = pointField(body, "point");
            if (!body.contains("camera")) throw BadRequest("camera is required", "camera");
            const auto camera = cameraStateFromJson(body["camera"], "camera");
            const auto viewport = viewportField(body).value_or(p->viewport);
            const double radius = optionalField<double>(body, "radiusPx").value_or(12.0);
            const auto data = optionalField<std::string>(body, "data");
            const auto all = featuresOf(*p, data);
            std::vector<Feature> features;
            for (const auto& [_, f] : all) features.push_back(f);
            const Feature& hit = pickFeature(features, point, radius, camera, viewport);
            const auto& dataset = all[static_cast<std::size_t>(&hit - features.data())].first;
            json out = targetSummary(toTarget(hit));
            out["featureId"] = hit.id;
            out["target"] = {{"featureId", hit.id}, {"data", dataset}};
            out["revision"] = p->revision;
            sendJson(res, 200, out);
        });
    });

    server.Get("/defaults", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            if (!req.has_param("purpose")) throw BadRequest("purpose is required", "purpose");
            if (!req.has_param("targetKind")) throw BadRequest("targetKind is required", "targetKind");
            const auto purpose = parsePurpose(req.get_param_value("purpose"));
            const auto kind = parseTargetKind(req.get_param_value("targetKind"));
            const auto d = store.table().lookup(purpose, kind);
            sendJson(res, 200,
                     {{"purpose", std::string(toString(purpose))},
                      {"targetKind", std::string(toString(kind))},
                      {"shot", std::string(toString(d.shot.type))},
                      {"whip", d.shot.whip},
                      {"params", {{"intensity", d.params.intensity}, {"duration", d.params.duration}}}});
        });
    });

    server.Post(R"(/projects/([^/]+)/movements)", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = parseBody(req);
            json scene;
            if (body.contains("scene")) {
                scene = body["scene"];
            } else if (body.contains("design")) {
                scene = {{"designs", json::array({body["design"]})}};
                if (body.contains("id")) scene["id"] = body["id"];
            } else {
                throw BadRequest("send a design or a scene", "design");
            }
            const auto [p, id] = store.appendMovement(req.matches[1], baseRevision(body), scene);
            json out = summary(*p);
            out["movement"] = id;
            sendJson(res, 201, out);
        });
    });

    server.Patch(R"(/projects/([^/]+)/movements/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            json body = parseBody(req);
            const long base = baseRevision(body);
            body.erase("revision");
            const auto p = store.patchMovement(req.matches[1], base, req.matches[2], body);
            sendJson(res, 200, summary(*p));
        });
    });

    server.Post(R"(/projects/([^/]+)/snapshots)", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = parseBody(req);
            const auto name = optionalField<std::string>(body, "name");
            if (!name) throw BadRequest("name is required", "name");
            std::optional<CameraState> state;
            if (body.contains("state")) state = cameraStateFromJson(body["state"], "state");
            const auto p = store.saveSnapshot(req.matches[1], baseRevision(body), *name, state);
            sendJson(res, 201, summary(*p));
        });
    });

    server.Post(R"(/projects/([^/]+)/snapshots/([^/]+)/reset)",
                [&](const httplib::Request& req, httplib::Response& res) {
                    guarded(res, [&] {
                        const json body = parseBody(req);
                        const auto p = store.resetToSnapshot(req.matches[1], baseRevision(body), req.matches[2]);
                        sendJson(res, 200, summary(*p));
                    });
                });

    server.Put(R"(/projects/([^/]+)/viewpoint)", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = parseBody(req);
            if (!body.contains("state")) throw BadRequest("state is required", "state");
            const auto p = store.setViewpoint(req.matches[1], baseRevision(body),
                                              cameraStateFromJson(body["state"], "state"));
            sendJson(res, 200, summary(*p));
        });
    });

    server.Post(R"(/projects/([^/]+)/compile)", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = parseBody(req);
            const auto p = store.compile(req.matches[1], viewportField(body), optionalField<int>(body, "fps"));
            sendJson(res, 200, {{"revision", p->revision}, {"digest", p->compiled->digest}});
        });
    });

    server.Get(R"(/projects/([^/]+)/script)", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto a = store.artifacts(req.matches[1]);
            res.status = 200;
            res.set_header("ETag", "\"" + a.digest + "\"");
            res.set_header("X-Revision", std::to_string(a.revision));
            res.set_content(a.script, "application/json");
        });
    });

    server.Get(R"(/projects/([^/]+)/storyboard\.svg)", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto a = store.artifacts(req.matches[1]);
            res.status = 200;
            res.set_header("X-Revision", std::to_string(a.revision));
            res.set_content(a.storyboard, "image/svg+xml");
        });
    });
}

}  // namespace mapreel::service
