#include <doctest.h>

#include <thread>

#include "mapreel/script_json.hpp"
#include "service/http_api.hpp"
#include "support/fixtures.hpp"

using namespace mapreel;
using namespace mapreel::service;
using nlohmann::json;

namespace {

const char* kPoints = R"({"type": "FeatureCollection", "features": [
  {"type": "Feature", "id": "p1", "properties": {"name": "North"}, "geometry": {"type": "Point", "coordinates": [10, 50]}},
  {"type": "Feature", "id": "p2", "properties": {"name": "South"}, "geometry": {"type": "Point", "coordinates": [12, 40]}},
  {"type": "Feature", "id": "p3", "properties": {"name": "West"}, "geometry": {"type": "Point", "coordinates": [-5, 45]}}
]})";

json storyDoc() {
    return {{"data", json::array({{{"id", "pts"}, {"format", "geojson"}}})}, {"scenes", json::array()}};
}

// A store and server on an ephemeral port for one test case.
struct Harness {
    std::filesystem::path dir;
    ProjectStore store;
    httplib::Server server;
    std::thread thread;
    int port = 0;

    explicit Harness(const std::string& name) : dir(fixtures::scratch(name)), store(dir) {
        registerRoutes(server, store);
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~Harness() {
        server.stop();
        thread.join();
    }

    httplib::Client client() const { return httplib::Client("127.0.0.1", port); }

    // Status and parsed body.
    std::pair<int, json> call(const std::string& method, const std::string& path, const json& body = nullptr) {
        auto c = client();
        const auto text = body.is_null() ? std::string() : body.dump();
        httplib::Result r = method == "GET"     ? c.Get(path)
                            : method == "POST"  ? c.Post(path, text, "application/json")
                            : method == "PUT"   ? c.Put(path, text, "application/json")
                                                : c.Patch(path, text, "application/json");
        REQUIRE(r);
        json j;
        if (r->get_header_value("Content-Type") == "application/json") j = json::parse(r->body);
        return {r->status, j};
    }

    // Creates project "demo" with the points dataset; returns its revision.
    long seed() {
        auto [s1, p] = call("POST", "/projects", {{"id", "demo"}, {"story", storyDoc()}});
        REQUIRE(s1 == 201);
        auto [s2, q] = call("PUT", "/projects/demo/datasets/pts",
                            {{"revision", p["revision"]}, {"format", "geojson"}, {"content", kPoints}});
        REQUIRE(s2 == 200);
        return q["revision"].get<long>();
    }
};

}  // namespace

TEST_CASE("project lifecycle over HTTP") {
    Harness h("svc-lifecycle");
    long rev = h.seed();
    CHECK(rev == 2);

    auto [s, got] = h.call("GET", "/projects/demo");
    CHECK(s == 200);
    CHECK(got["datasets"]["pts"]["format"] == "geojson");

    auto [sm, m] = h.call("POST", "/projects/demo/movements",
                          {{"revision", rev},
                           {"id", "north"},
                           {"design", {{"purpose", "Emphasize"}, {"target", {{"name", "North"}}}}}});
    CHECK(sm == 201);
    CHECK(m["movement"] == "north");
    rev = m["revision"].get<long>();

    auto [sm2, m2] = h.call("POST", "/projects/demo/movements",
                            {{"revision", rev}, {"design", {{"purpose", "Emphasize"}, {"target", {{"name", "West"}}}}}});
    CHECK(sm2 == 201);
    CHECK(m2["movement"] == "s2");
    rev = m2["revision"].get<long>();

    auto [sp, patched] = h.call("PATCH", "/projects/demo/movements/north",
                                {{"revision", rev}, {"duration", 4.5}, {"annotation", "up north"}});
    CHECK(sp == 200);
    CHECK(patched["story"]["scenes"][0]["designs"][0]["duration"] == 4.5);
    rev = patched["revision"].get<long>();

    auto [sc, compiled] = h.call("POST", "/projects/demo/compile", json::object());
    CHECK(sc == 200);
    CHECK(compiled["revision"] == rev);
    CHECK(compiled["digest"].get<std::string>().size() == 16);

    auto c = h.client();
    auto script = c.Get("/projects/demo/script");
    REQUIRE(script);
    CHECK(script->status == 200);
    CHECK(script->get_header_value("ETag") == "\"" + compiled["digest"].get<std::string>() + "\"");
    CHECK(script->get_header_value("X-Revision") == std::to_string(rev));
    CHECK(digestHex(script->body) == compiled["digest"]);
    const auto doc = json::parse(script->body);
    CHECK(doc["movements"][0]["duration"] == doctest::Approx(4.5));
    CHECK(doc["annotations"][0]["text"] == "up north");

    auto svg = c.Get("/projects/demo/storyboard.svg");
    REQUIRE(svg);
    CHECK(svg->status == 200);
    CHECK(svg->get_header_value("Content-Type") == "image/svg+xml");
    CHECK(svg->body.find("panel-north") != std::string::npos);

    // Any edit leaves the compiled script stale.
    auto [sv, vp] = h.call("PUT", "/projects/demo/viewpoint",
                           {{"revision", rev}, {"state", {{"lon", 1}, {"lat", 2}, {"zoom", 3}}}});
    CHECK(sv == 200);
    CHECK(vp["lastCompiled"]["current"] == false);
    CHECK(h.call("GET", "/projects/demo/script").first == 409);
}

TEST_CASE("error mapping") {
    Harness h("svc-errors");
    const long rev = h.seed();
    CHECK(h.call("GET", "/projects/missing").first == 404);
    CHECK(h.call("POST", "/projects", {{"id", "demo"}}).first == 409);
    CHECK(h.call("GET", "/projects/demo/script").first == 409);

    auto [s400, body] = h.call("POST", "/projects/demo/movements",
                               {{"revision", rev},
                                {"design", {{"purpose", "Compare"}, {"target", {{"point", {1, 2}}}}}}});
    CHECK(s400 == 400);
    CHECK(body["error"].get<std::string>().find("comparison requires multiple targets") != std::string::npos);
    CHECK(body["violations"][0]["path"].get<std::string>().find("target") != std::string::npos);

    CHECK(h.call("PUT", "/projects/demo/story", {{"story", storyDoc()}}).first == 400);
    CHECK(h.call("PUT", "/projects/demo/story", {{"revision", rev - 1}, {"story", storyDoc()}}).first == 409);
    CHECK(h.call("PATCH", "/projects/demo/movements/nope", {{"revision", rev}, {"duration", 2}}).first == 404);
    CHECK(h.call("POST", "/projects/nope/compile", json::object()).first == 404);

    auto c = h.client();
    auto bad = c.Post("/projects", "{", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);
}

TEST_CASE("non-positive durations are rejected") {
    Harness h("svc-duration");
    long rev = h.seed();
    auto [s, m] = h.call("POST", "/projects/demo/movements",
                         {{"revision", rev}, {"design", {{"purpose", "Overview"}, {"target", {{"name", "South"}}}}}});
    REQUIRE(s == 201);
    rev = m["revision"].get<long>();
    auto [sp, err] = h.call("PATCH", "/projects/demo/movements/s1", {{"revision", rev}, {"duration", 0}});
    CHECK(sp == 400);
    CHECK(err["violations"][0]["path"].get<std::string>().find("duration") != std::string::npos);
    CHECK(h.call("GET", "/projects/demo").second["revision"] == rev);
}

TEST_CASE("shot defaults endpoint") {
    Harness h("svc-defaults");
    auto [s, d] = h.call("GET", "/defaults?purpose=Supplement&targetKind=Region");
    CHECK(s == 200);
    CHECK(d["shot"] == "Pan");
    CHECK(d["params"]["duration"].get<double>() > 0.0);
    CHECK(h.call("GET", "/defaults?purpose=Supplement").first == 400);
    CHECK(h.call("GET", "/defaults?purpose=Nope&targetKind=Region").first == 400);
}

TEST_CASE("lasso and pick targets") {
    Harness h("svc-targets");
    const long rev = h.seed();
    auto [sl, lasso] = h.call("POST", "/projects/demo/targets/lasso",
                              {{"ring", {{0, 35}, {20, 35}, {20, 55}, {0, 55}}}});
    CHECK(sl == 200);
    CHECK(lasso["kind"] == "Multiple");
    CHECK(lasso["members"] == 2);
    CHECK(lasso["revision"] == rev);

    auto [sp, pick] = h.call("POST", "/projects/demo/targets/pick",
                             {{"point", {10.01, 50.01}}, {"camera", {{"lon", 10}, {"lat", 50}, {"zoom", 6}}}});
    CHECK(sp == 200);
    CHECK(pick["featureId"] == "p1");
    CHECK(pick["target"]["featureId"] == "p1");

    CHECK(h.call("POST", "/projects/demo/targets/pick",
                 {{"point", {80, 0}}, {"camera", {{"lon", 10}, {"lat", 50}, {"zoom", 6}}}})
              .first == 404);
}

TEST_CASE("snapshots save and restore the viewpoint") {
    Harness h("svc-snapshots");
    long rev = h.seed();
    const json state = {{"lon", 3}, {"lat", 4}, {"zoom", 5}, {"pitch", 10}, {"bearing", 20}};
    auto [ss, saved] = h.call("POST", "/projects/demo/snapshots", {{"revision", rev}, {"name", "home"}, {"state", state}});
    CHECK(ss == 201);
    CHECK(saved["story"]["snapshots"]["home"]["zoom"] == 5);
    rev = saved["revision"].get<long>();
    auto [sv, moved] = h.call("PUT", "/projects/demo/viewpoint",
                              {{"revision", rev}, {"state", {{"lon", 0}, {"lat", 0}, {"zoom", 1}}}});
    REQUIRE(sv == 200);
    auto [sr, reset] = h.call("POST", "/projects/demo/snapshots/home/reset", {{"revision", moved["revision"]}});
    CHECK(sr == 200);
    CHECK(reset["viewpoint"]["zoom"] == 5);
    CHECK(reset["viewpoint"]["bearing"] == 20);
    CHECK(h.call("POST", "/projects/demo/snapshots/away/reset", {{"revision", reset["revision"]}}).first == 404);
}

TEST_CASE("concurrent edits on one revision: one wins, one conflicts") {
    Harness h("svc-race");
    long rev = h.seed();
    auto [s, m] = h.call("POST", "/projects/demo/movements",
                         {{"revision", rev}, {"design", {{"purpose", "Overview"}, {"target", {{"name", "South"}}}}}});
    REQUIRE(s == 201);
    rev = m["revision"].get<long>();
    for (int round = 0; round < 10; ++round) {
        int statuses[2] = {0, 0};
        std::thread a([&] { statuses[0] = h.call("PATCH", "/projects/demo/movements/s1", {{"revision", rev}, {"duration", 3}}).first; });
        std::thread b([&] { statuses[1] = h.call("PATCH", "/projects/demo/movements/s1", {{"revision", rev}, {"duration", 5}}).first; });
        a.join();
        b.join();
        CHECK(std::min(statuses[0], statuses[1]) == 200);
        CHECK(std::max(statuses[0], statuses[1]) == 409);
        rev = h.call("GET", "/projects/demo").second["revision"].get<long>();
    }
}

TEST_CASE("projects persist and reload byte for byte") {
    const auto dir = fixtures::scratch("svc-persist");
    std::string before;
    std::string digest;
    {
        ProjectStore store(dir);
        auto p = store.create("keep", storyDoc());
        p = store.putDataset("keep", p->revision, "pts", DatasetDoc{DocumentFormat::GeoJson, kPoints, {}});
        auto [q, id] = store.appendMovement("keep", p->revision,
                                            {{"designs", json::array({{{"purpose", "Emphasize"},
                                                                       {"target", {{"name", "West"}}}}})}});
        CHECK(id == "s1");
        q = store.compile("keep", std::nullopt, std::nullopt);
        digest = q->compiled->digest;
        before = fixtures::read(dir / "keep.project.json");
        CHECK(before == ProjectStore::serialize(*q));
    }
    ProjectStore reopened(dir);
    const auto p = reopened.get("keep");
    CHECK(ProjectStore::serialize(*p) == before);
    CHECK(reopened.artifacts("keep").digest == digest);
    CHECK(projectToJson(projectFromJson(projectToJson(*p))) == projectToJson(*p));
}
