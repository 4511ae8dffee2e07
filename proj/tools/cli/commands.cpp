#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

#include "mapreel/compiler.hpp"
#include "mapreel/script_json.hpp"
#include "mapreel/storyboard.hpp"
#include "service/http_api.hpp"

namespace mapreel::cli {

namespace {

struct Inputs {
    std::string story;
    std::vector<std::string> data;
    int width = 1280;
    int height = 720;
    std::optional<int> fps;
};

void addInputs(CLI::App& cmd, Inputs& in) {
    cmd.add_option("story", in.story, "Story document (JSON)")->required();
    cmd.add_option("--data", in.data, "Dataset file for a story data id, as ID=PATH; repeatable");
    cmd.add_option("--width", in.width, "Viewport width in pixels")->capture_default_str();
    cmd.add_option("--height", in.height, "Viewport height in pixels")->capture_default_str();
    cmd.add_option("--fps", in.fps, "Frames per second; the story default when omitted");
}

std::map<std::string, std::filesystem::path> overrides(const std::vector<std::string>& data) {
    std::map<std::string, std::filesystem::path> out;
    for (const auto& d : data) {
        const auto eq = d.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == d.size()) {
            throw ValidationError("--data expects ID=PATH, got '" + d + "'", "--data");
        }
        out[d.substr(0, eq)] = d.substr(eq + 1);
    }
    return out;
}

void writeOutput(const std::string& path, const std::string& bytes, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << bytes;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << bytes) || !f.flush()) throw IoError("cannot write " + path);
}

struct Compiled {
    ResolvedStory story;
    CameraScript script;
};

Compiled compileInputs(const Inputs& in, const ShotTable& table) {
    Compiled c{loadResolvedStory(in.story, overrides(in.data)), {}};
    CompileOptions options;
    options.viewport = {in.width, in.height};
    options.fps = in.fps;
    options.table = &table;
    c.script = compile(c.story, options);
    return c;
}

int report(std::ostream& err, const std::exception& e, int code) {
    err << "error: " << e.what() << "\n";
    return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compile geographic story documents into camera scripts"};
    app.require_subcommand(1);

    Inputs compileIn;
    std::string compileOut;
    auto* compileCmd = app.add_subcommand("compile", "Write the camera script of a story");
    addInputs(*compileCmd, compileIn);
    compileCmd->add_option("-o,--out", compileOut, "Output file; stdout when omitted");

    Inputs validateIn;
    auto* validateCmd = app.add_subcommand("validate", "Check a story and its data without writing anything");
    addInputs(*validateCmd, validateIn);

    Inputs boardIn;
    std::string boardOut;
    auto* boardCmd = app.add_subcommand("storyboard", "Write the SVG storyboard of a story");
    addInputs(*boardCmd, boardIn);
    boardCmd->add_option("-o,--out", boardOut, "Output file; stdout when omitted");

    int port = 8080;
    std::string host = "127.0.0.1";
    std::string projects;
    auto* serveCmd = app.add_subcommand("serve", "Run the project service");
    serveCmd->add_option("--port", port, "Port to listen on")->capture_default_str();
    serveCmd->add_option("--host", host, "Address to bind")->capture_default_str();
    serveCmd->add_option("--projects", projects, "Directory holding project files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        const ShotTable table = ShotTable::fromEnvironment();
        if (*compileCmd) {
            const auto c = compileInputs(compileIn, table);
            writeOutput(compileOut, exportScript(c.script), out);
            std::size_t authored = c.script.movements.size();
            err << "compiled " << authored << " movements, " << c.script.duration << " s, "
                << (c.script.tracks.empty() ? 0 : c.script.tracks[0].frames.size()) << " frames\n";
        } else if (*validateCmd) {
            const auto c = compileInputs(validateIn, table);
            for (const auto& d : c.story.story.injectedDefaults) out << "default " << d << "\n";
            out << "ok: " << c.script.movements.size() << " movements, " << c.script.duration << " s\n";
        } else if (*boardCmd) {
            const auto c = compileInputs(boardIn, table);
            writeOutput(boardOut, storyboard(c.story, c.script), out);
        } else if (*serveCmd) {
            service::ProjectStore store(projects, table);
            httplib::Server server;
            service::registerRoutes(server, store);
            err << "listening on " << host << ":" << port << "\n";
            if (!server.listen(host, port)) throw IoError("cannot listen on " + host + ":" + std::to_string(port));
        }
    } catch (const TimelineError& e) {
        err << "error: " << e.what() << "\n";
        for (const auto& v : e.violations()) err << "  " << toString(v.kind) << ": " << v.message << "\n";
        return kInvalid;
    } catch (const ValidationError& e) {
        return report(err, e, kInvalid);
    } catch (const NotFoundError& e) {
        return report(err, e, kInvalid);
    } catch (const IoError& e) {
        return report(err, e, kIoFailure);
    } catch (const std::filesystem::filesystem_error& e) {
        return report(err, e, kIoFailure);
    }
    return kOk;
}

}  // namespace mapreel::cli
