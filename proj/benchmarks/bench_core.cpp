#include <benchmark/benchmark.h>

#include <filesystem>

#include "mapreel/compiler.hpp"
#include "mapreel/script_json.hpp"

using namespace mapreel;

namespace {

void BM_FitBounds(benchmark::State& state) {
    const GeoBounds b{-10, 35, 25, 60};
    const double pitch = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fitBounds(b, {1280, 720}, 0.1, pitch, 30.0));
}
BENCHMARK(BM_FitBounds)->Arg(0)->Arg(30)->Arg(60);

void BM_FlyToSample(benchmark::State& state) {
    const CameraState a{{-74.0, 40.7}, 10, 0, 0, kDefaultFov};
    const CameraState b{{139.7, 35.7}, 12, 0, 0, kDefaultFov};
    const auto t = Trajectory::flyTo(a, b, 8.0, 1280.0);
    double s = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(t.at(s));
        s += 0.01;
        if (s > 8.0) s = 0.0;
    }
}
BENCHMARK(BM_FlyToSample);

void BM_CompileCaseStudy(benchmark::State& state) {
    const auto story = loadResolvedStory(std::filesystem::path(MAPREEL_SOURCE_DIR) / "stories/us-incidents/story.json");
    for (auto _ : state) benchmark::DoNotOptimize(exportScript(compile(story)));
}
BENCHMARK(BM_CompileCaseStudy)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
