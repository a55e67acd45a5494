#include <benchmark/benchmark.h>

#include "archmark/assignment.hpp"
#include "archmark/curvature.hpp"
#include "archmark/peaks.hpp"
#include "archmark/pipeline.hpp"
#include "archmark/segmentation.hpp"
#include "archmark/synthetic.hpp"

using namespace archmark;

namespace {

const SyntheticJaw& jaw()
{
    static const SyntheticJaw j = generate_synthetic_jaw(default_synthetic_spec(parse_jaw_kind("adult_upper")));
    return j;
}

void BM_CreaseCosts(benchmark::State& state)
{
    const auto& mesh = jaw().mesh;
    for (auto _ : state)
        benchmark::DoNotOptimize(crease_costs(mesh));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mesh.face_count()));
}
BENCHMARK(BM_CreaseCosts)->Unit(benchmark::kMillisecond);

void BM_FloodFillAllPeaks(benchmark::State& state)
{
    const auto& j = jaw();
    const auto costs = crease_costs(j.mesh);
    const auto peaks = filter_by_height(find_peaks(j.mesh, j.frame), 6.0);
    const FloodOptions options{.t_max = 3.0, .spill_radius = 12.0};
    for (auto _ : state)
        for (const auto& p : peaks)
            benchmark::DoNotOptimize(flood_fill(j.mesh, costs, p, j.frame, options));
    state.counters["peaks"] = static_cast<double>(peaks.size());
}
BENCHMARK(BM_FloodFillAllPeaks)->Unit(benchmark::kMillisecond);

void BM_SolveAssignment(benchmark::State& state)
{
    const auto types = tooth_types(parse_jaw_kind("adult_upper"));
    const auto groups = molar_groups(types);
    CostTable costs;
    costs.rows = static_cast<std::size_t>(state.range(0));
    costs.cols = types.size();
    for (std::size_t i = 0; i < costs.rows * costs.cols; ++i)
        costs.values.push_back(static_cast<double>((i * 7919) % 97) / 13.0);
    const std::vector<double> priors(types.size(), 0.8);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_assignment(costs, priors, groups));
}
BENCHMARK(BM_SolveAssignment)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMicrosecond);

void BM_Pipeline(benchmark::State& state)
{
    const auto& j = jaw();
    const auto db = load_training_db(ARCHMARK_BENCH_DATA_DIR "/synthetic_db_adult_upper.json");
    PipelineConfig config;
    config.jaw_kind = parse_jaw_kind("adult_upper");
    config.threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(run_pipeline(j.mesh, db, config));
    state.counters["faces"] = static_cast<double>(j.mesh.face_count());
}
BENCHMARK(BM_Pipeline)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
