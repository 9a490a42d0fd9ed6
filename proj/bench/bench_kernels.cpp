// Serial reference kernels against their OpenMP counterparts.

#include "mgdeploy/siting.hpp"
#include "mgdeploy/siting_reference.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

using namespace mgdeploy;
namespace ref = mgdeploy::siting::reference;

namespace {

BinaryGrid random_mask(std::size_t n, double density, unsigned seed)
{
    BinaryGrid g;
    g.rows = g.cols = n;
    g.cell_size_m = 90.0;
    g.cells.assign(n * n, 0);
    std::mt19937 rng(seed);
    std::bernoulli_distribution hit(density);
    for (auto& c : g.cells) c = hit(rng) ? 1 : 0;
    return g;
}

GridRaster random_layer(std::size_t n, unsigned seed)
{
    GridRaster r;
    r.rows = r.cols = n;
    r.cells.resize(n * n);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 40.0);
    for (auto& c : r.cells) c = u(rng);
    return r;
}

std::vector<BinaryGrid> layers(std::size_t n)
{
    std::vector<BinaryGrid> out;
    for (unsigned k = 0; k < 6; ++k) out.push_back(random_mask(n, 0.05 * (k + 1), 10 + k));
    return out;
}

}  // namespace

static void BM_BufferReference(benchmark::State& state)
{
    const auto mask = random_mask(static_cast<std::size_t>(state.range(0)), state.range(1) / 1000.0, 1);
    for (auto _ : state) benchmark::DoNotOptimize(ref::buffer_violations(mask, 1609.344));
}

static void BM_BufferParallel(benchmark::State& state)
{
    const auto mask = random_mask(static_cast<std::size_t>(state.range(0)), state.range(1) / 1000.0, 1);
    for (auto _ : state) benchmark::DoNotOptimize(siting::buffer_violations(mask, 1609.344));
}

static void BM_RuleReference(benchmark::State& state)
{
    const auto layer = random_layer(static_cast<std::size_t>(state.range(0)), 2);
    siting::ExclusionRule rule{"slope", siting::RuleMode::threshold_above, 10.0, "percent", 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(ref::apply_exclusion_rule(layer, rule));
}

static void BM_RuleParallel(benchmark::State& state)
{
    const auto layer = random_layer(static_cast<std::size_t>(state.range(0)), 2);
    siting::ExclusionRule rule{"slope", siting::RuleMode::threshold_above, 10.0, "percent", 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(siting::apply_exclusion_rule(layer, rule));
}

static void BM_CompositeReference(benchmark::State& state)
{
    const auto ls = layers(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ref::composite(ls));
}

static void BM_CompositeParallel(benchmark::State& state)
{
    const auto ls = layers(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(siting::composite(ls));
}

static void BM_AggregateReference(benchmark::State& state)
{
    const auto map = siting::composite(layers(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(ref::aggregate_parcels(map));
}

static void BM_AggregateParallel(benchmark::State& state)
{
    const auto map = siting::composite(layers(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(siting::aggregate_parcels(map));
}

// Second argument: violation density in permille.
BENCHMARK(BM_BufferReference)->ArgsProduct({{256, 1024}, {2, 50}});
BENCHMARK(BM_BufferParallel)->ArgsProduct({{256, 1024}, {2, 50}});
BENCHMARK(BM_RuleReference)->Arg(1024)->Arg(2048);
BENCHMARK(BM_RuleParallel)->Arg(1024)->Arg(2048);
BENCHMARK(BM_CompositeReference)->Arg(1024)->Arg(2048);
BENCHMARK(BM_CompositeParallel)->Arg(1024)->Arg(2048);
BENCHMARK(BM_AggregateReference)->Arg(1024)->Arg(2048);
BENCHMARK(BM_AggregateParallel)->Arg(1024)->Arg(2048);

int main(int argc, char** argv)
{
    benchmark::AddCustomContext("omp_max_threads", std::to_string(omp_get_max_threads()));
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
