// Serial reference against the OpenMP sweep: every bus of a random meshed
// network faulted once. Arg is the bus count.

#include <benchmark/benchmark.h>

#include "protcoord/faultcalc.hpp"
#include "random_network.hpp"

using namespace protcoord;

namespace {

struct Case {
    PuNetwork pu;
    std::vector<FaultJob> jobs;
};

Case make_case(int buses) {
    testing::NetworkDice dice(static_cast<std::uint64_t>(buses));
    testing::RandomNetworkOptions o;
    o.min_buses = o.max_buses = buses;
    const Network net = testing::random_connected(dice, o);
    Case c{to_per_unit(net), {}};
    for (const auto& b : net.buses) c.jobs.push_back({FaultSpec{b.id}, 0.0});
    return c;
}

void BM_SweepSerial(benchmark::State& state) {
    const Case c = make_case(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sweep_faults_serial(c.pu, c.jobs));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.jobs.size()));
}

void BM_SweepParallel(benchmark::State& state) {
    const Case c = make_case(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sweep_faults(c.pu, c.jobs));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.jobs.size()));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
