#include <benchmark/benchmark.h>

#include "mohanet/contacts.hpp"
#include "mohanet/emission.hpp"
#include "mohanet/epidemic.hpp"
#include "mohanet/kernel.hpp"
#include "mohanet/plume_channel.hpp"

using namespace mohanet;

namespace {

FieldGrid puff_grid(int n) {
  FieldGrid g;
  for (int i = 0; i < n; ++i) g.xs.push_back(0.5 + 0.25 * i);
  for (int i = 0; i < n; ++i) g.ys.push_back(-5.0 + 10.0 * i / n);
  g.zs = {0.5, 1.0, 1.7, 2.5};
  g.ts = {5.0, 10.0, 20.0};
  return g;
}

FieldFunction puff_field() {
  static Environment env = [] {
    Environment e;
    e.wind_velocity = {1.0, 0.0, 0.0};
    return e;
  }();
  static const auto disp = dispersion_table(StabilityClass::kD);
  return [](const Vec3& p, double t) { return puff_concentration({{0, 0, 1.7}, 1000.0, 0.0}, env, p, t, disp); };
}

void BM_FieldParallel(benchmark::State& state) {
  const auto grid = puff_grid(static_cast<int>(state.range(0)));
  const auto fn = puff_field();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_field(grid, fn));
}

void BM_FieldSerial(benchmark::State& state) {
  const auto grid = puff_grid(static_cast<int>(state.range(0)));
  const auto fn = puff_field();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_field_serial(grid, fn));
}

std::vector<Node> crowd(int n) {
  RngStream rng(3);
  std::vector<Node> nodes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& node = nodes[static_cast<std::size_t>(i)];
    node.id = static_cast<std::uint32_t>(i);
    node.position = {rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0)};
    node.state = rng.uniform() < 0.1 ? EpiState::kI : EpiState::kS;
  }
  return nodes;
}

void BM_ContactsGrid(benchmark::State& state) {
  const auto nodes = crowd(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_contacts(nodes, 2.0));
}

void BM_ContactsAllPairs(benchmark::State& state) {
  const auto nodes = crowd(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_contacts_all_pairs(nodes, 2.0));
}

EmissionEvent cough() {
  RngStream rng(1);
  return make_emission(default_profile(Activity::kCough), 0.0, {0, 0, 1.7}, {1, 0, 0}, rng);
}

const std::vector<double> kDistances{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5};

void BM_KernelParallel(benchmark::State& state) {
  const auto e = cough();
  for (auto _ : state) benchmark::DoNotOptimize(build_kernel(e, Environment{}, RxGeometry{}, kDistances, 10.0, 0.01));
}

void BM_KernelSerial(benchmark::State& state) {
  const auto e = cough();
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_kernel_serial(e, Environment{}, RxGeometry{}, kDistances, 10.0, 0.01));
  }
}

ScenarioConfig city() {
  ScenarioConfig config;
  config.duration = 600.0;
  config.dt = 1.0;
  config.epidemic.node_count = 1000;
  config.epidemic.snapshot_interval = 1e9;
  return config;
}

void BM_ReplicationsParallel(benchmark::State& state) {
  const auto config = city();
  for (auto _ : state) benchmark::DoNotOptimize(run_replications(config, 1, 8));
}

void BM_ReplicationsSerial(benchmark::State& state) {
  const auto config = city();
  for (auto _ : state) benchmark::DoNotOptimize(run_replications_serial(config, 1, 8));
}

}  // namespace

BENCHMARK(BM_FieldParallel)->Arg(40)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FieldSerial)->Arg(40)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ContactsGrid)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ContactsAllPairs)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicationsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicationsSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
