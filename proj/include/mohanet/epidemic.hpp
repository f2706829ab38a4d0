#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mohanet/mobility.hpp"
#include "mohanet/rng.hpp"
#include "mohanet/scenario.hpp"

namespace mohanet {

struct StateChange {
  double t = 0.0;
  std::uint32_t node_id = 0;
  EpiState from = EpiState::kS;
  EpiState to = EpiState::kS;
  bool operator==(const StateChange&) const = default;
};

struct Counts {
  double t = 0.0;
  std::int64_t s = 0;
  std::int64_t e = 0;
  std::int64_t i = 0;
  std::int64_t r = 0;
  bool operator==(const Counts&) const = default;
};

struct Snapshot {
  double t = 0.0;
  std::uint32_t id = 0;
  Vec2 position{};
  EpiState state = EpiState::kS;
};

/// Everything that evolves during a run.
struct WorldState {
  double time = 0.0;
  std::int64_t step = 0;
  std::vector<Node> nodes;
  std::vector<RngStream> mobility_rng;
  std::vector<RngStream> epidemic_rng;
  std::shared_ptr<const MobilityTrace> trace;
  std::vector<StateChange> events;
};

Counts count_states(const WorldState& world);

/// Places nodes uniformly (or at their trace positions) and infects the
/// first `initial_infected` ids. Streams derive from (seed, tag, node id).
WorldState make_world(const EpidemicParams& params, const MobilitySpec& mobility, std::uint64_t seed,
                      std::shared_ptr<const MobilityTrace> trace = nullptr);

/// Moves `node` into `state` at time t, drawing its sojourn time and first
/// emission if needed.
void enter_state(Node& node, EpiState state, double t, const EpidemicParams& params, RngStream& rng);

/// Advances the world by dt: mobility, emissions, dose accrual, infection,
/// timers, event log.
void step_epidemic(WorldState& world, const EpidemicParams& params, const MobilitySpec& mobility, double dt);

struct EpidemicRun {
  std::uint64_t seed = 0;
  std::vector<Counts> series;
  std::vector<Snapshot> snapshots;
  std::vector<StateChange> events;
  std::int64_t ever_infected = 0;
  std::int64_t initially_infected = 0;
  std::int64_t node_count = 0;
  std::int64_t peak_infectious = 0;

  /// Fraction of the initially susceptible population ever infected.
  double attack_rate() const;
};

EpidemicRun run_epidemic(const ScenarioConfig& config, std::uint64_t seed,
                         std::shared_ptr<const MobilityTrace> trace = nullptr);

/// Seed of replication `index` derived from the scenario seed.
std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t index);

/// Runs replications in parallel; output order is by replication index.
std::vector<EpidemicRun> run_replications(const ScenarioConfig& config, std::uint64_t seed, int count,
                                          std::shared_ptr<const MobilityTrace> trace = nullptr);
std::vector<EpidemicRun> run_replications_serial(const ScenarioConfig& config, std::uint64_t seed, int count,
                                                 std::shared_ptr<const MobilityTrace> trace = nullptr);

}  // namespace mohanet
