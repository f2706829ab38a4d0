#include "mohanet/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "mohanet/contacts.hpp"
#include "mohanet/errors.hpp"

namespace mohanet {

Counts count_states(const WorldState& world) {
  Counts c;
  c.t = world.time;
  for (const Node& n : world.nodes) {
    switch (n.state) {
      case EpiState::kS:
        ++c.s;
        break;
      case EpiState::kE:
        ++c.e;
        break;
      case EpiState::kI:
        ++c.i;
        break;
      case EpiState::kR:
        ++c.r;
        break;
    }
  }
  return c;
}

namespace {

double sojourn(double mean, const EpidemicParams& params, RngStream& rng) {
  return params.duration_mode == DurationMode::kExponential ? rng.exponential(mean) : mean;
}

EpiState infected_entry(const EpidemicParams& params) {
  return params.model == EpidemicModel::kSEIR ? EpiState::kE : EpiState::kI;
}

}  // namespace

void enter_state(Node& node, EpiState state, double t, const EpidemicParams& params, RngStream& rng) {
  node.state = state;
  node.state_steps = 0;
  switch (state) {
    case EpiState::kS:
      node.cumulative_dose = 0.0;
      node.state_duration = 0.0;
      break;
    case EpiState::kE:
      node.ever_infected = true;
      node.state_duration = sojourn(params.incubation_duration, params, rng);
      break;
    case EpiState::kI:
      node.ever_infected = true;
      node.state_duration = sojourn(params.infectious_duration, params, rng);
      node.next_emission = t + rng.exponential(params.mean_emission_interval);
      break;
    case EpiState::kR:
      node.state_duration =
          params.model == EpidemicModel::kSIRS ? sojourn(params.immunity_duration, params, rng) : INFINITY;
      break;
  }
}

WorldState make_world(const EpidemicParams& params, const MobilitySpec& mobility, std::uint64_t seed,
                      std::shared_ptr<const MobilityTrace> trace) {
  WorldState world;
  world.trace = std::move(trace);
  std::vector<std::uint32_t> ids;
  if (mobility.kind == MobilityKind::kTrace) {
    if (!world.trace || world.trace->empty()) throw DomainError("trace mobility needs a loaded trace");
    ids = world.trace->node_ids();
  } else {
    ids.resize(static_cast<std::size_t>(std::max(0, params.node_count)));
    for (std::uint32_t i = 0; i < ids.size(); ++i) ids[i] = i;
  }

  world.nodes.reserve(ids.size());
  for (std::uint32_t id : ids) {
    world.mobility_rng.emplace_back(seed, StreamTag::kMobility, id);
    world.epidemic_rng.emplace_back(seed, StreamTag::kEpidemic, id);
    Node n;
    n.id = id;
    n.threshold = params.threshold;
    if (mobility.kind == MobilityKind::kTrace) {
      n.position = world.trace->position(id, 0.0);
    } else {
      RngStream place(seed, StreamTag::kPlacement, id);
      n.position = {place.uniform(0.0, mobility.region.width), place.uniform(0.0, mobility.region.height)};
    }
    n.waypoint = n.position;
    if (mobility.kind == MobilityKind::kRandomWaypoint) start_random_waypoint(n, mobility, world.mobility_rng.back());
    world.nodes.push_back(n);
  }

  const auto infected = std::min<std::size_t>(static_cast<std::size_t>(std::max(0, params.initial_infected)),
                                              world.nodes.size());
  for (std::size_t i = 0; i < infected; ++i) {
    enter_state(world.nodes[i], EpiState::kI, 0.0, params, world.epidemic_rng[i]);
  }
  return world;
}

void step_epidemic(WorldState& world, const EpidemicParams& params, const MobilitySpec& mobility, double dt) {
  if (!(dt > 0.0)) throw DomainError("epidemic step needs dt > 0");
  const double t = static_cast<double>(world.step + 1) * dt;
  auto& nodes = world.nodes;

  // Mobility.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    switch (mobility.kind) {
      case MobilityKind::kStatic:
        break;
      case MobilityKind::kRandomWaypoint:
        step_random_waypoint(nodes[i], mobility, dt, world.mobility_rng[i]);
        break;
      case MobilityKind::kTrace:
        nodes[i].position = world.trace->position(nodes[i].id, t);
        break;
    }
  }

  // Emissions in (t - dt, t].
  std::vector<std::pair<std::size_t, int>> emitters;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Node& n = nodes[i];
    if (n.state != EpiState::kI) continue;
    int count = 0;
    while (n.next_emission <= t) {
      ++count;
      n.next_emission += world.epidemic_rng[i].exponential(params.mean_emission_interval);
    }
    if (count > 0) emitters.emplace_back(i, count);
  }

  if (std::isfinite(params.dose_half_life)) {
    const double keep = std::exp2(-dt / params.dose_half_life);
    for (Node& n : nodes) {
      if (n.state == EpiState::kS) n.cumulative_dose *= keep;
    }
  }

  // Dose accrual; contributions from several emitters add up.
  std::vector<char> hit(nodes.size(), 0);
  if (!emitters.empty() && params.contact_range > 0.0) {
    const ContactGrid grid(nodes, params.contact_range, [](const Node& n) { return n.state == EpiState::kS; });
    std::vector<std::uint32_t> partners;
    for (const auto& [src, count] : emitters) {
      grid.query(nodes[src].position, partners);
      for (std::uint32_t j : partners) {
        Node& s = nodes[j];
        const double dose = transmission_dose(distance(nodes[src].position, s.position), params.dose_kernel);
        if (dose <= 0.0) continue;
        s.cumulative_dose += dose * count;
        if (params.infection_mode == InfectionMode::kProbabilistic && !hit[j]) {
          const double p = s.threshold > 0.0 ? -std::expm1(-dose / s.threshold) : 1.0;
          for (int k = 0; k < count && !hit[j]; ++k) {
            if (world.epidemic_rng[j].uniform() < p) hit[j] = 1;
          }
        }
      }
    }
  }

  std::vector<char> changed(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Node& n = nodes[i];
    if (n.state != EpiState::kS) continue;
    const bool infect = params.infection_mode == InfectionMode::kThreshold
                            ? n.cumulative_dose > 0.0 && n.cumulative_dose >= n.threshold
                            : hit[i] != 0;
    if (!infect) continue;
    const EpiState to = infected_entry(params);
    enter_state(n, to, t, params, world.epidemic_rng[i]);
    world.events.push_back({t, n.id, EpiState::kS, to});
    changed[i] = 1;
  }

  // Sojourn timers.
  const double slack = 1e-9 * dt;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Node& n = nodes[i];
    if (changed[i] || n.state == EpiState::kS) continue;
    ++n.state_steps;
    if (static_cast<double>(n.state_steps) * dt < n.state_duration - slack) continue;
    EpiState to = n.state;
    if (n.state == EpiState::kE) to = EpiState::kI;
    if (n.state == EpiState::kI) to = EpiState::kR;
    if (n.state == EpiState::kR && params.model == EpidemicModel::kSIRS) to = EpiState::kS;
    if (to == n.state) continue;
    world.events.push_back({t, n.id, n.state, to});
    enter_state(n, to, t, params, world.epidemic_rng[i]);
  }

  world.time = t;
  ++world.step;
}

double EpidemicRun::attack_rate() const {
  const auto susceptible = node_count - initially_infected;
  if (susceptible <= 0) return 0.0;
  return static_cast<double>(ever_infected - initially_infected) / static_cast<double>(susceptible);
}

EpidemicRun run_epidemic(const ScenarioConfig& config, std::uint64_t seed, std::shared_ptr<const MobilityTrace> trace) {
  if (config.mobility.kind == MobilityKind::kTrace && !trace) {
    trace = std::make_shared<const MobilityTrace>(
        load_mobility_trace_file(config.mobility.trace_path, config.mobility.region));
  }
  const auto& params = config.epidemic;
  WorldState world = make_world(params, config.mobility, seed, trace);

  EpidemicRun run;
  run.seed = seed;
  run.node_count = static_cast<std::int64_t>(world.nodes.size());
  for (const Node& n : world.nodes) run.initially_infected += n.ever_infected ? 1 : 0;

  const auto steps = static_cast<std::int64_t>(std::floor(config.duration / config.dt + 1e-9));
  run.series.reserve(static_cast<std::size_t>(steps) + 1);

  std::int64_t snapshot_index = 0;
  auto record = [&]() {
    const Counts c = count_states(world);
    run.series.push_back(c);
    run.peak_infectious = std::max(run.peak_infectious, c.i);
    const double next_snapshot = static_cast<double>(snapshot_index) * params.snapshot_interval;
    if (world.time >= next_snapshot - 1e-9 * config.dt) {
      for (const Node& n : world.nodes) run.snapshots.push_back({world.time, n.id, n.position, n.state});
      ++snapshot_index;
    }
  };

  record();
  for (std::int64_t k = 0; k < steps; ++k) {
    step_epidemic(world, params, config.mobility, config.dt);
    record();
  }
  for (const Node& n : world.nodes) run.ever_infected += n.ever_infected ? 1 : 0;
  run.events = std::move(world.events);
  return run;
}

std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t index) {
  return derive_seed(seed, StreamTag::kReplication, index);
}

std::vector<EpidemicRun> run_replications_serial(const ScenarioConfig& config, std::uint64_t seed, int count,
                                                 std::shared_ptr<const MobilityTrace> trace) {
  std::vector<EpidemicRun> runs;
  for (int r = 0; r < count; ++r) {
    runs.push_back(run_epidemic(config, replication_seed(seed, static_cast<std::uint64_t>(r)), trace));
  }
  return runs;
}

std::vector<EpidemicRun> run_replications(const ScenarioConfig& config, std::uint64_t seed, int count,
                                          std::shared_ptr<const MobilityTrace> trace) {
  if (config.mobility.kind == MobilityKind::kTrace && !trace) {
    trace = std::make_shared<const MobilityTrace>(
        load_mobility_trace_file(config.mobility.trace_path, config.mobility.region));
  }
  std::vector<EpidemicRun> runs(static_cast<std::size_t>(std::max(0, count)));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < count; ++r) {
    try {
      runs[static_cast<std::size_t>(r)] =
          run_epidemic(config, replication_seed(seed, static_cast<std::uint64_t>(r)), trace);
    } catch (...) {
#pragma omp critical(mohanet_replication_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return runs;
}

}  // namespace mohanet
