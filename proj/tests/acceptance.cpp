// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

#include "mohanet/cli.hpp"
#include "mohanet/compartmental.hpp"
#include "mohanet/contacts.hpp"
#include "mohanet/emission.hpp"
#include "mohanet/epidemic.hpp"
#include "mohanet/plume_channel.hpp"
#include "mohanet/reception.hpp"
#include "mohanet/scenario_io.hpp"
#include "oracles.hpp"

using namespace mohanet;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr double kSurvivalTol = 1e-12;
constexpr double kBudgetRelTol = 1e-6;
constexpr double kOrderRatio = 8.0;
constexpr double kMassTol = 0.01;
constexpr double kPeakTol = 1e-3;
constexpr double kFinalSizeTol = 1e-6;
constexpr double kAttackTol = 0.05;
constexpr double kCrit1Seconds = 1.0;
constexpr double kCrit4Seconds = 1.0;
constexpr double kCrit5Seconds = 10.0;
constexpr double kCrit6Seconds = 30.0;
constexpr double kCrit8Seconds = 120.0;
constexpr double kCrit9Seconds = 10.0;
constexpr double kCrit10Seconds = 60.0;

const std::string kScenarios = MOHANET_SCENARIO_DIR;

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Verdict()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("criterion %2d: %s  %s  [%s] (%.3f s)\n", id, v.pass ? "PASS" : "FAIL", name.c_str(),
              v.detail.c_str(), secs);
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mohanet");
  std::ostringstream out, err;
  return run_cli(args, out, err);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mohanet_acceptance_" + name);
  fs::remove_all(dir);
  return dir;
}

template <typename F>
double midpoint(double lo, double hi, int n, F f) {
  const double h = (hi - lo) / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += f(lo + (i + 0.5) * h);
  return sum * h;
}

Verdict criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = scratch("c1");
  if (cli({"cloud", "--scenario", kScenarios + "/demo_cough.scenario", "--out-dir", dir.string()}) != 0) {
    return {false, "cloud run failed"};
  }
  const double secs = seconds_since(t0);
  const auto summary = nlohmann::json::parse(slurp(dir / "demo_cough_summary.json"));
  const double gamma = summary["config"]["receivers"][0]["threshold"].get<double>();
  const double xr = summary["config"]["receivers"][0]["center"][0].get<double>();
  const auto& crossing = summary["clouds"][0]["receivers"][0]["crossing_time"];
  const double tstar = crossing.is_null() ? -1.0 : crossing.get<double>();

  // verdict recomputed from the last row of the dose CSV
  std::istringstream dose(slurp(dir / "demo_cough_dose.csv"));
  std::string line, last;
  while (std::getline(dose, line)) last = line;
  std::vector<std::string> cols;
  std::stringstream ls(last);
  for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
  const double plateau = std::stod(cols.at(3));
  const int expected = plateau >= gamma ? 1 : 0;
  const int reported = summary["infected"].get<int>();

  const bool ok = gamma == 80.0 && xr == 1.5 && tstar > 0.0 && tstar < 10.0 && reported == expected &&
                  detect_infection(plateau, gamma) == expected && secs < kCrit1Seconds;
  return {ok, "gamma=" + fmt("%g", gamma) + " x_R=" + fmt("%g", xr) + " t*=" + fmt("%.2f s", tstar) +
                  " plateau=" + fmt("%.2f", plateau) + " infected=" + std::to_string(reported)};
}

Verdict criterion2() {
  const double v = viable_fraction(60.0, Environment{}.pathogen_decay_rate);
  return {std::abs(v - 0.2) <= kSurvivalTol, fmt("viable(60 s)=%.15f", v)};
}

Verdict criterion3() {
  const auto config = parse_scenario(kScenarios + "/demo_cough.scenario");
  const double cough = config.profile(Activity::kCough).initial_speed;
  const double breathe = config.profile(Activity::kBreathe).initial_speed;
  RngStream rng(1);
  const auto e = make_emission(config.profile(Activity::kCough), 0.0, {0, 0, 1.7}, {1, 0, 0}, rng);
  const auto b = make_emission(config.profile(Activity::kBreathe), 0.0, {0, 0, 1.7}, {1, 0, 0}, rng);
  const bool ok = cough == 10.0 && breathe == 2.4 && e.initial_speed == 10.0 && b.initial_speed == 2.4;
  return {ok, fmt("cough=%g m/s", cough) + fmt(" breathe=%g m/s", breathe)};
}

Verdict criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto config = parse_scenario(kScenarios + "/demo_cough.scenario");
  const auto events = expand_emissions(config);
  const auto traj = simulate_cloud(events.front(), config.environment, config.duration, config.dt, config.cloud);
  const auto rec = receive_cloud(traj, config.receivers.front());
  bool monotone = true;
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    const auto& a = traj.samples[k - 1];
    const auto& b = traj.samples[k];
    monotone = monotone && b.total_droplets <= a.total_droplets && b.viable_droplets <= a.viable_droplets &&
               b.viable_droplets <= b.total_droplets && rec.cloud_total[k] <= rec.cloud_total[k - 1] &&
               rec.cloud_viable[k] <= rec.cloud_viable[k - 1] && rec.cloud_viable[k] <= rec.cloud_total[k];
  }
  const auto& bud = rec.budget;
  const double sum = bud.received + bud.settled + bud.remaining + bud.inactivated;
  const double rel = std::abs(sum - bud.initial) / bud.initial;
  const double secs = seconds_since(t0);
  return {monotone && rel <= kBudgetRelTol && secs < kCrit4Seconds,
          fmt("N0=%g", bud.initial) + fmt(" received=%.3f", bud.received) + fmt(" settled=%.3f", bud.settled) +
              fmt(" remaining=%.3f", bud.remaining) + fmt(" inactivated=%.3f", bud.inactivated) +
              fmt(" rel.err=%.2e", rel)};
}

Verdict criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto config = parse_scenario(kScenarios + "/demo_cough.scenario");
  const auto e = expand_emissions(config).front();
  const auto& env = config.environment;
  const auto& params = config.cloud;
  const double dt = config.dt;
  const auto start = oracle::from_state(initial_cloud(e, env, params));
  const auto ref = oracle::fields(
      oracle::euler_cloud(start, params.entrainment, env.gravity, env.temperature_ambient, config.duration, dt / 1000));
  const auto coarse =
      oracle::fields(oracle::from_state(simulate_cloud(e, env, config.duration, dt, params).samples.back()));
  const auto fine =
      oracle::fields(oracle::from_state(simulate_cloud(e, env, config.duration, dt / 2, params).samples.back()));
  // x, z, vx, vz, radius, dT (y and vy stay zero for a cough along +x)
  double worst = INFINITY;
  for (std::size_t i : {0u, 2u, 3u, 5u, 6u, 7u}) {
    worst = std::min(worst, std::abs(coarse[i] - ref[i]) / std::abs(fine[i] - ref[i]));
  }
  const double secs = seconds_since(t0);
  return {worst >= kOrderRatio && secs < kCrit5Seconds, fmt("min error ratio=%.1f", worst) + fmt(" at dt=%g s", dt)};
}

Verdict criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  Environment env;
  env.wind_velocity = {1.0, 0.0, 0.0};
  env.pathogen_decay_rate = 0.0;
  const auto disp = dispersion_table(StabilityClass::kD);
  const PointSource puff{{0, 0, 1.7}, 1000.0, 0.0};
  const double t = 20.0;
  const Sigmas s = dispersion_sigmas(t, disp);
  const double mass = midpoint(t - 8 * s.x, t + 8 * s.x, 120, [&](double x) {
    return midpoint(-8 * s.y, 8 * s.y, 120, [&](double y) {
      return midpoint(0.0, 1.7 + 8 * s.z, 160, [&](double z) { return puff_concentration(puff, env, {x, y, z}, t, disp); });
    });
  });
  const double x = 20.0;
  const Sigmas sp = dispersion_sigmas(x, disp);
  const PointSource plume{{0, 0, 1.7}, 50.0, 0.0};
  const double flux = midpoint(-8 * sp.y, 8 * sp.y, 400, [&](double y) {
    return midpoint(0.0, 1.7 + 8 * sp.z, 400, [&](double z) { return plume_concentration(plume, env, {x, y, z}, disp); });
  });
  const double e1 = std::abs(mass / 1000.0 - 1.0);
  const double e2 = std::abs(flux / (50.0 / 1.0) - 1.0);
  const double secs = seconds_since(t0);
  return {e1 <= kMassTol && e2 <= kMassTol && secs < kCrit6Seconds,
          fmt("puff mass/Q=%.5f", mass / 1000.0) + fmt(" plume flux/(Q/u)=%.5f", flux / 50.0)};
}

Verdict criterion7() {
  const double day = 86400.0;
  const CompartmentRates rates{2.0 / (5 * day), 1.0 / (5 * day), std::nullopt};
  const double i0 = 1e-6;
  const auto curves = sir_ode(rates, {0.0, 1.0 - i0, 0.0, i0, 0.0}, 200 * day, 3600.0);
  double peak = 0.0;
  for (const auto& p : curves) peak = std::max(peak, p.i);
  const double conserved = oracle::sir_peak(2.0, i0);
  const double f2 = final_size(2.0), f15 = final_size(1.5);
  const double o2 = oracle::final_size_fixed_point(2.0), o15 = oracle::final_size_fixed_point(1.5);
  const bool ok = std::abs(peak - 0.1534) <= kPeakTol && std::abs(peak - conserved) <= kPeakTol &&
                  std::abs(f2 - o2) <= kFinalSizeTol && std::abs(f15 - o15) <= kFinalSizeTol &&
                  std::abs(f2 - 0.7968) < 5e-5 && std::abs(f15 - 0.5828) < 5e-5 && final_size(1.0) == 0.0 &&
                  final_size(0.8) == 0.0;
  return {ok, fmt("peak i=%.5f", peak) + fmt(" oracle=%.5f", conserved) + fmt(" final_size(2)=%.9f", f2) +
                  fmt(" final_size(1.5)=%.9f", f15)};
}

Verdict criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  auto config = parse_scenario(kScenarios + "/demo_city.scenario");
  // full mixing: static nodes, every pair in range, flat kernel, per-contact probability
  const double r0 = 2.0;
  config.mobility.kind = MobilityKind::kStatic;
  const double diag = config.mobility.region.diagonal();
  auto& ep = config.epidemic;
  ep.node_count = 2000;
  ep.initial_infected = 20;
  ep.model = EpidemicModel::kSIR;
  ep.duration_mode = DurationMode::kFixed;
  ep.infectious_duration = 100.0;
  ep.mean_emission_interval = 10.0;
  ep.contact_range = diag + 1.0;
  ep.infection_mode = InfectionMode::kProbabilistic;
  ep.threshold = 1.0;
  ep.dose_half_life = INFINITY;
  ep.snapshot_interval = 1e9;
  const double p = r0 * ep.mean_emission_interval / (ep.infectious_duration * (ep.node_count - 1));
  const double dose = -std::log1p(-p) * ep.threshold;
  ep.dose_kernel = {{0.0, diag}, {dose, dose}};
  config.dt = 1.0;
  config.duration = 4000.0;

  const auto runs = run_replications(config, config.seed, 20);
  double mean = 0.0;
  for (const auto& r : runs) mean += r.attack_rate();
  mean /= static_cast<double>(runs.size());
  const double target = final_size(r0);
  const double secs = seconds_since(t0);
  return {std::abs(mean - target) <= kAttackTol && secs < kCrit8Seconds,
          fmt("mean attack rate=%.4f", mean) + fmt(" final_size(R0=2)=%.4f", target) + " over 20 replications"};
}

Verdict criterion9() {
  const auto t0 = std::chrono::steady_clock::now();
  RngStream rng(909);
  int equal = 0;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<Node> nodes(500);
    for (std::uint32_t i = 0; i < nodes.size(); ++i) {
      nodes[i].id = i;
      nodes[i].position = {rng.uniform(0.0, 50.0), rng.uniform(0.0, 50.0)};
      const double u = rng.uniform();
      nodes[i].state = u < 0.25 ? EpiState::kI : (u < 0.85 ? EpiState::kS : EpiState::kR);
    }
    const double range = rng.uniform(0.5, 6.0);
    const auto a = find_contacts(nodes, range);
    const auto b = find_contacts_all_pairs(nodes, range);
    bool same = a.size() == b.size();
    for (std::size_t k = 0; same && k < a.size(); ++k) {
      same = a[k].infectious_id == b[k].infectious_id && a[k].susceptible_id == b[k].susceptible_id;
    }
    equal += same ? 1 : 0;
  }
  const double secs = seconds_since(t0);
  return {equal == 100 && secs < kCrit9Seconds, std::to_string(equal) + "/100 configurations identical"};
}

Verdict criterion10() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Golden {
    std::string command, scenario;
    std::vector<std::string> stochastic;
  };
  const std::vector<Golden> golden{
      {"cloud", "demo_cough", {"demo_cough_trajectory.csv", "demo_cough_dose.csv"}},
      {"puff", "demo_puff", {}},
      {"epidemic", "demo_city", {"demo_city_timeseries.csv", "demo_city_snapshots.jsonl"}},
  };
  std::string detail;
  bool ok = true;
  for (const auto& g : golden) {
    const std::string path = kScenarios + "/" + g.scenario + ".scenario";
    const fs::path a = scratch(g.scenario + "_a"), b = scratch(g.scenario + "_b"), c = scratch(g.scenario + "_c");
    ok = ok && cli({g.command, "--scenario", path, "--out-dir", a.string()}) == 0;
    ok = ok && cli({g.command, "--scenario", path, "--out-dir", b.string()}) == 0;
    ok = ok && cli({g.command, "--scenario", path, "--out-dir", c.string(), "--seed", "987654321"}) == 0;
    int files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      const auto name = entry.path().filename();
      ok = ok && slurp(entry.path()) == slurp(b / name);
      ++files;
    }
    for (const auto& name : g.stochastic) ok = ok && slurp(a / name) != slurp(c / name);
    detail += g.scenario + ":" + std::to_string(files) + " files identical ";
  }
  const double secs = seconds_since(t0);
  return {ok && secs < kCrit10Seconds, detail + "; reseeding changes stochastic outputs"};
}

Verdict criterion11() {
  const double gamma = 80.0;
  // receiver level: three 30-droplet timelines
  std::vector<DoseTimeline> parts;
  for (const char* src : {"a", "b", "c"}) parts.push_back({"rx", {{0.0, 0.0, 0.0, {}}, {1.0, 30.0, 30.0, {src}}}});
  bool alone = true;
  for (const auto& tl : parts) alone = alone && detect_infection(tl.final_dose(), gamma) == 0;
  const double merged = superpose_doses(parts).final_dose();

  // network level: point-to-point, multicast and multiple access in one step
  EpidemicParams params;
  params.threshold = gamma;
  params.dose_kernel = {{0.0, 2.0}, {30.0, 30.0}};
  params.contact_range = 2.0;
  params.node_count = 6;
  params.initial_infected = 0;
  params.mean_emission_interval = 1e12;
  MobilitySpec mobility;
  mobility.kind = MobilityKind::kStatic;
  WorldState world = make_world(params, mobility, 1, nullptr);
  // node 0: S hit by three sources; node 4: S near source 1 only; node 5: S near no one
  const std::vector<Vec2> pos{{10, 10}, {11, 10}, {10, 11}, {9, 10}, {12.5, 10}, {30, 30}};
  for (std::size_t i = 0; i < pos.size(); ++i) world.nodes[i].position = pos[i];
  for (std::size_t i : {1u, 2u, 3u}) {
    enter_state(world.nodes[i], EpiState::kI, 0.0, params, world.epidemic_rng[i]);
    world.nodes[i].next_emission = 0.5;
  }
  const auto contacts = find_contacts(world.nodes, params.contact_range);
  const auto multicast = std::count_if(contacts.begin(), contacts.end(), [](const Contact& c) { return c.infectious_id == 1; });
  step_epidemic(world, params, mobility, 1.0);
  const bool network = world.nodes[0].state == EpiState::kI && world.nodes[0].cumulative_dose == 90.0 &&
                       world.nodes[4].state == EpiState::kS && world.nodes[4].cumulative_dose == 30.0 &&
                       world.nodes[5].cumulative_dose == 0.0 && multicast == 2;
  const bool ok = alone && detect_infection(merged, gamma) == 1 && merged == 90.0 && network;
  return {ok, fmt("superposed=%g", merged) + fmt(" network node dose=%g", world.nodes[0].cumulative_dose) +
                  " multicast partners=" + std::to_string(multicast)};
}

}  // namespace

int main() {
  report(1, "demo cough threshold and crossing", criterion1);
  report(2, "survival calibration", criterion2);
  report(3, "initial speed constants", criterion3);
  report(4, "droplet count monotonicity and budget", criterion4);
  report(5, "integrator order", criterion5);
  report(6, "puff and plume mass conservation", criterion6);
  report(7, "ODE and final-size oracles", criterion7);
  report(8, "agent vs mean-field attack rate", criterion8);
  report(9, "contact search equivalence", criterion9);
  report(10, "determinism of golden scenarios", criterion10);
  report(11, "multiple-access superposition", criterion11);
  std::printf("%d of 11 criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
