#include "mohanet/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "mohanet/cloud_channel.hpp"
#include "mohanet/compartmental.hpp"
#include "mohanet/emission.hpp"
#include "mohanet/epidemic.hpp"
#include "mohanet/errors.hpp"
#include "mohanet/kernel.hpp"
#include "mohanet/plume_channel.hpp"
#include "mohanet/reception.hpp"
#include "mohanet/scenario_io.hpp"
#include "mohanet/writers.hpp"

namespace mohanet {

double parse_duration(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw std::invalid_argument("empty duration");
  double scale = 1.0;
  switch (s.back()) {
    case 's':
      s.pop_back();
      break;
    case 'm':
      scale = 60.0;
      s.pop_back();
      break;
    case 'h':
      scale = 3600.0;
      s.pop_back();
      break;
    case 'd':
      scale = 86400.0;
      s.pop_back();
      break;
    default:
      break;
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("malformed duration '" + text + "'");
  }
  return value * scale;
}

namespace {

using Json = nlohmann::ordered_json;

struct RunOptions {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<int> replications;
};

class Sinks {
 public:
  Sinks(const ScenarioConfig& config, std::string out_dir) : config_(config), out_dir_(std::move(out_dir)) {}

  std::string path(SinkKind kind, const std::string& fallback) const {
    std::string p = fallback;
    for (const auto& s : config_.outputs) {
      if (s.kind == kind) {
        p = s.path;
        break;
      }
    }
    if (out_dir_.empty()) return p;
    return (std::filesystem::path(out_dir_) / p).string();
  }

  std::string default_name(const std::string& suffix) const { return config_.name + "_" + suffix; }

  void write(SinkKind kind, const std::string& suffix, const std::string& content) const {
    write_file(path(kind, default_name(suffix)), content);
  }

 private:
  const ScenarioConfig& config_;
  std::string out_dir_;
};

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

Json summary_base(const ScenarioConfig& config, const std::string& command) {
  Json j;
  j["command"] = command;
  j["seed"] = config.seed;
  j["config"] = scenario_to_json(config);
  return j;
}

Json receiver_metrics(const std::vector<DoseTimeline>& timelines, const std::vector<RxGeometry>& receivers) {
  Json out = Json::array();
  for (std::size_t k = 0; k < timelines.size(); ++k) {
    const double dose = timelines[k].final_dose();
    out.push_back({{"id", receivers[k].id},
                   {"threshold", receivers[k].threshold},
                   {"dose", dose},
                   {"infected", detect_infection(dose, receivers[k].threshold)}});
  }
  return out;
}

int any_infected(const Json& receivers) {
  for (const auto& r : receivers) {
    if (r["infected"].get<int>() == 1) return 1;
  }
  return 0;
}

std::vector<double> thresholds_of(const std::vector<RxGeometry>& receivers) {
  std::vector<double> t;
  for (const auto& rx : receivers) t.push_back(rx.threshold);
  return t;
}

// First time the cloud centre passes the receiver plane, if ever.
std::optional<double> crossing_time(const CloudTrajectory& traj, const RxGeometry& rx) {
  Vec3 n = rx.center - traj.emission.origin;
  n.z = 0.0;
  const double reach = norm(n);
  if (reach == 0.0) return std::nullopt;
  n = n * (1.0 / reach);
  for (const auto& s : traj.samples) {
    if (dot(s.center - traj.emission.origin, n) >= reach) return s.time;
  }
  return std::nullopt;
}

struct ChannelResult {
  std::vector<DoseTimeline> timelines;
  Json metrics = Json::object();
};

ChannelResult run_cloud_channel(const ScenarioConfig& config, const Sinks* sinks) {
  const auto events = expand_emissions(config);
  std::vector<std::vector<DoseTimeline>> per_rx(config.receivers.size());
  Json clouds = Json::array();
  for (std::size_t e = 0; e < events.size(); ++e) {
    const auto& ev = events[e];
    const double horizon = config.duration - ev.time;
    if (horizon < config.dt) continue;
    const CloudTrajectory traj = simulate_cloud(ev, config.environment, horizon, config.dt, config.cloud);
    Json cloud = {{"source_id", ev.source_id},
                  {"activity", to_string(ev.activity)},
                  {"time", ev.time},
                  {"droplets", ev.droplet_count()},
                  {"termination", to_string(traj.termination)}};
    Json links = Json::array();
    for (std::size_t r = 0; r < config.receivers.size(); ++r) {
      const auto& rx = config.receivers[r];
      const CloudReception rec = receive_cloud(traj, rx);
      per_rx[r].push_back(rec.timeline);
      const auto cross = crossing_time(traj, rx);
      links.push_back({{"receiver", rx.id},
                       {"crossing_time", cross ? Json(*cross) : Json(nullptr)},
                       {"dose", rec.timeline.final_dose()},
                       {"received", rec.budget.received},
                       {"settled", rec.budget.settled},
                       {"remaining", rec.budget.remaining},
                       {"inactivated", rec.budget.inactivated}});
    }
    cloud["receivers"] = links;
    clouds.push_back(cloud);
    if (sinks) {
      std::ostringstream csv;
      write_trajectory_csv(csv, traj);
      std::string path = sinks->path(SinkKind::kTrajectoryCsv, sinks->default_name("trajectory.csv"));
      if (events.size() > 1) path = with_suffix(path, "_e" + std::to_string(e));
      write_file(path, csv.str());
    }
  }
  ChannelResult result;
  for (std::size_t r = 0; r < config.receivers.size(); ++r) {
    DoseTimeline merged = superpose_doses(per_rx[r]);
    merged.receiver_id = config.receivers[r].id;
    result.timelines.push_back(std::move(merged));
  }
  result.metrics["clouds"] = clouds;
  return result;
}

std::vector<double> sample_times(const ScenarioConfig& config) {
  const auto steps = static_cast<std::int64_t>(std::floor(config.duration / config.dt + 1e-9));
  std::vector<double> ts;
  for (std::int64_t k = 0; k <= steps; ++k) ts.push_back(static_cast<double>(k) * config.dt);
  return ts;
}

std::vector<PointSource> puff_sources(const ScenarioConfig& config) {
  std::vector<PointSource> out;
  for (const auto& ev : expand_emissions(config)) {
    out.push_back({ev.origin, static_cast<double>(ev.droplet_count()), ev.time});
  }
  return out;
}

std::vector<PointSource> plume_sources(const ScenarioConfig& config) {
  std::vector<PointSource> out;
  for (const auto& spec : config.emissions) {
    const ActivityProfile& p = config.profile(spec.activity);
    const double count = spec.droplet_count ? *spec.droplet_count : p.droplet_count_mean;
    const double period = spec.repeat_period ? *spec.repeat_period : p.period;
    out.push_back({spec.origin, count / period, 0.0});
  }
  return out;
}

double total_puff(const std::vector<PointSource>& sources, const ScenarioConfig& config, const Vec3& p, double t) {
  double c = 0.0;
  for (const auto& s : sources) {
    if (t > s.release_time) c += puff_concentration(s, config.environment, p, t, config.dispersion);
  }
  return c;
}

double total_plume(const std::vector<PointSource>& sources, const ScenarioConfig& config, const Vec3& p) {
  double c = 0.0;
  for (const auto& s : sources) c += plume_concentration(s, config.environment, p, config.dispersion);
  return c;
}

bool has_field(const FieldGrid& g) { return !g.xs.empty() && !g.ys.empty() && !g.zs.empty(); }

ChannelResult run_windy_channel(const ScenarioConfig& config, const Sinks* sinks) {
  const bool puff = config.channel == Channel::kPuff;
  const auto sources = puff ? puff_sources(config) : plume_sources(config);
  const auto times = sample_times(config);
  ChannelResult result;
  for (const auto& rx : config.receivers) {
    std::vector<ConcentrationSample> series;
    for (double t : times) {
      series.push_back({t, puff ? total_puff(sources, config, rx.center, t) : total_plume(sources, config, rx.center)});
    }
    result.timelines.push_back(timeline_from_concentration(rx.id, puff ? "puff" : "plume", series, rx.breathing_rate));
  }
  if (sinks && has_field(config.field)) {
    FieldGrid grid = config.field;
    if (grid.ts.empty()) grid.ts = {puff ? config.duration : 0.0};
    const auto field = evaluate_field(grid, [&](const Vec3& p, double t) {
      return puff ? total_puff(sources, config, p, t) : total_plume(sources, config, p);
    });
    std::ostringstream csv;
    write_field_csv(csv, field);
    sinks->write(SinkKind::kFieldCsv, "field.csv", csv.str());
  }
  Json src = Json::array();
  for (const auto& s : sources) {
    src.push_back({{"position", {s.position.x, s.position.y, s.position.z}},
                   {"strength", s.strength},
                   {"release_time", s.release_time}});
  }
  result.metrics["sources"] = src;
  return result;
}

ChannelResult run_channel(const ScenarioConfig& config, const Sinks* sinks) {
  switch (config.channel) {
    case Channel::kCloud:
    case Channel::kKernel:
      return run_cloud_channel(config, sinks);
    case Channel::kPuff:
    case Channel::kPlume:
      return run_windy_channel(config, sinks);
  }
  return {};
}

void finish_dose(const ScenarioConfig& config, const Sinks& sinks, const ChannelResult& result, Json& summary) {
  std::ostringstream csv;
  write_dose_csv(csv, result.timelines, thresholds_of(config.receivers));
  sinks.write(SinkKind::kDoseCsv, "dose.csv", csv.str());
  const Json receivers = receiver_metrics(result.timelines, config.receivers);
  summary["receivers"] = receivers;
  summary["infected"] = any_infected(receivers);
}

void write_summary(const Sinks& sinks, const Json& summary) {
  sinks.write(SinkKind::kSummaryJson, "summary.json", summary.dump(2) + "\n");
}

ScenarioConfig load(const RunOptions& opts) {
  ScenarioConfig config = parse_scenario(opts.scenario);
  if (opts.seed) config.seed = *opts.seed;
  return config;
}

int cmd_validate(const RunOptions& opts, std::ostream& out) {
  const ScenarioConfig config = load(opts);
  out << "scenario '" << config.name << "' is valid (channel " << to_string(config.channel) << ")\n";
  return kExitOk;
}

int cmd_channel(const RunOptions& opts, const std::string& command, std::optional<Channel> forced, std::ostream& out) {
  ScenarioConfig config = load(opts);
  if (forced) {
    config.channel = *forced;
    const auto report = validate_scenario(config);
    if (!report.empty()) throw ValidationError(report);
  }
  const Sinks sinks(config, opts.out_dir);
  Json summary = summary_base(config, command);
  const ChannelResult result = run_channel(config, command == "dose" ? nullptr : &sinks);
  for (const auto& [k, v] : result.metrics.items()) summary[k] = v;
  finish_dose(config, sinks, result, summary);
  write_summary(sinks, summary);
  out << command << ": " << result.timelines.size() << " receiver(s), infected=" << summary["infected"].get<int>()
      << "\n";
  return kExitOk;
}

int cmd_kernel(const RunOptions& opts, std::ostream& out) {
  const ScenarioConfig config = load(opts);
  const auto events = expand_emissions(config);
  if (events.empty() || config.receivers.empty()) throw DomainError("kernel needs one emission and one receiver");
  const DoseKernel kernel = build_kernel(events.front(), config.environment, config.receivers.front(),
                                         config.kernel_distances, config.duration, config.dt, config.cloud);
  const Sinks sinks(config, opts.out_dir);
  std::ostringstream csv;
  write_kernel_csv(csv, kernel);
  sinks.write(SinkKind::kKernelCsv, "kernel.csv", csv.str());
  Json summary = summary_base(config, "kernel");
  summary["kernel"] = {{"distances", kernel.distances}, {"doses", kernel.doses}};
  // kept apart from the cloud summary of the same scenario
  write_file(with_suffix(sinks.path(SinkKind::kSummaryJson, sinks.default_name("summary.json")), "_kernel"),
             summary.dump(2) + "\n");
  out << "kernel: " << kernel.distances.size() << " knot(s)\n";
  return kExitOk;
}

Json run_metrics(const EpidemicRun& run) {
  const Counts& last = run.series.back();
  return {{"seed", run.seed},
          {"attack_rate", run.attack_rate()},
          {"ever_infected", run.ever_infected},
          {"peak_infectious", run.peak_infectious},
          {"final", {{"S", last.s}, {"E", last.e}, {"I", last.i}, {"R", last.r}}}};
}

void write_run(const Sinks& sinks, const EpidemicRun& run, const std::string& suffix) {
  std::ostringstream ts;
  write_timeseries_csv(ts, run.series);
  write_file(with_suffix(sinks.path(SinkKind::kTimeseriesCsv, sinks.default_name("timeseries.csv")), suffix), ts.str());
  std::ostringstream snaps;
  write_snapshots_jsonl(snaps, run.snapshots);
  write_file(with_suffix(sinks.path(SinkKind::kSnapshotsJsonl, sinks.default_name("snapshots.jsonl")), suffix),
             snaps.str());
}

int cmd_epidemic(const RunOptions& opts, std::ostream& out) {
  const ScenarioConfig config = load(opts);
  const Sinks sinks(config, opts.out_dir);
  Json summary = summary_base(config, "epidemic");
  if (!opts.replications) {
    const EpidemicRun run = run_epidemic(config, config.seed);
    write_run(sinks, run, "");
    summary["run"] = run_metrics(run);
    summary["attack_rate"] = run.attack_rate();
    summary["peak_infectious"] = run.peak_infectious;
  } else {
    if (*opts.replications < 1) throw DomainError("--replications must be at least 1");
    const auto runs = run_replications(config, config.seed, *opts.replications);
    Json reps = Json::array();
    double mean = 0.0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      write_run(sinks, runs[r], "_r" + std::to_string(r));
      reps.push_back(run_metrics(runs[r]));
      mean += runs[r].attack_rate();
    }
    summary["replications"] = reps;
    summary["attack_rate"] = mean / static_cast<double>(runs.size());
  }
  write_summary(sinks, summary);
  out << "epidemic: attack rate " << summary["attack_rate"].get<double>() << "\n";
  return kExitOk;
}

struct OdeOptions {
  double r0 = 2.0;
  std::string infectious_period = "5d";
  std::string incubation_period;
  double i0 = 1e-4;
  std::string duration = "100d";
  std::string dt = "1h";
  std::string out = "sir_curves.csv";
  std::string out_dir;
};

int cmd_sir_ode(const OdeOptions& o, std::ostream& out) {
  const double period = parse_duration(o.infectious_period);
  if (!(period > 0.0)) throw DomainError("infectious period must be positive");
  if (o.r0 < 0.0) throw DomainError("R0 must be non-negative");
  if (!(o.i0 >= 0.0 && o.i0 <= 1.0)) throw DomainError("i0 must lie in [0, 1]");
  CompartmentRates rates;
  rates.recovery = 1.0 / period;
  rates.beta = o.r0 * rates.recovery;
  if (!o.incubation_period.empty()) rates.incubation = 1.0 / parse_duration(o.incubation_period);
  const CompartmentPoint init{0.0, 1.0 - o.i0, 0.0, o.i0, 0.0};
  const auto curves = sir_ode(rates, init, parse_duration(o.duration), parse_duration(o.dt));

  const auto peak = std::max_element(curves.begin(), curves.end(),
                                     [](const CompartmentPoint& a, const CompartmentPoint& b) { return a.i < b.i; });
  const std::string base = o.out_dir.empty() ? o.out : (std::filesystem::path(o.out_dir) / o.out).string();
  std::ostringstream csv;
  write_curves_csv(csv, curves);
  write_file(base, csv.str());

  Json summary;
  summary["command"] = "sir-ode";
  summary["config"] = {{"r0", o.r0},
                       {"beta", rates.beta},
                       {"recovery_rate", rates.recovery},
                       {"incubation_rate", rates.incubation ? Json(*rates.incubation) : Json(nullptr)},
                       {"i0", o.i0},
                       {"duration", parse_duration(o.duration)},
                       {"dt", parse_duration(o.dt)}};
  summary["peak_i"] = peak->i;
  summary["peak_time"] = peak->t;
  summary["final_r"] = curves.back().r;
  summary["final_size"] = final_size(o.r0);
  const std::filesystem::path bp(base);
  write_file((bp.parent_path() / (bp.stem().string() + "_summary.json")).string(), summary.dump(2) + "\n");
  out << "sir-ode: peak i = " << format_number(peak->i) << " at t = " << format_number(peak->t) << " s\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Airborne pathogen transmission simulator", "mohanet"};
  app.require_subcommand(1);

  RunOptions opts;
  OdeOptions ode;
  auto add_common = [&](CLI::App* sub, bool replications = false) {
    sub->add_option("--scenario", opts.scenario, "Scenario file")->required();
    sub->add_option("--seed", opts.seed, "Override the scenario seed");
    sub->add_option("--out-dir", opts.out_dir, "Directory prefixed to every output path");
    if (replications) sub->add_option("--replications", opts.replications, "Independent replications");
  };

  auto* cloud = app.add_subcommand("cloud", "Still-air cloud trajectory and dose");
  auto* puff = app.add_subcommand("puff", "Gaussian puff field and dose");
  auto* plume = app.add_subcommand("plume", "Gaussian plume field and dose");
  auto* dose = app.add_subcommand("dose", "Receiver doses from the scenario channel");
  auto* epidemic = app.add_subcommand("epidemic", "Agent-based epidemic on mobile nodes");
  auto* kernel = app.add_subcommand("kernel", "Distance-to-dose kernel from the cloud channel");
  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario");
  for (auto* sub : {cloud, puff, plume, dose, kernel, validate}) add_common(sub);
  add_common(epidemic, true);

  auto* sir = app.add_subcommand("sir-ode", "Mean-field SIR/SEIR curves");
  sir->add_option("--r0", ode.r0, "Basic reproduction number");
  sir->add_option("--infectious-period", ode.infectious_period, "Mean infectious period (e.g. 5d)");
  sir->add_option("--incubation-period", ode.incubation_period, "Mean incubation period; enables SEIR");
  sir->add_option("--i0", ode.i0, "Initial infectious fraction");
  sir->add_option("--duration", ode.duration, "Horizon (e.g. 100d)");
  sir->add_option("--dt", ode.dt, "Step (e.g. 1h)");
  sir->add_option("--out", ode.out, "Curves CSV path");
  sir->add_option("--out-dir", ode.out_dir, "Directory prefixed to output paths");

  std::vector<std::string> args(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
  if (!args.empty() && !args.front().empty() && args.front()[0] != '-') {
    const auto subs = app.get_subcommands([](const CLI::App*) { return true; });
    const bool known = std::any_of(subs.begin(), subs.end(),
                                   [&](const CLI::App* sub) { return sub->get_name() == args.front(); });
    if (!known) {
      err << "error: unknown subcommand '" << args.front() << "'\n\n" << app.help();
      return kExitUsage;
    }
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(opts, out);
    if (cloud->parsed()) return cmd_channel(opts, "cloud", Channel::kCloud, out);
    if (puff->parsed()) return cmd_channel(opts, "puff", Channel::kPuff, out);
    if (plume->parsed()) return cmd_channel(opts, "plume", Channel::kPlume, out);
    if (dose->parsed()) return cmd_channel(opts, "dose", std::nullopt, out);
    if (epidemic->parsed()) return cmd_epidemic(opts, out);
    if (kernel->parsed()) return cmd_kernel(opts, out);
    if (sir->parsed()) return cmd_sir_ode(ode, out);
  } catch (const ValidationError& e) {
    err << e.what() << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace mohanet
