#include "mohanet/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <set>

#include "mohanet/errors.hpp"

namespace mohanet {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ", column " +
                                        std::to_string(column) + ")"
                                  : what),
      line_(line),
      column_(column) {}

EmissionKind kind_of(Activity activity) {
  switch (activity) {
    case Activity::kCough:
    case Activity::kSneeze:
      return EmissionKind::kImpulsive;
    case Activity::kSpeak:
    case Activity::kBreathe:
      return EmissionKind::kContinuous;
  }
  return EmissionKind::kImpulsive;
}

const char* to_string(Activity activity) {
  switch (activity) {
    case Activity::kCough:
      return "cough";
    case Activity::kSneeze:
      return "sneeze";
    case Activity::kSpeak:
      return "speak";
    case Activity::kBreathe:
      return "breathe";
  }
  return "?";
}

std::optional<Activity> parse_activity(const std::string& name) {
  for (auto a : {Activity::kCough, Activity::kSneeze, Activity::kSpeak, Activity::kBreathe}) {
    if (name == to_string(a)) return a;
  }
  return std::nullopt;
}

// Counts and the sneeze/speech speeds are placeholders; only the cough and
// breathing speeds are measured values.
ActivityProfile default_profile(Activity activity) {
  ActivityProfile p;
  p.activity = activity;
  switch (activity) {
    case Activity::kCough:
      p.initial_speed = 10.0;
      p.droplet_count_mean = 1000;
      break;
    case Activity::kSneeze:
      p.initial_speed = 20.0;
      p.droplet_count_mean = 10000;
      break;
    case Activity::kSpeak:
      p.initial_speed = 3.9;
      p.droplet_count_mean = 50;
      p.period = 1.0;
      break;
    case Activity::kBreathe:
      p.initial_speed = 2.4;
      p.droplet_count_mean = 10;
      p.period = 4.0;
      break;
  }
  return p;
}

// Klug (1969) power-law fits, x and sigma in metres.
DispersionParams dispersion_table(StabilityClass cls) {
  DispersionParams d;
  d.stability_class = cls;
  switch (cls) {
    case StabilityClass::kA:
      d.sigma_y = {0.469, 0.903};
      d.sigma_z = {0.017, 1.380};
      break;
    case StabilityClass::kB:
      d.sigma_y = {0.306, 0.885};
      d.sigma_z = {0.072, 1.021};
      break;
    case StabilityClass::kC:
      d.sigma_y = {0.230, 0.855};
      d.sigma_z = {0.076, 0.879};
      break;
    case StabilityClass::kD:
      d.sigma_y = {0.219, 0.764};
      d.sigma_z = {0.140, 0.727};
      break;
    case StabilityClass::kE:
      d.sigma_y = {0.237, 0.691};
      d.sigma_z = {0.217, 0.610};
      break;
    case StabilityClass::kF:
      d.sigma_y = {0.273, 0.594};
      d.sigma_z = {0.262, 0.500};
      break;
  }
  return d;
}

std::optional<StabilityClass> parse_stability_class(const std::string& name) {
  if (name.size() != 1) return std::nullopt;
  const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  if (c < 'A' || c > 'F') return std::nullopt;
  return static_cast<StabilityClass>(c - 'A');
}

const char* to_string(Channel channel) {
  switch (channel) {
    case Channel::kCloud:
      return "cloud";
    case Channel::kPuff:
      return "puff";
    case Channel::kPlume:
      return "plume";
    case Channel::kKernel:
      return "kernel";
  }
  return "?";
}

const char* to_string(SinkKind kind) {
  switch (kind) {
    case SinkKind::kTrajectoryCsv:
      return "trajectory_csv";
    case SinkKind::kDoseCsv:
      return "dose_csv";
    case SinkKind::kFieldCsv:
      return "field_csv";
    case SinkKind::kTimeseriesCsv:
      return "timeseries_csv";
    case SinkKind::kSnapshotsJsonl:
      return "snapshots_jsonl";
    case SinkKind::kSummaryJson:
      return "summary_json";
    case SinkKind::kKernelCsv:
      return "kernel_csv";
  }
  return "?";
}

std::optional<SinkKind> parse_sink_kind(const std::string& name) {
  for (auto k : {SinkKind::kTrajectoryCsv, SinkKind::kDoseCsv, SinkKind::kFieldCsv, SinkKind::kTimeseriesCsv,
                 SinkKind::kSnapshotsJsonl, SinkKind::kSummaryJson, SinkKind::kKernelCsv}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

const ActivityProfile& ScenarioConfig::profile(Activity activity) const {
  for (const auto& p : profiles) {
    if (p.activity == activity) return p;
  }
  throw DomainError(std::string("no profile for activity ") + to_string(activity));
}

namespace {

class Collector {
 public:
  explicit Collector(ValidationReport& report) : report_(report) {}

  void require(bool ok, std::string field, std::string message) {
    if (!ok) report_.push_back({std::move(field), std::move(message)});
  }

 private:
  ValidationReport& report_;
};

bool strictly_increasing(const std::vector<double>& v) {
  return std::adjacent_find(v.begin(), v.end(), [](double a, double b) { return !(a < b); }) == v.end();
}

void check_kernel(Collector& c, const EpidemicParams& e) {
  const auto& k = e.dose_kernel;
  c.require(!k.distances.empty(), "epidemic.dose_kernel", "kernel must have at least one knot");
  c.require(k.distances.size() == k.doses.size(), "epidemic.dose_kernel",
            "kernel distances and doses must have equal length");
  if (k.distances.empty() || k.distances.size() != k.doses.size()) return;
  c.require(strictly_increasing(k.distances), "epidemic.dose_kernel.distances",
            "kernel distances must be strictly increasing");
  c.require(k.distances.front() >= 0.0, "epidemic.dose_kernel.distances", "kernel distances must be non-negative");
  c.require(std::all_of(k.doses.begin(), k.doses.end(), [](double d) { return d >= 0.0; }),
            "epidemic.dose_kernel.doses", "kernel doses must be non-negative");
  c.require(std::is_sorted(k.doses.rbegin(), k.doses.rend()), "epidemic.dose_kernel.doses",
            "kernel must be non-increasing in distance");
  bool zero_beyond_range = true;
  for (std::size_t i = 0; i < k.distances.size(); ++i) {
    if (k.distances[i] >= e.contact_range && k.doses[i] != 0.0) zero_beyond_range = false;
  }
  c.require(zero_beyond_range, "epidemic.dose_kernel", "kernel must be zero at and beyond contact_range");
}

}  // namespace

ValidationReport validate_scenario(const ScenarioConfig& config) {
  ValidationReport report;
  Collector c(report);

  const auto& env = config.environment;
  c.require(env.temperature_ambient > 0.0, "environment.temperature_ambient", "temperature must be positive");
  c.require(env.temperature_exhaled > 0.0, "environment.temperature_exhaled", "temperature must be positive");
  c.require(env.relative_humidity >= 0.0 && env.relative_humidity <= 1.0, "environment.relative_humidity",
            "relative humidity must lie in [0, 1]");
  c.require(env.air_density > 0.0, "environment.air_density", "air density must be positive");
  c.require(env.air_dynamic_viscosity > 0.0, "environment.air_dynamic_viscosity", "viscosity must be positive");
  c.require(env.gravity >= 0.0, "environment.gravity", "gravity must be non-negative");
  c.require(env.pathogen_decay_rate >= 0.0, "environment.pathogen_decay_rate", "decay rate must be non-negative");

  for (const auto& p : config.profiles) {
    const std::string f = std::string("profiles.") + to_string(p.activity);
    c.require(p.initial_speed >= 0.0, f + ".initial_speed", "initial speed must be non-negative");
    c.require(p.droplet_count_mean >= 0, f + ".droplet_count", "droplet count must be non-negative");
    c.require(p.size_distribution.median > 0.0, f + ".log_median", "median diameter must be positive");
    c.require(p.size_distribution.gsd > 1.0, f + ".log_gsd", "geometric standard deviation must exceed 1");
    c.require(p.size_distribution.lower > 0.0 && p.size_distribution.lower < p.size_distribution.upper,
              f + ".truncation", "truncation bounds must satisfy 0 < lower < upper");
    c.require(p.size_distribution.upper <= 1e-3, f + ".truncation", "diameters above 1 mm leave the Stokes regime");
    if (kind_of(p.activity) == EmissionKind::kContinuous) {
      c.require(p.period > 0.0, f + ".period", "continuous activity period must be positive");
    }
  }
  c.require(config.aerosol_cutoff >= 5e-6 && config.aerosol_cutoff <= 10e-6, "aerosol_cutoff",
            "aerosol cutoff must lie in the 5-10 um band");

  for (std::size_t i = 0; i < config.emissions.size(); ++i) {
    const auto& e = config.emissions[i];
    const std::string f = "emissions[" + std::to_string(i) + "]";
    c.require(e.time >= 0.0, f + ".time", "emission time must be non-negative");
    c.require(std::abs(norm(e.direction) - 1.0) < 1e-9, f + ".direction", "direction must be a unit vector");
    if (e.droplet_count) c.require(*e.droplet_count >= 0, f + ".droplet_count", "droplet count must be non-negative");
    if (e.repeat_period) c.require(*e.repeat_period > 0.0, f + ".repeat_period", "repeat period must be positive");
    if (config.channel == Channel::kPlume) {
      c.require(kind_of(e.activity) == EmissionKind::kContinuous || e.repeat_period.has_value(), f,
                "plume channel needs continuous emissions or a repeat_period");
    }
  }

  const auto& cp = config.cloud;
  c.require(cp.entrainment > 0.0, "cloud.entrainment", "entrainment coefficient must be positive");
  c.require(cp.initial_radius > 0.0, "cloud.initial_radius", "initial radius must be positive");
  c.require(cp.droplet_density > 0.0, "cloud.droplet_density", "droplet density must be positive");
  c.require(cp.evaporation_rate >= 0.0, "cloud.evaporation_rate", "evaporation rate must be non-negative");
  c.require(cp.residue_fraction > 0.0 && cp.residue_fraction <= 1.0, "cloud.residue_fraction",
            "residue fraction must lie in (0, 1]");
  c.require(cp.diameter_bins >= 1, "cloud.diameter_bins", "at least one diameter bin is required");

  for (const auto* law : {&config.dispersion.sigma_y, &config.dispersion.sigma_z}) {
    c.require(law->a > 0.0 && law->b > 0.0 && law->b < 1.5, "dispersion",
              "dispersion coefficients need a > 0 and 0 < b < 1.5");
  }

  std::set<std::string> rx_ids;
  for (std::size_t i = 0; i < config.receivers.size(); ++i) {
    const auto& rx = config.receivers[i];
    const std::string f = "receivers[" + std::to_string(i) + "]";
    c.require(rx.radius > 0.0, f + ".radius", "radius must be positive");
    c.require(rx.threshold >= 0.0, f + ".threshold", "threshold must be non-negative");
    c.require(rx.breathing_rate > 0.0, f + ".breathing_rate", "breathing rate must be positive");
    c.require(rx_ids.insert(rx.id).second, f + ".id", "receiver ids must be unique");
  }

  c.require(config.duration > 0.0, "duration", "duration must be positive");
  c.require(config.dt > 0.0, "dt", "dt must be positive");
  c.require(!(config.dt > config.duration), "dt", "dt must not exceed duration");

  const double wind = std::hypot(env.wind_velocity.x, env.wind_velocity.y);
  if (config.channel == Channel::kPlume) {
    c.require(wind > 0.0, "environment.wind_velocity", "plume undefined in still air; use cloud or puff");
  }
  if (config.channel == Channel::kKernel) {
    c.require(!config.kernel_distances.empty() && strictly_increasing(config.kernel_distances) &&
                  config.kernel_distances.front() > 0.0,
              "kernel_distances", "kernel distances must be positive and strictly increasing");
  }

  const auto& m = config.mobility;
  c.require(m.region.width > 0.0 && m.region.height > 0.0, "mobility.region", "region must have positive extent");
  if (m.kind == MobilityKind::kRandomWaypoint) {
    c.require(m.speed_min > 0.0 && m.speed_min <= m.speed_max, "mobility.speed",
              "speeds must satisfy 0 < speed_min <= speed_max");
    c.require(m.pause_max >= 0.0, "mobility.pause_max", "pause must be non-negative");
  }
  if (m.kind == MobilityKind::kTrace) {
    std::error_code ec;
    c.require(!m.trace_path.empty() && std::filesystem::is_regular_file(m.trace_path, ec), "mobility.trace",
              "trace file does not exist: " + m.trace_path);
  }

  const auto& e = config.epidemic;
  if (m.kind != MobilityKind::kTrace) {
    c.require(e.node_count > 0, "epidemic.node_count", "node count must be positive");
  }
  c.require(e.initial_infected >= 0 && (m.kind == MobilityKind::kTrace || e.initial_infected <= e.node_count),
            "epidemic.initial_infected", "initial infected must lie in [0, node_count]");
  c.require(e.incubation_duration > 0.0, "epidemic.incubation_duration", "durations must be positive");
  c.require(e.infectious_duration > 0.0, "epidemic.infectious_duration", "durations must be positive");
  c.require(e.immunity_duration > 0.0, "epidemic.immunity_duration", "durations must be positive");
  c.require(e.contact_range >= 0.0, "epidemic.contact_range", "contact range must be non-negative");
  c.require(e.mean_emission_interval > 0.0, "epidemic.mean_emission_interval",
            "mean emission interval must be positive");
  c.require(e.threshold >= 0.0, "epidemic.threshold", "threshold must be non-negative");
  c.require(e.dose_half_life > 0.0, "epidemic.dose_half_life", "dose half-life must be positive");
  c.require(e.snapshot_interval > 0.0, "epidemic.snapshot_interval", "snapshot interval must be positive");
  check_kernel(c, e);

  for (std::size_t i = 0; i < config.outputs.size(); ++i) {
    c.require(!config.outputs[i].path.empty(), "outputs[" + std::to_string(i) + "]", "sink path must not be empty");
  }
  return report;
}

}  // namespace mohanet
