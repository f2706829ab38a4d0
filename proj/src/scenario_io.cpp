#include "mohanet/scenario_io.hpp"

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "mohanet/cli.hpp"
#include "mohanet/errors.hpp"

namespace mohanet {

namespace {

std::string join(const ValidationReport& report) {
  std::string out = "scenario is invalid:";
  for (const auto& v : report) out += "\n  " + v.field + ": " + v.message;
  return out;
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& message) {
  const YAML::Mark mark = node.Mark();
  if (mark.is_null()) throw ParseError(message);
  throw ParseError(message, static_cast<std::size_t>(mark.line) + 1, static_cast<std::size_t>(mark.column) + 1);
}

// Map node whose keys are checked against an allow-list.
class Section {
 public:
  Section(const YAML::Node& node, std::string path, std::set<std::string> allowed)
      : node_(node), path_(std::move(path)) {
    if (!node.IsMap()) fail(node, "'" + path_ + "' must be a mapping");
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.contains(key)) {
        fail(kv.first, "unknown key '" + key + "'" + (path_.empty() ? "" : " in '" + path_ + "'"));
      }
    }
  }

  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }
  YAML::Node get(const std::string& key) const { return node_[key]; }

  template <typename T>
  void read(const std::string& key, T& out) const {
    const YAML::Node v = node_[key];
    if (!v) return;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      fail(v, "invalid value for '" + qualified(key) + "'");
    }
  }

  void read_duration(const std::string& key, double& out) const {
    const YAML::Node v = node_[key];
    if (!v) return;
    if (!v.IsScalar()) fail(v, "'" + qualified(key) + "' must be a duration");
    try {
      out = parse_duration(v.Scalar());
    } catch (const std::exception&) {
      fail(v, "invalid duration for '" + qualified(key) + "'");
    }
  }

  void read_vec3(const std::string& key, Vec3& out) const {
    const YAML::Node v = node_[key];
    if (!v) return;
    const auto xs = sequence(v, key);
    if (xs.size() != 3) fail(v, "'" + qualified(key) + "' needs 3 components");
    out = {xs[0], xs[1], xs[2]};
  }

  std::vector<double> sequence(const YAML::Node& v, const std::string& key) const {
    if (!v.IsSequence()) fail(v, "'" + qualified(key) + "' must be a list");
    std::vector<double> xs;
    for (const auto& item : v) {
      try {
        xs.push_back(item.as<double>());
      } catch (const YAML::Exception&) {
        fail(item, "invalid number in '" + qualified(key) + "'");
      }
    }
    return xs;
  }

  std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  YAML::Node node_;
  std::string path_;
};

double celsius_to_kelvin(double c) { return c + 273.15; }

void read_environment(const Section& s, Environment& env) {
  double t_amb = env.temperature_ambient - 273.15;
  double t_exh = env.temperature_exhaled - 273.15;
  s.read("temperature_ambient_c", t_amb);
  s.read("temperature_exhaled_c", t_exh);
  env.temperature_ambient = celsius_to_kelvin(t_amb);
  env.temperature_exhaled = celsius_to_kelvin(t_exh);
  s.read("relative_humidity", env.relative_humidity);
  s.read("air_density", env.air_density);
  s.read("air_dynamic_viscosity", env.air_dynamic_viscosity);
  s.read_vec3("wind_velocity", env.wind_velocity);
  s.read("gravity", env.gravity);
  s.read("pathogen_decay_rate", env.pathogen_decay_rate);
}

void read_profiles(const YAML::Node& node, ScenarioConfig& config) {
  const Section profiles(node, "profiles", {"cough", "sneeze", "speak", "breathe"});
  for (auto& p : config.profiles) {
    const std::string name = to_string(p.activity);
    if (!profiles.has(name)) continue;
    const Section s(profiles.get(name), "profiles." + name,
                    {"initial_speed", "droplet_count", "log_median", "log_gsd", "min_diameter", "max_diameter",
                     "period"});
    s.read("initial_speed", p.initial_speed);
    s.read("droplet_count", p.droplet_count_mean);
    s.read("log_median", p.size_distribution.median);
    s.read("log_gsd", p.size_distribution.gsd);
    s.read("min_diameter", p.size_distribution.lower);
    s.read("max_diameter", p.size_distribution.upper);
    s.read_duration("period", p.period);
  }
}

Vec3 normalized(const Vec3& v) {
  const double len = norm(v);
  return len > 0.0 ? v * (1.0 / len) : v;
}

void read_emissions(const YAML::Node& node, ScenarioConfig& config) {
  if (!node.IsSequence()) fail(node, "'emissions' must be a list");
  config.emissions.clear();
  for (const auto& item : node) {
    const Section s(item, "emissions",
                    {"source_id", "activity", "time", "origin", "direction", "droplet_count", "repeat_period"});
    EmissionSpec e;
    s.read("source_id", e.source_id);
    if (s.has("activity")) {
      const auto a = parse_activity(s.get("activity").as<std::string>());
      if (!a) fail(s.get("activity"), "unknown activity '" + s.get("activity").as<std::string>() + "'");
      e.activity = *a;
    }
    s.read_duration("time", e.time);
    s.read_vec3("origin", e.origin);
    s.read_vec3("direction", e.direction);
    e.direction = normalized(e.direction);
    if (s.has("droplet_count")) {
      int n = 0;
      s.read("droplet_count", n);
      e.droplet_count = n;
    }
    if (s.has("repeat_period")) {
      double p = 0.0;
      s.read_duration("repeat_period", p);
      e.repeat_period = p;
    }
    config.emissions.push_back(e);
  }
}

void read_receivers(const YAML::Node& node, ScenarioConfig& config) {
  if (!node.IsSequence()) fail(node, "'receivers' must be a list");
  config.receivers.clear();
  for (const auto& item : node) {
    const Section s(item, "receivers", {"id", "center", "radius", "threshold", "breathing_rate"});
    RxGeometry rx;
    rx.id = "rx" + std::to_string(config.receivers.size());
    s.read("id", rx.id);
    s.read_vec3("center", rx.center);
    s.read("radius", rx.radius);
    s.read("threshold", rx.threshold);
    s.read("breathing_rate", rx.breathing_rate);
    config.receivers.push_back(rx);
  }
}

void read_mobility(const Section& s, MobilitySpec& m, const std::string& base_dir) {
  if (s.has("kind")) {
    const auto kind = s.get("kind").as<std::string>();
    if (kind == "static") {
      m.kind = MobilityKind::kStatic;
    } else if (kind == "random_waypoint") {
      m.kind = MobilityKind::kRandomWaypoint;
    } else if (kind == "trace") {
      m.kind = MobilityKind::kTrace;
    } else {
      fail(s.get("kind"), "unknown mobility kind '" + kind + "'");
    }
  }
  if (s.has("region")) {
    const auto xs = s.sequence(s.get("region"), "region");
    if (xs.size() != 2) fail(s.get("region"), "'mobility.region' needs [width, height]");
    m.region = {xs[0], xs[1]};
  }
  s.read("speed_min", m.speed_min);
  s.read("speed_max", m.speed_max);
  s.read_duration("pause_max", m.pause_max);
  if (s.has("trace")) {
    std::string path;
    s.read("trace", path);
    const std::filesystem::path p(path);
    m.trace_path = p.is_absolute() ? path : (std::filesystem::path(base_dir) / p).lexically_normal().string();
  }
}

void read_epidemic(const Section& s, EpidemicParams& e) {
  if (s.has("model")) {
    const auto model = s.get("model").as<std::string>();
    if (model == "SIR" || model == "sir") {
      e.model = EpidemicModel::kSIR;
    } else if (model == "SEIR" || model == "seir") {
      e.model = EpidemicModel::kSEIR;
    } else if (model == "SIRS" || model == "sirs") {
      e.model = EpidemicModel::kSIRS;
    } else {
      fail(s.get("model"), "unknown epidemic model '" + model + "'");
    }
  }
  s.read("node_count", e.node_count);
  s.read("initial_infected", e.initial_infected);
  s.read_duration("incubation_duration", e.incubation_duration);
  s.read_duration("infectious_duration", e.infectious_duration);
  s.read_duration("immunity_duration", e.immunity_duration);
  if (s.has("duration_mode")) {
    const auto mode = s.get("duration_mode").as<std::string>();
    if (mode == "fixed") {
      e.duration_mode = DurationMode::kFixed;
    } else if (mode == "exponential") {
      e.duration_mode = DurationMode::kExponential;
    } else {
      fail(s.get("duration_mode"), "unknown duration mode '" + mode + "'");
    }
  }
  s.read("contact_range", e.contact_range);
  s.read_duration("mean_emission_interval", e.mean_emission_interval);
  if (s.has("dose_kernel")) {
    const Section k(s.get("dose_kernel"), "epidemic.dose_kernel", {"distances", "doses"});
    if (k.has("distances")) e.dose_kernel.distances = k.sequence(k.get("distances"), "distances");
    if (k.has("doses")) e.dose_kernel.doses = k.sequence(k.get("doses"), "doses");
  }
  if (s.has("infection_mode")) {
    const auto mode = s.get("infection_mode").as<std::string>();
    if (mode == "threshold") {
      e.infection_mode = InfectionMode::kThreshold;
    } else if (mode == "probabilistic") {
      e.infection_mode = InfectionMode::kProbabilistic;
    } else {
      fail(s.get("infection_mode"), "unknown infection mode '" + mode + "'");
    }
  }
  s.read("threshold", e.threshold);
  if (s.has("dose_half_life")) {
    const auto text = s.get("dose_half_life").as<std::string>();
    if (text == "inf" || text == ".inf") {
      e.dose_half_life = INFINITY;
    } else {
      s.read_duration("dose_half_life", e.dose_half_life);
    }
  }
  s.read_duration("snapshot_interval", e.snapshot_interval);
}

std::vector<double> read_axis(const Section& s, const std::string& key) {
  const YAML::Node v = s.get(key);
  if (v.IsSequence()) return s.sequence(v, key);
  const Section r(v, s.qualified(key), {"from", "to", "count"});
  double from = 0.0;
  double to = 0.0;
  int count = 1;
  r.read("from", from);
  r.read("to", to);
  r.read("count", count);
  if (count < 1) fail(v, "'" + s.qualified(key) + ".count' must be at least 1");
  std::vector<double> xs;
  for (int i = 0; i < count; ++i) {
    xs.push_back(count == 1 ? from : from + (to - from) * static_cast<double>(i) / (count - 1));
  }
  return xs;
}

}  // namespace

ValidationError::ValidationError(ValidationReport report) : std::runtime_error(join(report)), report_(std::move(report)) {}

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError("malformed scenario: " + e.msg, static_cast<std::size_t>(e.mark.line) + 1,
                     static_cast<std::size_t>(e.mark.column) + 1);
  }
  ScenarioConfig config;
  if (root.IsNull()) return config;
  const Section top(root, "",
                    {"name", "channel", "duration", "dt", "seed", "environment", "profiles", "aerosol_cutoff",
                     "emissions", "cloud", "dispersion", "receivers", "mobility", "epidemic", "field",
                     "kernel_distances", "outputs"});
  top.read("name", config.name);
  if (top.has("channel")) {
    const auto channel = top.get("channel").as<std::string>();
    bool found = false;
    for (auto c : {Channel::kCloud, Channel::kPuff, Channel::kPlume, Channel::kKernel}) {
      if (channel == to_string(c)) {
        config.channel = c;
        found = true;
      }
    }
    if (!found) fail(top.get("channel"), "unknown channel '" + channel + "'");
  }
  top.read_duration("duration", config.duration);
  top.read_duration("dt", config.dt);
  top.read("seed", config.seed);
  top.read("aerosol_cutoff", config.aerosol_cutoff);

  if (top.has("environment")) {
    read_environment(Section(top.get("environment"), "environment",
                             {"temperature_ambient_c", "temperature_exhaled_c", "relative_humidity", "air_density",
                              "air_dynamic_viscosity", "wind_velocity", "gravity", "pathogen_decay_rate"}),
                     config.environment);
  }
  if (top.has("profiles")) read_profiles(top.get("profiles"), config);
  if (top.has("emissions")) read_emissions(top.get("emissions"), config);
  if (top.has("cloud")) {
    const Section s(top.get("cloud"), "cloud",
                    {"entrainment", "initial_radius", "droplet_density", "evaporation_rate", "residue_fraction",
                     "diameter_bins", "stop_speed", "stop_excess_temperature"});
    auto& c = config.cloud;
    s.read("entrainment", c.entrainment);
    s.read("initial_radius", c.initial_radius);
    s.read("droplet_density", c.droplet_density);
    s.read("evaporation_rate", c.evaporation_rate);
    s.read("residue_fraction", c.residue_fraction);
    s.read("diameter_bins", c.diameter_bins);
    s.read("stop_speed", c.stop_speed);
    s.read("stop_excess_temperature", c.stop_excess_temperature);
  }
  if (top.has("dispersion")) {
    const Section s(top.get("dispersion"), "dispersion", {"stability_class", "sigma_y", "sigma_z"});
    if (s.has("stability_class")) {
      const auto name = s.get("stability_class").as<std::string>();
      const auto cls = parse_stability_class(name);
      if (!cls) fail(s.get("stability_class"), "unknown stability class '" + name + "'");
      config.dispersion = dispersion_table(*cls);
    }
    for (const auto* key : {"sigma_y", "sigma_z"}) {
      if (!s.has(key)) continue;
      const auto ab = s.sequence(s.get(key), key);
      if (ab.size() != 2) fail(s.get(key), std::string("'dispersion.") + key + "' needs [a, b]");
      (std::string(key) == "sigma_y" ? config.dispersion.sigma_y : config.dispersion.sigma_z) = {ab[0], ab[1]};
    }
  }
  if (top.has("receivers")) read_receivers(top.get("receivers"), config);
  if (top.has("mobility")) {
    read_mobility(Section(top.get("mobility"), "mobility",
                          {"kind", "region", "speed_min", "speed_max", "pause_max", "trace"}),
                  config.mobility, base_dir);
  }
  if (top.has("epidemic")) {
    read_epidemic(Section(top.get("epidemic"), "epidemic",
                          {"model", "node_count", "initial_infected", "incubation_duration", "infectious_duration",
                           "immunity_duration", "duration_mode", "contact_range", "mean_emission_interval",
                           "dose_kernel", "infection_mode", "threshold", "dose_half_life", "snapshot_interval"}),
                  config.epidemic);
  }
  if (top.has("field")) {
    const Section s(top.get("field"), "field", {"x", "y", "z", "t"});
    if (s.has("x")) config.field.xs = read_axis(s, "x");
    if (s.has("y")) config.field.ys = read_axis(s, "y");
    if (s.has("z")) config.field.zs = read_axis(s, "z");
    if (s.has("t")) config.field.ts = read_axis(s, "t");
  }
  if (top.has("kernel_distances")) config.kernel_distances = top.sequence(top.get("kernel_distances"), "kernel_distances");
  if (top.has("outputs")) {
    const YAML::Node outs = top.get("outputs");
    if (!outs.IsSequence()) fail(outs, "'outputs' must be a list");
    for (const auto& item : outs) {
      const Section s(item, "outputs", {"kind", "path"});
      OutputSink sink;
      std::string kind;
      s.read("kind", kind);
      const auto k = parse_sink_kind(kind);
      if (!k) fail(item, "unknown sink kind '" + kind + "'");
      sink.kind = *k;
      s.read("path", sink.path);
      config.outputs.push_back(sink);
    }
  }
  return config;
}

ScenarioConfig parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string base = std::filesystem::path(path).parent_path().string();
  ScenarioConfig config = parse_scenario_text(buffer.str(), base.empty() ? "." : base);
  ValidationReport report = validate_scenario(config);
  if (!report.empty()) throw ValidationError(std::move(report));
  return config;
}

namespace {

nlohmann::ordered_json vec(const Vec3& v) { return {v.x, v.y, v.z}; }

std::string model_name(EpidemicModel m) {
  switch (m) {
    case EpidemicModel::kSIR:
      return "SIR";
    case EpidemicModel::kSEIR:
      return "SEIR";
    case EpidemicModel::kSIRS:
      return "SIRS";
  }
  return "?";
}

std::string mobility_name(MobilityKind k) {
  switch (k) {
    case MobilityKind::kStatic:
      return "static";
    case MobilityKind::kRandomWaypoint:
      return "random_waypoint";
    case MobilityKind::kTrace:
      return "trace";
  }
  return "?";
}

// JSON has no infinity; unbounded values are written as the string "inf".
nlohmann::ordered_json finite_or_inf(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

}  // namespace

nlohmann::ordered_json scenario_to_json(const ScenarioConfig& c) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["name"] = c.name;
  j["channel"] = to_string(c.channel);
  j["duration"] = c.duration;
  j["dt"] = c.dt;
  j["seed"] = c.seed;
  const auto& e = c.environment;
  j["environment"] = {{"temperature_ambient", e.temperature_ambient},
                      {"temperature_exhaled", e.temperature_exhaled},
                      {"relative_humidity", e.relative_humidity},
                      {"air_density", e.air_density},
                      {"air_dynamic_viscosity", e.air_dynamic_viscosity},
                      {"wind_velocity", vec(e.wind_velocity)},
                      {"gravity", e.gravity},
                      {"pathogen_decay_rate", e.pathogen_decay_rate}};
  ordered_json profiles = ordered_json::object();
  for (const auto& p : c.profiles) {
    profiles[to_string(p.activity)] = {{"initial_speed", p.initial_speed},
                                       {"droplet_count", p.droplet_count_mean},
                                       {"log_median", p.size_distribution.median},
                                       {"log_gsd", p.size_distribution.gsd},
                                       {"min_diameter", p.size_distribution.lower},
                                       {"max_diameter", p.size_distribution.upper},
                                       {"period", p.period}};
  }
  j["profiles"] = profiles;
  j["aerosol_cutoff"] = c.aerosol_cutoff;
  ordered_json emissions = ordered_json::array();
  for (const auto& em : c.emissions) {
    ordered_json x = {{"source_id", em.source_id},
                      {"activity", to_string(em.activity)},
                      {"time", em.time},
                      {"origin", vec(em.origin)},
                      {"direction", vec(em.direction)}};
    x["droplet_count"] = em.droplet_count ? ordered_json(*em.droplet_count) : ordered_json(nullptr);
    x["repeat_period"] = em.repeat_period ? ordered_json(*em.repeat_period) : ordered_json(nullptr);
    emissions.push_back(x);
  }
  j["emissions"] = emissions;
  const auto& cl = c.cloud;
  j["cloud"] = {{"entrainment", cl.entrainment},
                {"initial_radius", cl.initial_radius},
                {"droplet_density", cl.droplet_density},
                {"evaporation_rate", cl.evaporation_rate},
                {"residue_fraction", cl.residue_fraction},
                {"diameter_bins", cl.diameter_bins},
                {"stop_speed", cl.stop_speed},
                {"stop_excess_temperature", cl.stop_excess_temperature}};
  j["dispersion"] = {{"stability_class", std::string(1, static_cast<char>('A' + static_cast<int>(c.dispersion.stability_class)))},
                     {"sigma_y", {c.dispersion.sigma_y.a, c.dispersion.sigma_y.b}},
                     {"sigma_z", {c.dispersion.sigma_z.a, c.dispersion.sigma_z.b}}};
  ordered_json receivers = ordered_json::array();
  for (const auto& rx : c.receivers) {
    receivers.push_back({{"id", rx.id},
                         {"center", vec(rx.center)},
                         {"radius", rx.radius},
                         {"threshold", rx.threshold},
                         {"breathing_rate", rx.breathing_rate}});
  }
  j["receivers"] = receivers;
  const auto& m = c.mobility;
  j["mobility"] = {{"kind", mobility_name(m.kind)},
                   {"region", {m.region.width, m.region.height}},
                   {"speed_min", m.speed_min},
                   {"speed_max", m.speed_max},
                   {"pause_max", m.pause_max},
                   {"trace", m.trace_path}};
  const auto& ep = c.epidemic;
  j["epidemic"] = {{"model", model_name(ep.model)},
                   {"node_count", ep.node_count},
                   {"initial_infected", ep.initial_infected},
                   {"incubation_duration", ep.incubation_duration},
                   {"infectious_duration", ep.infectious_duration},
                   {"immunity_duration", ep.immunity_duration},
                   {"duration_mode", ep.duration_mode == DurationMode::kFixed ? "fixed" : "exponential"},
                   {"contact_range", ep.contact_range},
                   {"mean_emission_interval", ep.mean_emission_interval},
                   {"dose_kernel", {{"distances", ep.dose_kernel.distances}, {"doses", ep.dose_kernel.doses}}},
                   {"infection_mode", ep.infection_mode == InfectionMode::kThreshold ? "threshold" : "probabilistic"},
                   {"threshold", ep.threshold},
                   {"dose_half_life", finite_or_inf(ep.dose_half_life)},
                   {"snapshot_interval", ep.snapshot_interval}};
  j["field"] = {{"x", c.field.xs}, {"y", c.field.ys}, {"z", c.field.zs}, {"t", c.field.ts}};
  j["kernel_distances"] = c.kernel_distances;
  ordered_json outputs = ordered_json::array();
  for (const auto& o : c.outputs) outputs.push_back({{"kind", to_string(o.kind)}, {"path", o.path}});
  j["outputs"] = outputs;
  return j;
}

}  // namespace mohanet
