#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mohanet/vec.hpp"

namespace mohanet {

// All quantities are SI. Temperatures are kelvin here; the scenario reader
// converts from degrees Celsius.

inline constexpr double kDefaultAmbientTemperature = 293.15;
inline constexpr double kDefaultExhaledTemperature = 308.15;
inline const double kDefaultDecayRate = std::log(5.0) / 60.0;

struct Environment {
  double temperature_ambient = kDefaultAmbientTemperature;
  double temperature_exhaled = kDefaultExhaledTemperature;
  double relative_humidity = 0.5;
  double air_density = 1.204;
  double air_dynamic_viscosity = 1.81e-5;
  Vec3 wind_velocity{};
  double gravity = 9.81;
  /// Pathogen inactivation rate; the default leaves 20% viable after 60 s.
  double pathogen_decay_rate = kDefaultDecayRate;
};

enum class Activity { kCough, kSneeze, kSpeak, kBreathe };
enum class EmissionKind { kImpulsive, kContinuous };

EmissionKind kind_of(Activity activity);
const char* to_string(Activity activity);
std::optional<Activity> parse_activity(const std::string& name);

struct LogNormal {
  double median = 16e-6;
  double gsd = 2.5;
  double lower = 0.5e-6;
  double upper = 1000e-6;
};

/// Emission parameters of one respiratory activity.
struct ActivityProfile {
  Activity activity = Activity::kCough;
  double initial_speed = 10.0;
  int droplet_count_mean = 1000;
  LogNormal size_distribution{};
  /// Repetition period for continuous activities (s); ignored otherwise.
  double period = 0.0;
};

ActivityProfile default_profile(Activity activity);

/// One respiratory release.
struct EmissionEvent {
  std::string source_id;
  double time = 0.0;
  Vec3 origin{0.0, 0.0, 1.7};
  Vec3 direction{1.0, 0.0, 0.0};
  double initial_speed = 0.0;
  std::vector<double> diameters;
  Activity activity = Activity::kCough;
  EmissionKind emission_kind = EmissionKind::kImpulsive;

  std::size_t droplet_count() const { return diameters.size(); }
};

/// Receiver facial disk plus detection threshold.
struct RxGeometry {
  std::string id = "rx0";
  Vec3 center{1.5, 0.0, 1.7};
  double radius = 0.1;
  double threshold = 80.0;
  double breathing_rate = 8e-5;
};

/// An entry of the emission schedule in a scenario file.
struct EmissionSpec {
  std::string source_id = "tx0";
  Activity activity = Activity::kCough;
  double time = 0.0;
  Vec3 origin{0.0, 0.0, 1.7};
  Vec3 direction{1.0, 0.0, 0.0};
  std::optional<int> droplet_count;
  /// Overrides the profile period; for impulsive activities enables repetition.
  std::optional<double> repeat_period;
};

struct CloudParams {
  double entrainment = 0.1;
  double initial_radius = 0.05;
  double droplet_density = 993.0;
  double evaporation_rate = 1.0e-9;
  double residue_fraction = 0.3;
  int diameter_bins = 32;
  double stop_speed = 1e-3;
  double stop_excess_temperature = 1e-3;
};

enum class StabilityClass { kA, kB, kC, kD, kE, kF };

struct PowerLaw {
  double a = 0.0;
  double b = 0.0;
  double operator()(double x) const { return a * std::pow(x, b); }
};

/// sigma_y = a_y x^b_y, sigma_z = a_z x^b_z, sigma_x = sigma_y.
struct DispersionParams {
  StabilityClass stability_class = StabilityClass::kD;
  PowerLaw sigma_y{};
  PowerLaw sigma_z{};
};

DispersionParams dispersion_table(StabilityClass cls);
std::optional<StabilityClass> parse_stability_class(const std::string& name);

/// Distance to per-emission dose table, linearly interpolated.
struct DoseKernel {
  std::vector<double> distances;
  std::vector<double> doses;
};

enum class EpidemicModel { kSIR, kSEIR, kSIRS };
enum class DurationMode { kFixed, kExponential };
enum class InfectionMode { kThreshold, kProbabilistic };

struct EpidemicParams {
  EpidemicModel model = EpidemicModel::kSIR;
  int node_count = 2000;
  int initial_infected = 5;
  double incubation_duration = 120.0;
  double infectious_duration = 600.0;
  double immunity_duration = 3600.0;
  DurationMode duration_mode = DurationMode::kFixed;
  double contact_range = 2.0;
  double mean_emission_interval = 30.0;
  DoseKernel dose_kernel{{0.0, 0.5, 1.0, 1.5, 2.0}, {400.0, 300.0, 200.0, 100.0, 0.0}};
  InfectionMode infection_mode = InfectionMode::kThreshold;
  double threshold = 80.0;
  /// Half-life of accumulated dose in S nodes; infinity = no forgetting.
  double dose_half_life = INFINITY;
  double snapshot_interval = 60.0;
};

enum class MobilityKind { kStatic, kRandomWaypoint, kTrace };

struct Region {
  double width = 100.0;
  double height = 100.0;
  bool contains(const Vec2& p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }
  double diagonal() const { return std::hypot(width, height); }
};

struct MobilitySpec {
  MobilityKind kind = MobilityKind::kRandomWaypoint;
  Region region{};
  double speed_min = 0.5;
  double speed_max = 1.5;
  double pause_max = 30.0;
  std::string trace_path;
};

enum class Channel { kCloud, kPuff, kPlume, kKernel };
const char* to_string(Channel channel);

/// Regular lattice for concentration field export.
struct FieldGrid {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> zs;
  std::vector<double> ts;
};

enum class SinkKind { kTrajectoryCsv, kDoseCsv, kFieldCsv, kTimeseriesCsv, kSnapshotsJsonl, kSummaryJson, kKernelCsv };
const char* to_string(SinkKind kind);
std::optional<SinkKind> parse_sink_kind(const std::string& name);

struct OutputSink {
  SinkKind kind = SinkKind::kSummaryJson;
  std::string path;
};

struct ScenarioConfig {
  std::string name = "scenario";
  Environment environment{};
  std::vector<ActivityProfile> profiles{default_profile(Activity::kCough), default_profile(Activity::kSneeze),
                                        default_profile(Activity::kSpeak), default_profile(Activity::kBreathe)};
  double aerosol_cutoff = 10e-6;
  std::vector<EmissionSpec> emissions{EmissionSpec{}};
  Channel channel = Channel::kCloud;
  CloudParams cloud{};
  DispersionParams dispersion = dispersion_table(StabilityClass::kD);
  std::vector<RxGeometry> receivers{RxGeometry{}};
  MobilitySpec mobility{};
  EpidemicParams epidemic{};
  FieldGrid field{};
  std::vector<double> kernel_distances{0.5, 1.0, 1.5, 2.0, 2.5};
  double duration = 10.0;
  double dt = 0.01;
  std::uint64_t seed = 1;
  std::vector<OutputSink> outputs;

  const ActivityProfile& profile(Activity activity) const;
};

struct Violation {
  std::string field;
  std::string message;
  bool operator==(const Violation&) const = default;
};

using ValidationReport = std::vector<Violation>;

/// Lists every constraint the configuration breaks. Pure; empty means valid.
ValidationReport validate_scenario(const ScenarioConfig& config);

}  // namespace mohanet
