#pragma once

#include <vector>

#include "mohanet/scenario.hpp"

namespace mohanet {

inline constexpr double kStokesDiameterLimit = 1e-3;

/// A diameter class carried by the cloud.
struct DropletBin {
  double initial_diameter = 0.0;
  double count = 0.0;
  bool airborne = true;
};

/// Still-air droplet cloud at one instant.
struct CloudState {
  double time = 0.0;
  double emission_time = 0.0;
  Vec3 center{};
  Vec3 velocity{};
  double radius = 0.0;
  double excess_temperature = 0.0;
  double total_droplets = 0.0;
  double viable_droplets = 0.0;
  double settled_droplets = 0.0;
  double initial_droplets = 0.0;
  std::vector<DropletBin> bins;
  /// Current (evaporated) diameter of each bin, parallel to `bins`.
  std::vector<double> droplet_diameters;

  double age() const { return time - emission_time; }
};

enum class Termination { kDurationElapsed, kCloudStopped, kAllSettled };
const char* to_string(Termination reason);

struct CloudTrajectory {
  std::vector<CloudState> samples;
  EmissionEvent emission;
  Termination termination = Termination::kDurationElapsed;
};

/// Stokes terminal velocity, positive downward. Valid for 0 < d <= 1 mm.
double settling_velocity(double diameter, const Environment& env, double droplet_density = 993.0);

/// d^2-law evaporation with a non-volatile residue floor.
double evaporated_diameter(double initial_diameter, double t, const Environment& env,
                           const CloudParams& params = {});

/// exp(-decay_rate * t).
double viable_fraction(double t, double decay_rate);

/// Initial cloud for an emission: radius r0, exhaled excess temperature and
/// the droplets grouped into log-spaced diameter bins.
CloudState initial_cloud(const EmissionEvent& emission, const Environment& env, const CloudParams& params);

/// One RK4 step of the cloud ODE followed by settling removal and
/// inactivation bookkeeping.
CloudState step_cloud(const CloudState& state, const Environment& env, const CloudParams& params, double dt);

CloudTrajectory simulate_cloud(const EmissionEvent& emission, const Environment& env, double duration,
                               double dt, const CloudParams& params = {});

}  // namespace mohanet
