#include "mohanet/cloud_channel.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mohanet/errors.hpp"

namespace mohanet {

const char* to_string(Termination reason) {
  switch (reason) {
    case Termination::kDurationElapsed:
      return "duration_elapsed";
    case Termination::kCloudStopped:
      return "cloud_stopped";
    case Termination::kAllSettled:
      return "all_settled";
  }
  return "?";
}

double settling_velocity(double diameter, const Environment& env, double droplet_density) {
  if (!(diameter > 0.0) || diameter > kStokesDiameterLimit) {
    throw DomainError("settling velocity needs 0 < diameter <= 1 mm (Stokes regime)");
  }
  return droplet_density * env.gravity * diameter * diameter / (18.0 * env.air_dynamic_viscosity);
}

namespace {

double shrink_rate(const Environment& env, const CloudParams& params) {
  return params.evaporation_rate * (1.0 - env.relative_humidity);
}

// Time at which d^2 reaches the residue floor; infinite when not shrinking.
double floor_time(double d0, const Environment& env, const CloudParams& params) {
  const double k = shrink_rate(env, params);
  if (k <= 0.0) return INFINITY;
  const double floor_d = params.residue_fraction * d0;
  return (d0 * d0 - floor_d * floor_d) / k;
}

// Integral of the Stokes velocity over the evaporating diameter history.
// d^2 is piecewise linear in time so the integral is exact.
double settling_distance(double d0, double age, const Environment& env, const CloudParams& params) {
  if (age <= 0.0) return 0.0;
  const double coeff = params.droplet_density * env.gravity / (18.0 * env.air_dynamic_viscosity);
  const double k = shrink_rate(env, params);
  const double tf = floor_time(d0, env, params);
  const double d0sq = d0 * d0;
  if (age <= tf) return coeff * (d0sq * age - 0.5 * k * age * age);
  const double floor_d = params.residue_fraction * d0;
  return coeff * (d0sq * tf - 0.5 * k * tf * tf + floor_d * floor_d * (age - tf));
}

struct Kinematics {
  Vec3 position;
  Vec3 velocity;
  double radius;
  double excess_temperature;
};

Kinematics derivative(const Kinematics& y, const Environment& env, const CloudParams& params) {
  const double speed = norm(y.velocity);
  const double growth = params.entrainment * speed;
  const double dilution = 3.0 * growth / y.radius;
  Kinematics d;
  d.position = y.velocity;
  d.velocity = y.velocity * (-dilution);
  d.velocity.z += env.gravity * y.excess_temperature / env.temperature_ambient;
  d.radius = growth;
  d.excess_temperature = -dilution * y.excess_temperature;
  return d;
}

Kinematics axpy(const Kinematics& y, double h, const Kinematics& d) {
  return {y.position + d.position * h, y.velocity + d.velocity * h, y.radius + h * d.radius,
          y.excess_temperature + h * d.excess_temperature};
}

Kinematics rk4(const Kinematics& y, const Environment& env, const CloudParams& params, double h) {
  const Kinematics k1 = derivative(y, env, params);
  const Kinematics k2 = derivative(axpy(y, 0.5 * h, k1), env, params);
  const Kinematics k3 = derivative(axpy(y, 0.5 * h, k2), env, params);
  const Kinematics k4 = derivative(axpy(y, h, k3), env, params);
  Kinematics out;
  out.position = y.position + (k1.position + k2.position * 2.0 + k3.position * 2.0 + k4.position) * (h / 6.0);
  out.velocity = y.velocity + (k1.velocity + k2.velocity * 2.0 + k3.velocity * 2.0 + k4.velocity) * (h / 6.0);
  out.radius = y.radius + (k1.radius + 2.0 * k2.radius + 2.0 * k3.radius + k4.radius) * (h / 6.0);
  out.excess_temperature =
      y.excess_temperature +
      (k1.excess_temperature + 2.0 * k2.excess_temperature + 2.0 * k3.excess_temperature + k4.excess_temperature) *
          (h / 6.0);
  return out;
}

// Settling removal, droplet counts and current diameters at `state.time`.
void update_droplets(CloudState& state, const Environment& env, const CloudParams& params) {
  const double age = state.age();
  double total = 0.0;
  state.droplet_diameters.resize(state.bins.size());
  for (std::size_t b = 0; b < state.bins.size(); ++b) {
    DropletBin& bin = state.bins[b];
    state.droplet_diameters[b] = evaporated_diameter(bin.initial_diameter, age, env, params);
    if (bin.airborne && settling_distance(bin.initial_diameter, age, env, params) > state.radius) {
      bin.airborne = false;
      state.settled_droplets += bin.count;
    }
    if (bin.airborne) total += bin.count;
  }
  state.total_droplets = total;
  state.viable_droplets = total * viable_fraction(age, env.pathogen_decay_rate);
}

CloudState advance(const CloudState& state, const Environment& env, const CloudParams& params, double dt,
                   double new_time) {
  if (!(dt > 0.0)) throw DomainError("cloud step needs dt > 0");
  const Kinematics y{state.center, state.velocity, state.radius, state.excess_temperature};
  const Kinematics next = rk4(y, env, params, dt);
  CloudState out = state;
  out.time = new_time;
  out.center = next.position;
  out.velocity = next.velocity;
  out.radius = std::max(next.radius, state.radius);
  out.excess_temperature = next.excess_temperature;
  update_droplets(out, env, params);
  return out;
}

}  // namespace

double evaporated_diameter(double initial_diameter, double t, const Environment& env, const CloudParams& params) {
  const double floor_d = params.residue_fraction * initial_diameter;
  const double dsq = initial_diameter * initial_diameter - shrink_rate(env, params) * std::max(t, 0.0);
  return std::sqrt(std::max(dsq, floor_d * floor_d));
}

double viable_fraction(double t, double decay_rate) { return std::exp(-decay_rate * t); }

CloudState initial_cloud(const EmissionEvent& emission, const Environment& env, const CloudParams& params) {
  CloudState s;
  s.time = emission.time;
  s.emission_time = emission.time;
  s.center = emission.origin;
  s.velocity = emission.direction * emission.initial_speed;
  s.radius = params.initial_radius;
  s.excess_temperature = env.temperature_exhaled - env.temperature_ambient;
  s.initial_droplets = static_cast<double>(emission.droplet_count());

  if (!emission.diameters.empty()) {
    const auto [lo_it, hi_it] = std::minmax_element(emission.diameters.begin(), emission.diameters.end());
    const double log_lo = std::log(*lo_it);
    const double span = std::log(*hi_it) - log_lo;
    const int nbins = std::max(1, params.diameter_bins);
    std::vector<double> log_sum(static_cast<std::size_t>(nbins), 0.0);
    std::vector<double> count(static_cast<std::size_t>(nbins), 0.0);
    for (double d : emission.diameters) {
      int b = span > 0.0 ? static_cast<int>((std::log(d) - log_lo) / span * nbins) : 0;
      b = std::clamp(b, 0, nbins - 1);
      log_sum[static_cast<std::size_t>(b)] += std::log(d);
      count[static_cast<std::size_t>(b)] += 1.0;
    }
    for (std::size_t b = 0; b < count.size(); ++b) {
      if (count[b] > 0.0) s.bins.push_back({std::exp(log_sum[b] / count[b]), count[b], true});
    }
  }
  update_droplets(s, env, params);
  return s;
}

CloudState step_cloud(const CloudState& state, const Environment& env, const CloudParams& params, double dt) {
  return advance(state, env, params, dt, state.time + dt);
}

CloudTrajectory simulate_cloud(const EmissionEvent& emission, const Environment& env, double duration, double dt,
                               const CloudParams& params) {
  if (!(dt > 0.0) || duration < dt) throw DomainError("cloud simulation needs duration >= dt > 0");
  CloudTrajectory traj;
  traj.emission = emission;
  const auto steps = static_cast<std::int64_t>(std::floor(duration / dt + 1e-9));
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  traj.samples.push_back(initial_cloud(emission, env, params));

  for (std::int64_t k = 1; k <= steps; ++k) {
    const double t = emission.time + static_cast<double>(k) * dt;
    traj.samples.push_back(advance(traj.samples.back(), env, params, dt, t));
    const CloudState& s = traj.samples.back();
    if (norm(s.velocity) < params.stop_speed && std::abs(s.excess_temperature) < params.stop_excess_temperature) {
      traj.termination = Termination::kCloudStopped;
      break;
    }
    if (s.initial_droplets > 0.0 && s.total_droplets == 0.0) {
      traj.termination = Termination::kAllSettled;
      break;
    }
  }
  return traj;
}

}  // namespace mohanet
