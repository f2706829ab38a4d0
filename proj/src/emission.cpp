#include "mohanet/emission.hpp"

#include <algorithm>
#include <cmath>

#include "mohanet/errors.hpp"

namespace mohanet {

std::vector<double> sample_droplet_diameters(int count, const LogNormal& dist, RngStream& rng) {
  std::vector<double> out;
  if (count <= 0) return out;
  out.reserve(static_cast<std::size_t>(count));
  const double mu = std::log(dist.median);
  const double sigma = std::log(dist.gsd);
  while (out.size() < static_cast<std::size_t>(count)) {
    const double d = std::exp(mu + sigma * rng.normal());
    if (d >= dist.lower && d <= dist.upper) out.push_back(d);
  }
  return out;
}

EmissionEvent make_emission(const ActivityProfile& profile, double time, const Vec3& origin, const Vec3& direction,
                            RngStream& rng) {
  EmissionEvent e;
  e.time = time;
  e.origin = origin;
  e.direction = direction;
  e.initial_speed = profile.initial_speed;
  e.activity = profile.activity;
  e.emission_kind = kind_of(profile.activity);
  e.diameters = sample_droplet_diameters(profile.droplet_count_mean, profile.size_distribution, rng);
  return e;
}

DropletClass classify_droplet(double diameter, double cutoff) {
  if (!(diameter > 0.0)) throw DomainError("droplet diameter must be positive");
  if (!(cutoff > 0.0)) throw DomainError("aerosol cutoff must be positive");
  return diameter < cutoff ? DropletClass::kAerosol : DropletClass::kLargeDroplet;
}

std::vector<EmissionEvent> expand_emissions(const ScenarioConfig& config) {
  std::vector<EmissionEvent> events;
  for (std::size_t i = 0; i < config.emissions.size(); ++i) {
    const auto& spec = config.emissions[i];
    ActivityProfile profile = config.profile(spec.activity);
    if (spec.droplet_count) profile.droplet_count_mean = *spec.droplet_count;

    double period = 0.0;
    if (spec.repeat_period) {
      period = *spec.repeat_period;
    } else if (kind_of(spec.activity) == EmissionKind::kContinuous) {
      period = profile.period;
    }

    RngStream rng(config.seed, StreamTag::kEmission, i);
    for (std::int64_t k = 0;; ++k) {
      const double t = spec.time + static_cast<double>(k) * period;
      if (k > 0 && !(t < config.duration)) break;
      EmissionEvent e = make_emission(profile, t, spec.origin, spec.direction, rng);
      e.source_id = spec.source_id;
      events.push_back(std::move(e));
      if (period <= 0.0) break;
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const EmissionEvent& a, const EmissionEvent& b) { return a.time < b.time; });
  return events;
}

}  // namespace mohanet
