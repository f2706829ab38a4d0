#pragma once

#include <vector>

#include "mohanet/rng.hpp"
#include "mohanet/scenario.hpp"

namespace mohanet {

enum class DropletClass { kAerosol, kLargeDroplet };

inline constexpr double kDefaultAerosolCutoff = 10e-6;

/// Draws `count` diameters i.i.d. from the truncated lognormal. Draws outside
/// [lower, upper] are redrawn.
std::vector<double> sample_droplet_diameters(int count, const LogNormal& dist, RngStream& rng);

/// Builds one release from a profile. `direction` must be a unit vector.
EmissionEvent make_emission(const ActivityProfile& profile, double time, const Vec3& origin,
                            const Vec3& direction, RngStream& rng);

/// Aerosol iff diameter < cutoff. Throws DomainError for non-positive input.
DropletClass classify_droplet(double diameter, double cutoff = kDefaultAerosolCutoff);

/// Expands the scenario emission schedule into concrete releases in
/// chronological order. Continuous activities repeat at their period until
/// the scenario duration.
std::vector<EmissionEvent> expand_emissions(const ScenarioConfig& config);

}  // namespace mohanet
