#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "mohanet/scenario.hpp"

namespace mohanet {

inline constexpr double kMinTravelDistance = 0.1;

struct Sigmas {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Power-law dispersion widths at downwind distance x > 0.
Sigmas dispersion_sigmas(double downwind_x, const DispersionParams& params);

struct PointSource {
  Vec3 position{};
  /// Droplets for a puff, droplets per second for a plume.
  double strength = 0.0;
  double release_time = 0.0;
};

/// Point expressed in source-local axes: x downwind, y crosswind, z absolute height.
Vec3 to_wind_frame(const PointSource& src, const Environment& env, const Vec3& point);

/// Transient Gaussian puff with ground reflection and inactivation.
double puff_concentration(const PointSource& src, const Environment& env, const Vec3& point, double t,
                          const DispersionParams& params);

/// Steady Gaussian plume with ground reflection. Zero upwind of the source.
double plume_concentration(const PointSource& src, const Environment& env, const Vec3& point,
                           const DispersionParams& params);

struct ConcentrationSample {
  double t = 0.0;
  double concentration = 0.0;
};

/// Trapezoidal integral of breathing_rate * C(t).
double inhaled_dose(const std::vector<ConcentrationSample>& series, double breathing_rate);

struct FieldPoint {
  double x, y, z, t, c;
};

using FieldFunction = std::function<double(const Vec3&, double)>;

/// Evaluates `fn` on the lattice in (t, x, y, z) order.
std::vector<FieldPoint> evaluate_field(const FieldGrid& grid, const FieldFunction& fn);
std::vector<FieldPoint> evaluate_field_serial(const FieldGrid& grid, const FieldFunction& fn);

}  // namespace mohanet
