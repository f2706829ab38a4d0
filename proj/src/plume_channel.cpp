#include "mohanet/plume_channel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include "mohanet/errors.hpp"

namespace mohanet {

Sigmas dispersion_sigmas(double downwind_x, const DispersionParams& params) {
  if (!(downwind_x > 0.0)) throw DomainError("dispersion widths need downwind distance > 0");
  const double sy = params.sigma_y(downwind_x);
  return {sy, sy, params.sigma_z(downwind_x)};
}

Vec3 to_wind_frame(const PointSource& src, const Environment& env, const Vec3& point) {
  const double u = std::hypot(env.wind_velocity.x, env.wind_velocity.y);
  double ex = 1.0;
  double ey = 0.0;
  if (u > 0.0) {
    ex = env.wind_velocity.x / u;
    ey = env.wind_velocity.y / u;
  }
  const double dx = point.x - src.position.x;
  const double dy = point.y - src.position.y;
  return {dx * ex + dy * ey, -dx * ey + dy * ex, point.z};
}

namespace {

double wind_speed(const Environment& env) { return std::hypot(env.wind_velocity.x, env.wind_velocity.y); }

// Vertical profile with the ground image source.
double reflected(double z, double height, double sigma_z) {
  const double two_var = 2.0 * sigma_z * sigma_z;
  return std::exp(-(z - height) * (z - height) / two_var) + std::exp(-(z + height) * (z + height) / two_var);
}

}  // namespace

double puff_concentration(const PointSource& src, const Environment& env, const Vec3& point, double t,
                          const DispersionParams& params) {
  const double age = t - src.release_time;
  if (!(age > 0.0)) throw DomainError("puff concentration needs t > release time");
  if (src.strength == 0.0) return 0.0;
  const double u = wind_speed(env);
  const Vec3 p = to_wind_frame(src, env, point);
  const Sigmas s = dispersion_sigmas(std::max(u * age, kMinTravelDistance), params);
  const double mass = src.strength * std::exp(-env.pathogen_decay_rate * age);
  const double norm_const = std::pow(2.0 * std::numbers::pi, 1.5) * s.x * s.y * s.z;
  const double along = p.x - u * age;
  return mass / norm_const * std::exp(-along * along / (2.0 * s.x * s.x)) *
         std::exp(-p.y * p.y / (2.0 * s.y * s.y)) * reflected(p.z, src.position.z, s.z);
}

double plume_concentration(const PointSource& src, const Environment& env, const Vec3& point,
                           const DispersionParams& params) {
  const double u = wind_speed(env);
  if (!(u > 0.0)) throw DomainError("plume undefined in still air; use cloud or puff");
  const Vec3 p = to_wind_frame(src, env, point);
  if (p.x <= 0.0 || src.strength == 0.0) return 0.0;
  const Sigmas s = dispersion_sigmas(p.x, params);
  return src.strength / (2.0 * std::numbers::pi * u * s.y * s.z) * std::exp(-p.y * p.y / (2.0 * s.y * s.y)) *
         reflected(p.z, src.position.z, s.z);
}

double inhaled_dose(const std::vector<ConcentrationSample>& series, double breathing_rate) {
  double dose = 0.0;
  for (std::size_t k = 1; k < series.size(); ++k) {
    const double h = series[k].t - series[k - 1].t;
    if (h < 0.0) throw DomainError("concentration series must be time-ordered");
    dose += 0.5 * h * (series[k].concentration + series[k - 1].concentration);
  }
  return breathing_rate * dose;
}

namespace {

std::size_t lattice_size(const FieldGrid& g) { return g.ts.size() * g.xs.size() * g.ys.size() * g.zs.size(); }

FieldPoint lattice_point(const FieldGrid& g, std::size_t index, const FieldFunction& fn) {
  const std::size_t nz = g.zs.size();
  const std::size_t ny = g.ys.size();
  const std::size_t nx = g.xs.size();
  const std::size_t iz = index % nz;
  const std::size_t iy = (index / nz) % ny;
  const std::size_t ix = (index / (nz * ny)) % nx;
  const std::size_t it = index / (nz * ny * nx);
  const Vec3 p{g.xs[ix], g.ys[iy], g.zs[iz]};
  return {p.x, p.y, p.z, g.ts[it], fn(p, g.ts[it])};
}

}  // namespace

std::vector<FieldPoint> evaluate_field_serial(const FieldGrid& grid, const FieldFunction& fn) {
  const std::size_t n = lattice_size(grid);
  std::vector<FieldPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(lattice_point(grid, i, fn));
  return out;
}

std::vector<FieldPoint> evaluate_field(const FieldGrid& grid, const FieldFunction& fn) {
  const auto n = static_cast<std::int64_t>(lattice_size(grid));
  std::vector<FieldPoint> out(static_cast<std::size_t>(n));
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = lattice_point(grid, static_cast<std::size_t>(i), fn);
    } catch (...) {
#pragma omp critical(mohanet_field_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace mohanet
