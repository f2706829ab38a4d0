#include "mohanet/compartmental.hpp"

#include <cmath>

#include "mohanet/errors.hpp"

namespace mohanet {

namespace {

CompartmentPoint rates_of(const CompartmentRates& k, const CompartmentPoint& y) {
  const double force = k.beta * y.s * y.i;
  CompartmentPoint d;
  d.s = -force;
  if (k.incubation) {
    d.e = force - *k.incubation * y.e;
    d.i = *k.incubation * y.e - k.recovery * y.i;
  } else {
    d.i = force - k.recovery * y.i;
  }
  d.r = k.recovery * y.i;
  return d;
}

CompartmentPoint axpy(const CompartmentPoint& y, double h, const CompartmentPoint& d) {
  return {y.t, y.s + h * d.s, y.e + h * d.e, y.i + h * d.i, y.r + h * d.r};
}

}  // namespace

std::vector<CompartmentPoint> sir_ode(const CompartmentRates& rates, const CompartmentPoint& init, double duration,
                                      double dt) {
  if (!(dt > 0.0) || duration < 0.0) throw DomainError("sir_ode needs dt > 0 and duration >= 0");
  if (rates.beta < 0.0 || rates.recovery < 0.0 || (rates.incubation && *rates.incubation < 0.0)) {
    throw DomainError("compartment rates must be non-negative");
  }
  const auto steps = static_cast<std::int64_t>(std::floor(duration / dt + 1e-9));
  std::vector<CompartmentPoint> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  CompartmentPoint y = init;
  out.push_back(y);
  for (std::int64_t n = 1; n <= steps; ++n) {
    const CompartmentPoint k1 = rates_of(rates, y);
    const CompartmentPoint k2 = rates_of(rates, axpy(y, 0.5 * dt, k1));
    const CompartmentPoint k3 = rates_of(rates, axpy(y, 0.5 * dt, k2));
    const CompartmentPoint k4 = rates_of(rates, axpy(y, dt, k3));
    y.s += dt / 6.0 * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s);
    y.e += dt / 6.0 * (k1.e + 2.0 * k2.e + 2.0 * k3.e + k4.e);
    y.i += dt / 6.0 * (k1.i + 2.0 * k2.i + 2.0 * k3.i + k4.i);
    y.r += dt / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r);
    y.t = init.t + static_cast<double>(n) * dt;
    out.push_back(y);
  }
  return out;
}

double final_size(double r0) {
  if (r0 <= 1.0) return 0.0;
  // f is concave with f(0) = 0, f'(0) = r0 - 1 > 0 and f(1) < 0.
  auto f = [r0](double a) { return -a - std::expm1(-r0 * a); };
  double lo = 0.5;
  while (f(lo) <= 0.0 && lo > 1e-300) lo *= 0.5;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace mohanet
