#pragma once

#include <optional>
#include <vector>

namespace mohanet {

struct CompartmentRates {
  double beta = 0.0;
  double recovery = 0.0;
  /// E -> I rate; absent for SIR.
  std::optional<double> incubation;
};

struct CompartmentPoint {
  double t = 0.0;
  double s = 0.0;
  double e = 0.0;
  double i = 0.0;
  double r = 0.0;
};

/// RK4 solution of the SIR / SEIR mean-field equations on fractions.
std::vector<CompartmentPoint> sir_ode(const CompartmentRates& rates, const CompartmentPoint& init,
                                      double duration, double dt);

/// Non-trivial root of 1 - a = exp(-R0 a) by bisection; 0 for R0 <= 1.
double final_size(double r0);

}  // namespace mohanet
