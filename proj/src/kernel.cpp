#include "mohanet/kernel.hpp"

#include <algorithm>
#include <exception>

#include "mohanet/errors.hpp"
#include "mohanet/reception.hpp"

namespace mohanet {

namespace {

void check_distances(const std::vector<double>& distances) {
  for (std::size_t i = 1; i < distances.size(); ++i) {
    if (!(distances[i] > distances[i - 1])) throw DomainError("kernel distances must be strictly increasing");
  }
}

double plateau_dose(const EmissionEvent& emission, const Environment& env, RxGeometry rx, double distance,
                    double duration, double dt, const CloudParams& params) {
  Vec3 heading{emission.direction.x, emission.direction.y, 0.0};
  const double len = norm(heading);
  heading = len > 0.0 ? heading * (1.0 / len) : Vec3{1.0, 0.0, 0.0};
  rx.center = {emission.origin.x + distance * heading.x, emission.origin.y + distance * heading.y, rx.center.z};
  return run_cloud_link(emission, env, rx, duration, dt, params).reception.timeline.final_dose();
}

void clamp_non_increasing(std::vector<double>& doses) {
  for (std::size_t i = 1; i < doses.size(); ++i) doses[i] = std::min(doses[i], doses[i - 1]);
}

}  // namespace

DoseKernel build_kernel_serial(const EmissionEvent& emission, const Environment& env, const RxGeometry& rx,
                               const std::vector<double>& distances, double duration, double dt,
                               const CloudParams& params) {
  check_distances(distances);
  DoseKernel k{distances, std::vector<double>(distances.size(), 0.0)};
  for (std::size_t i = 0; i < distances.size(); ++i) {
    k.doses[i] = plateau_dose(emission, env, rx, distances[i], duration, dt, params);
  }
  clamp_non_increasing(k.doses);
  return k;
}

DoseKernel build_kernel(const EmissionEvent& emission, const Environment& env, const RxGeometry& rx,
                        const std::vector<double>& distances, double duration, double dt, const CloudParams& params) {
  check_distances(distances);
  DoseKernel k{distances, std::vector<double>(distances.size(), 0.0)};
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(distances.size()); ++i) {
    try {
      const auto idx = static_cast<std::size_t>(i);
      k.doses[idx] = plateau_dose(emission, env, rx, distances[idx], duration, dt, params);
    } catch (...) {
#pragma omp critical(mohanet_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  clamp_non_increasing(k.doses);
  return k;
}

}  // namespace mohanet
