#pragma once

#include <vector>

#include "mohanet/scenario.hpp"

namespace mohanet {

/// Tabulates the plateau cloud dose of one emission at each distance along
/// the emission direction. Receivers keep `rx`'s height, radius and
/// threshold. Values are clamped to be non-increasing in distance.
DoseKernel build_kernel(const EmissionEvent& emission, const Environment& env, const RxGeometry& rx,
                        const std::vector<double>& distances, double duration, double dt,
                        const CloudParams& params = {});

/// Same table computed one distance after another.
DoseKernel build_kernel_serial(const EmissionEvent& emission, const Environment& env, const RxGeometry& rx,
                               const std::vector<double>& distances, double duration, double dt,
                               const CloudParams& params = {});

}  // namespace mohanet
