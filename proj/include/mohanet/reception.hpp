#pragma once

#include <string>
#include <vector>

#include "mohanet/cloud_channel.hpp"
#include "mohanet/plume_channel.hpp"
#include "mohanet/scenario.hpp"

namespace mohanet {

struct DoseSample {
  double t = 0.0;
  double increment = 0.0;
  double cumulative = 0.0;
  std::vector<std::string> sources;
};

/// Dose history of one receiver.
struct DoseTimeline {
  std::string receiver_id;
  std::vector<DoseSample> samples;

  double final_dose() const { return samples.empty() ? 0.0 : samples.back().cumulative; }
};

/// Fraction of the cloud cross-section (normal to its velocity) covered by
/// the receiver disk. Exact circle-circle intersection.
double capture_fraction(const CloudState& cloud, const RxGeometry& rx);

/// Area of the intersection of two disks with radii r1, r2 at centre distance d.
double disk_overlap_area(double r1, double r2, double d);

/// Fraction of a sphere's volume lying beyond a plane, given the signed
/// distance of the centre past the plane.
double swept_fraction(double radius, double signed_distance);

/// Droplet budget of a cloud after reception. The four terms partition N0.
struct DropletBudget {
  double received = 0.0;
  double settled = 0.0;
  double remaining = 0.0;
  double inactivated = 0.0;
  double initial = 0.0;
};

struct CloudReception {
  DoseTimeline timeline;
  /// Droplets in the cloud per trajectory sample, with received droplets removed.
  std::vector<double> cloud_total;
  std::vector<double> cloud_viable;
  DropletBudget budget;
};

/// Dose delivered by a cloud passing through the receiver plane. Delivered
/// droplets are removed from the cloud so nothing is counted twice.
CloudReception receive_cloud(const CloudTrajectory& trajectory, const RxGeometry& rx);

inline DoseTimeline receive_cloud_crossing(const CloudTrajectory& trajectory, const RxGeometry& rx) {
  return receive_cloud(trajectory, rx).timeline;
}

/// 1 iff cumulative_dose >= threshold.
int detect_infection(double cumulative_dose, double threshold);

/// Merges timelines of one receiver; samples at equal times are combined.
DoseTimeline superpose_doses(const std::vector<DoseTimeline>& timelines);

/// Dose timeline of a constant-breathing receiver from a concentration series.
DoseTimeline timeline_from_concentration(const std::string& receiver_id, const std::string& source_id,
                                         const std::vector<ConcentrationSample>& series, double breathing_rate);

/// Cloud trajectory plus its reception at one receiver.
struct CloudLink {
  CloudTrajectory trajectory;
  CloudReception reception;
};

CloudLink run_cloud_link(const EmissionEvent& emission, const Environment& env, const RxGeometry& rx,
                         double duration, double dt, const CloudParams& params = {});

}  // namespace mohanet
