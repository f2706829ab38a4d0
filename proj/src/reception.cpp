#include "mohanet/reception.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mohanet/errors.hpp"

namespace mohanet {

double disk_overlap_area(double r1, double r2, double d) {
  if (d >= r1 + r2) return 0.0;
  const double rmin = std::min(r1, r2);
  if (d <= std::abs(r1 - r2)) return std::numbers::pi * rmin * rmin;
  const double a1 = std::acos(std::clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1), -1.0, 1.0));
  const double a2 = std::acos(std::clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2), -1.0, 1.0));
  const double kite = 0.5 * std::sqrt(std::max(0.0, (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)));
  return r1 * r1 * a1 + r2 * r2 * a2 - kite;
}

double swept_fraction(double radius, double signed_distance) {
  const double a = std::clamp(radius + signed_distance, 0.0, 2.0 * radius);
  return a * a * (3.0 * radius - a) / (4.0 * radius * radius * radius);
}

double capture_fraction(const CloudState& cloud, const RxGeometry& rx) {
  const Vec3 delta = rx.center - cloud.center;
  const double speed = norm(cloud.velocity);
  const Vec3 axis = speed > 0.0 ? cloud.velocity * (1.0 / speed) : Vec3{1.0, 0.0, 0.0};
  const double offset = norm(delta - axis * dot(delta, axis));
  const double area = std::numbers::pi * cloud.radius * cloud.radius;
  return std::clamp(disk_overlap_area(cloud.radius, rx.radius, offset) / area, 0.0, 1.0);
}

namespace {

// Horizontal unit normal of the receiver plane, facing the emitter.
Vec3 receiver_normal(const EmissionEvent& emission, const RxGeometry& rx) {
  Vec3 n = rx.center - emission.origin;
  n.z = 0.0;
  double len = norm(n);
  if (len == 0.0) {
    n = {emission.direction.x, emission.direction.y, 0.0};
    len = norm(n);
  }
  if (len == 0.0) return {1.0, 0.0, 0.0};
  return n * (1.0 / len);
}

}  // namespace

CloudReception receive_cloud(const CloudTrajectory& trajectory, const RxGeometry& rx) {
  CloudReception out;
  out.timeline.receiver_id = rx.id;
  const auto& samples = trajectory.samples;
  if (samples.empty()) return out;

  const Vec3 normal = receiver_normal(trajectory.emission, rx);
  const std::string& source = trajectory.emission.source_id;
  auto swept = [&](const CloudState& s) { return swept_fraction(s.radius, dot(s.center - rx.center, normal)); };

  double survival = 1.0;
  double cumulative = 0.0;
  double swept_so_far = swept(samples.front());
  double settled = 0.0;
  double captured = 0.0;
  double received = 0.0;

  out.timeline.samples.push_back({samples.front().time, 0.0, 0.0, {}});
  out.cloud_total.push_back(samples.front().total_droplets);
  out.cloud_viable.push_back(samples.front().viable_droplets);

  for (std::size_t k = 1; k < samples.size(); ++k) {
    const CloudState& prev = samples[k - 1];
    const CloudState& cur = samples[k];
    const double f = swept(cur);
    const double newly_swept = std::max(0.0, f - swept_so_far);
    swept_so_far = std::max(swept_so_far, f);

    settled += (prev.total_droplets - cur.total_droplets) * survival;
    const double taken = newly_swept > 0.0 ? capture_fraction(cur, rx) * newly_swept : 0.0;
    const double increment = cur.viable_droplets * survival * taken;
    captured += cur.total_droplets * survival * taken;
    received += increment;
    survival *= 1.0 - taken;

    cumulative += increment;
    DoseSample sample{cur.time, increment, cumulative, {}};
    if (increment > 0.0) sample.sources.push_back(source);
    out.timeline.samples.push_back(std::move(sample));
    out.cloud_total.push_back(cur.total_droplets * survival);
    out.cloud_viable.push_back(cur.viable_droplets * survival);
  }

  DropletBudget& b = out.budget;
  b.initial = samples.front().initial_droplets;
  b.received = received;
  // Droplets that settled before the first sample (very large ones) count as settled.
  b.settled = settled + (b.initial - samples.front().total_droplets);
  b.remaining = out.cloud_viable.back();
  b.inactivated = (captured - received) + (out.cloud_total.back() - out.cloud_viable.back());
  return out;
}

int detect_infection(double cumulative_dose, double threshold) { return cumulative_dose >= threshold ? 1 : 0; }

DoseTimeline superpose_doses(const std::vector<DoseTimeline>& timelines) {
  DoseTimeline out;
  if (timelines.empty()) return out;
  out.receiver_id = timelines.front().receiver_id;
  std::vector<const DoseSample*> all;
  for (const auto& tl : timelines) {
    if (tl.receiver_id != out.receiver_id) {
      throw DomainError("cannot superpose doses of different receivers: " + out.receiver_id + " vs " + tl.receiver_id);
    }
    for (const auto& s : tl.samples) all.push_back(&s);
  }
  std::stable_sort(all.begin(), all.end(), [](const DoseSample* a, const DoseSample* b) { return a->t < b->t; });

  double cumulative = 0.0;
  for (const DoseSample* s : all) {
    if (out.samples.empty() || out.samples.back().t != s->t) {
      out.samples.push_back({s->t, 0.0, 0.0, {}});
    }
    DoseSample& merged = out.samples.back();
    merged.increment += s->increment;
    merged.sources.insert(merged.sources.end(), s->sources.begin(), s->sources.end());
  }
  for (auto& s : out.samples) {
    std::sort(s.sources.begin(), s.sources.end());
    s.sources.erase(std::unique(s.sources.begin(), s.sources.end()), s.sources.end());
    cumulative += s.increment;
    s.cumulative = cumulative;
  }
  return out;
}

DoseTimeline timeline_from_concentration(const std::string& receiver_id, const std::string& source_id,
                                         const std::vector<ConcentrationSample>& series, double breathing_rate) {
  DoseTimeline out;
  out.receiver_id = receiver_id;
  if (series.empty()) return out;
  out.samples.push_back({series.front().t, 0.0, 0.0, {}});
  double cumulative = 0.0;
  for (std::size_t k = 1; k < series.size(); ++k) {
    const double increment = inhaled_dose({series[k - 1], series[k]}, breathing_rate);
    cumulative += increment;
    DoseSample s{series[k].t, increment, cumulative, {}};
    if (increment > 0.0) s.sources.push_back(source_id);
    out.samples.push_back(std::move(s));
  }
  return out;
}

CloudLink run_cloud_link(const EmissionEvent& emission, const Environment& env, const RxGeometry& rx,
                         double duration, double dt, const CloudParams& params) {
  CloudLink link;
  link.trajectory = simulate_cloud(emission, env, duration, dt, params);
  link.reception = receive_cloud(link.trajectory, rx);
  return link;
}

}  // namespace mohanet
