#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "mohanet/emission.hpp"
#include "mohanet/errors.hpp"
#include "mohanet/reception.hpp"

using namespace mohanet;

namespace {

CloudState cloud_at(const Vec3& center, double radius) {
  CloudState s;
  s.center = center;
  s.velocity = {1.0, 0.0, 0.0};
  s.radius = radius;
  return s;
}

RxGeometry receiver(const Vec3& center, double radius) {
  RxGeometry rx;
  rx.center = center;
  rx.radius = radius;
  return rx;
}

DoseTimeline single(const std::string& rx, const std::string& source, double t, double dose) {
  return {rx, {{0.0, 0.0, 0.0, {}}, {t, dose, dose, {source}}}};
}

CloudTrajectory demo_trajectory() {
  RngStream rng(42, StreamTag::kEmission, 0);
  const auto e = make_emission(default_profile(Activity::kCough), 0.0, {0, 0, 1.7}, {1, 0, 0}, rng);
  return simulate_cloud(e, Environment{}, 10.0, 0.01, CloudParams{});
}

}  // namespace

TEST_CASE("capture fraction limits") {
  CHECK(capture_fraction(cloud_at({0, 0, 1.7}, 0.1), receiver({1, 0.3, 1.7}, 0.1)) == 0.0);
  CHECK(capture_fraction(cloud_at({0, 0, 1.7}, 0.1), receiver({1, 0.0, 1.7}, 0.1)) == doctest::Approx(1.0));
  CHECK(capture_fraction(cloud_at({0, 0, 1.7}, 0.1), receiver({1, 0.0, 1.7}, 0.5)) == doctest::Approx(1.0));
}

TEST_CASE("capture fraction against Monte Carlo") {
  RngStream rng(2024);
  auto mc = [&](double rc, double rr, double offset) {
    const int n = 1000000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
      double y, z;
      do {
        y = rng.uniform(-rc, rc);
        z = rng.uniform(-rc, rc);
      } while (y * y + z * z > rc * rc);
      if ((y - offset) * (y - offset) + z * z <= rr * rr) ++hits;
    }
    return static_cast<double>(hits) / n;
  };
  const double concentric = capture_fraction(cloud_at({0, 0, 1.7}, 0.2), receiver({1, 0, 1.7}, 0.1));
  CHECK(concentric == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::abs(mc(0.2, 0.1, 0.0) - concentric) < 0.003);
  const double partial = capture_fraction(cloud_at({0, 0, 1.7}, 0.2), receiver({1, 0.18, 1.7}, 0.1));
  CHECK(std::abs(mc(0.2, 0.1, 0.18) - partial) < 0.003);
}

TEST_CASE("swept fraction") {
  CHECK(swept_fraction(1.0, -1.0) == 0.0);
  CHECK(swept_fraction(1.0, 0.0) == doctest::Approx(0.5));
  CHECK(swept_fraction(1.0, 1.0) == doctest::Approx(1.0));
  CHECK(swept_fraction(1.0, 5.0) == doctest::Approx(1.0));
}

TEST_CASE("infection threshold") {
  CHECK(detect_infection(80.0, 80.0) == 1);
  CHECK(detect_infection(79.999, 80.0) == 0);
  CHECK(detect_infection(0.0, 0.0) == 1);
}

TEST_CASE("a cloud that never arrives delivers nothing") {
  const auto traj = demo_trajectory();
  const auto rx = receiver({5.0, 0.0, 1.7}, 0.1);
  const auto rec = receive_cloud(traj, rx);
  CHECK(rec.timeline.samples.size() == traj.samples.size());
  for (const auto& s : rec.timeline.samples) CHECK(s.cumulative == 0.0);
  CHECK(rec.budget.received == 0.0);
}

TEST_CASE("demo reception and droplet budget") {
  const auto traj = demo_trajectory();
  RxGeometry rx = receiver({1.5, 0.0, 1.7}, 0.1);
  const auto rec = receive_cloud(traj, rx);
  CHECK(rec.timeline.final_dose() > 80.0);
  const auto& b = rec.budget;
  CHECK(b.initial == 1000.0);
  CHECK(std::abs(b.received + b.settled + b.remaining + b.inactivated - b.initial) <= 1e-6 * b.initial);
  CHECK(b.received == doctest::Approx(rec.timeline.final_dose()));
  for (std::size_t k = 1; k < rec.cloud_total.size(); ++k) {
    CHECK(rec.cloud_total[k] <= rec.cloud_total[k - 1] + 1e-12);
    CHECK(rec.cloud_viable[k] <= rec.cloud_viable[k - 1] + 1e-12);
    CHECK(rec.cloud_viable[k] <= rec.cloud_total[k]);
    CHECK(rec.timeline.samples[k].cumulative >= rec.timeline.samples[k - 1].cumulative);
  }
  const auto link = run_cloud_link(traj.emission, Environment{}, rx, 10.0, 0.01);
  CHECK(link.reception.timeline.final_dose() == rec.timeline.final_dose());
}

TEST_CASE("superposition") {
  const auto a = single("rx", "a", 1.0, 30.0);
  CHECK(superpose_doses({a}).final_dose() == 30.0);
  CHECK(superpose_doses({a}).samples.size() == a.samples.size());
  CHECK(superpose_doses({a, a}).final_dose() == 60.0);
  CHECK_THROWS_AS(superpose_doses({a, single("other", "b", 1.0, 1.0)}), DomainError);

  const std::vector<DoseTimeline> three{single("rx", "a", 1.0, 30.0), single("rx", "b", 2.0, 30.0),
                                        single("rx", "c", 2.0, 30.0)};
  for (const auto& tl : three) CHECK(detect_infection(tl.final_dose(), 80.0) == 0);
  const auto merged = superpose_doses(three);
  CHECK(detect_infection(merged.final_dose(), 80.0) == 1);

  // brute-force merge: sum increments per timestamp
  std::map<double, double> expected;
  for (const auto& tl : three) {
    for (const auto& s : tl.samples) expected[s.t] += s.increment;
  }
  REQUIRE(merged.samples.size() == expected.size());
  double cumulative = 0.0;
  std::size_t k = 0;
  for (const auto& [t, inc] : expected) {
    cumulative += inc;
    CHECK(merged.samples[k].t == t);
    CHECK(merged.samples[k].cumulative == doctest::Approx(cumulative));
    ++k;
  }
  CHECK(merged.samples.back().sources == std::vector<std::string>{"b", "c"});
}

TEST_CASE("timeline from a concentration series") {
  const auto tl = timeline_from_concentration("rx", "plume", {{0.0, 100.0}, {30.0, 100.0}, {60.0, 100.0}}, 8e-5);
  CHECK(tl.final_dose() == doctest::Approx(0.48));
  CHECK(tl.samples.size() == 3);
}
