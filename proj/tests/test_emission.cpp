#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mohanet/emission.hpp"
#include "mohanet/errors.hpp"

using namespace mohanet;

TEST_CASE("profile launch speeds") {
  CHECK(default_profile(Activity::kCough).initial_speed == 10.0);
  CHECK(default_profile(Activity::kBreathe).initial_speed == 2.4);
  RngStream rng(1);
  const auto e = make_emission(default_profile(Activity::kCough), 0.0, {0, 0, 1.7}, {1, 0, 0}, rng);
  CHECK(e.initial_speed == 10.0);
  CHECK(e.emission_kind == EmissionKind::kImpulsive);
}

TEST_CASE("zero droplets is a valid empty release") {
  ActivityProfile p = default_profile(Activity::kCough);
  p.droplet_count_mean = 0;
  RngStream rng(1);
  const auto e = make_emission(p, 0.0, {}, {1, 0, 0}, rng);
  CHECK(e.diameters.empty());
  CHECK(sample_droplet_diameters(0, p.size_distribution, rng).empty());
}

TEST_CASE("sample median matches the configured median") {
  LogNormal dist;
  RngStream rng(3);
  auto d = sample_droplet_diameters(100000, dist, rng);
  REQUIRE(d.size() == 100000);
  CHECK(std::all_of(d.begin(), d.end(), [&](double x) { return x >= dist.lower && x <= dist.upper; }));
  std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
  CHECK(std::abs(d[d.size() / 2] / dist.median - 1.0) < 0.05);
}

TEST_CASE("unit spread collapses onto the median") {
  LogNormal dist;
  dist.gsd = 1.0;
  RngStream rng(4);
  for (double x : sample_droplet_diameters(100, dist, rng)) CHECK(std::abs(x / dist.median - 1.0) < 1e-9);
}

TEST_CASE("same stream gives bit-identical diameters") {
  RngStream a(99, StreamTag::kEmission, 0);
  RngStream b(99, StreamTag::kEmission, 0);
  const LogNormal dist;
  CHECK(sample_droplet_diameters(500, dist, a) == sample_droplet_diameters(500, dist, b));
}

TEST_CASE("aerosol classification") {
  CHECK(classify_droplet(1e-6, 10e-6) == DropletClass::kAerosol);
  CHECK(classify_droplet(100e-6, 10e-6) == DropletClass::kLargeDroplet);
  CHECK(classify_droplet(10e-6, 10e-6) == DropletClass::kLargeDroplet);
  CHECK_THROWS_AS(classify_droplet(0.0), DomainError);
  CHECK_THROWS_AS(classify_droplet(-1e-6), DomainError);
}

TEST_CASE("schedule expansion") {
  ScenarioConfig config;
  config.duration = 10.0;
  EmissionSpec speak;
  speak.source_id = "talker";
  speak.activity = Activity::kSpeak;
  speak.time = 0.5;
  EmissionSpec cough;
  cough.source_id = "cougher";
  cough.activity = Activity::kCough;
  cough.time = 3.0;
  cough.droplet_count = 30;
  config.emissions = {speak, cough};

  const auto events = expand_emissions(config);
  // speech repeats every second from 0.5 s; the cough happens once
  REQUIRE(events.size() == 11);
  CHECK(std::is_sorted(events.begin(), events.end(),
                       [](const EmissionEvent& a, const EmissionEvent& b) { return a.time < b.time; }));
  const auto cough_it =
      std::find_if(events.begin(), events.end(), [](const EmissionEvent& e) { return e.source_id == "cougher"; });
  REQUIRE(cough_it != events.end());
  CHECK(cough_it->diameters.size() == 30);
  CHECK(events.back().time == doctest::Approx(9.5));

  const auto again = expand_emissions(config);
  for (std::size_t i = 0; i < events.size(); ++i) CHECK(again[i].diameters == events[i].diameters);
}
