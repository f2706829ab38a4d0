#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mohanet/cloud_channel.hpp"
#include "mohanet/emission.hpp"
#include "mohanet/errors.hpp"
#include "oracles.hpp"

using namespace mohanet;

namespace {

EmissionEvent cough(std::uint64_t seed = 1) {
  RngStream rng(seed, StreamTag::kEmission, 0);
  return make_emission(default_profile(Activity::kCough), 0.0, {0, 0, 1.7}, {1, 0, 0}, rng);
}

}  // namespace

TEST_CASE("Stokes settling velocity") {
  const Environment env;
  auto stokes = [](double d) { return 993.0 * 9.81 * d * d / (18.0 * 1.81e-5); };
  CHECK(settling_velocity(100e-6, env) == doctest::Approx(stokes(100e-6)).epsilon(1e-12));
  CHECK(settling_velocity(100e-6, env) == doctest::Approx(0.299).epsilon(0.002));
  CHECK(settling_velocity(10e-6, env) == doctest::Approx(2.99e-3).epsilon(0.002));
  CHECK(settling_velocity(1e-9, env) < 1e-9);
  CHECK_THROWS_AS(settling_velocity(0.0, env), DomainError);
  CHECK_THROWS_AS(settling_velocity(2e-3, env), DomainError);
}

TEST_CASE("evaporation") {
  Environment env;
  const CloudParams params;
  CHECK(evaporated_diameter(50e-6, 0.0, env, params) == 50e-6);
  CHECK(evaporated_diameter(50e-6, 2.0, env, params) == doctest::Approx(std::sqrt(2.5e-9 - 1.0e-9)).epsilon(1e-12));
  CHECK(evaporated_diameter(50e-6, 2.0, env, params) == doctest::Approx(38.7e-6).epsilon(1e-3));
  // residue floor
  CHECK(evaporated_diameter(50e-6, 1e6, env, params) == doctest::Approx(15e-6).epsilon(1e-12));
  env.relative_humidity = 1.0;
  CHECK(evaporated_diameter(50e-6, 100.0, env, params) == 50e-6);
}

TEST_CASE("viability") {
  const Environment env;
  CHECK(viable_fraction(0.0, env.pathogen_decay_rate) == 1.0);
  CHECK(std::abs(viable_fraction(60.0, env.pathogen_decay_rate) - 0.2) < 1e-12);
  CHECK(viable_fraction(1e4, 0.0) == 1.0);
}

TEST_CASE("quiescent cloud stays put") {
  Environment env;
  env.temperature_exhaled = env.temperature_ambient;
  EmissionEvent e;
  e.origin = {1, 2, 3};
  e.initial_speed = 0.0;
  const CloudParams params;
  const CloudState s0 = initial_cloud(e, env, params);
  const CloudState s1 = step_cloud(s0, env, params, 0.1);
  CHECK(s1.time == doctest::Approx(0.1));
  CHECK(s1.center == s0.center);
  CHECK(s1.velocity == s0.velocity);
  CHECK(s1.radius == s0.radius);
  CHECK(s1.excess_temperature == 0.0);
  CHECK_THROWS_AS(step_cloud(s0, env, params, 0.0), DomainError);
}

TEST_CASE("duration equal to dt gives two samples") {
  const auto traj = simulate_cloud(cough(), Environment{}, 0.01, 0.01, CloudParams{});
  CHECK(traj.samples.size() == 2);
}

TEST_CASE("cough cloud reaches 1.5 m within 10 s") {
  const auto traj = simulate_cloud(cough(), Environment{}, 10.0, 0.01, CloudParams{});
  double crossing = -1.0;
  for (const auto& s : traj.samples) {
    if (s.center.x >= 1.5) {
      crossing = s.time;
      break;
    }
  }
  CHECK(crossing > 0.0);
  CHECK(crossing < 10.0);
  // warm cloud rises, and slows down
  CHECK(traj.samples.back().center.z > 1.7);
  CHECK(norm(traj.samples.back().velocity) < 1.0);
}

TEST_CASE("droplet counts only decrease") {
  const auto traj = simulate_cloud(cough(), Environment{}, 10.0, 0.01, CloudParams{});
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    CHECK(traj.samples[k].total_droplets <= traj.samples[k - 1].total_droplets);
    CHECK(traj.samples[k].viable_droplets <= traj.samples[k - 1].viable_droplets);
    CHECK(traj.samples[k].viable_droplets <= traj.samples[k].total_droplets);
    CHECK(traj.samples[k].total_droplets + traj.samples[k].settled_droplets ==
          doctest::Approx(traj.samples[k].initial_droplets));
  }
}

TEST_CASE("large droplets settle out first") {
  Environment env;
  EmissionEvent e;
  e.origin = {0, 0, 1.7};
  e.direction = {1, 0, 0};
  e.initial_speed = 1.0;
  e.diameters = {5e-6, 500e-6};
  const auto traj = simulate_cloud(e, env, 5.0, 0.01, CloudParams{});
  const auto& last = traj.samples.back();
  CHECK(last.total_droplets == 1.0);
  CHECK(last.settled_droplets == 1.0);
}

TEST_CASE("one RK4 step matches fine Euler from mid-flight") {
  const Environment env;
  const CloudParams params;
  const auto traj = simulate_cloud(cough(), env, 0.5, 0.01, params);
  const CloudState mid = traj.samples.back();
  const CloudState next = step_cloud(mid, env, params, 0.01);
  const auto ref = oracle::euler_cloud(oracle::from_state(mid), params.entrainment, env.gravity,
                                       env.temperature_ambient, 0.01, 1e-7);
  const auto got = oracle::fields(oracle::from_state(next));
  const auto want = oracle::fields(ref);
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-6));
}

TEST_CASE("integrator converges at fourth order") {
  const Environment env;
  const CloudParams params;
  const EmissionEvent e = cough();
  const auto start = oracle::from_state(initial_cloud(e, env, params));
  for (double dt : {0.01, 0.008}) {
    const auto ref = oracle::fields(
        oracle::euler_cloud(start, params.entrainment, env.gravity, env.temperature_ambient, 10.0, dt / 1000.0));
    const auto coarse = oracle::fields(oracle::from_state(simulate_cloud(e, env, 10.0, dt, params).samples.back()));
    const auto fine = oracle::fields(oracle::from_state(simulate_cloud(e, env, 10.0, dt / 2, params).samples.back()));
    for (std::size_t i : {0u, 2u, 3u, 5u, 6u, 7u}) {
      const double ratio = std::abs(coarse[i] - ref[i]) / std::abs(fine[i] - ref[i]);
      CAPTURE(dt);
      CAPTURE(i);
      CHECK(ratio >= 8.0);
    }
  }
}

TEST_CASE("trajectories are deterministic") {
  const auto a = simulate_cloud(cough(5), Environment{}, 10.0, 0.01, CloudParams{});
  const auto b = simulate_cloud(cough(5), Environment{}, 10.0, 0.01, CloudParams{});
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    CHECK(a.samples[k].center == b.samples[k].center);
    CHECK(a.samples[k].total_droplets == b.samples[k].total_droplets);
  }
}
