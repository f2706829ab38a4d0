#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "mohanet/cli.hpp"
#include "mohanet/errors.hpp"
#include "mohanet/rng.hpp"
#include "mohanet/scenario.hpp"
#include "mohanet/scenario_io.hpp"

using namespace mohanet;

namespace {

bool has_violation(const ValidationReport& report, const std::string& field) {
  return std::any_of(report.begin(), report.end(), [&](const Violation& v) { return v.field == field; });
}

}  // namespace

TEST_CASE("derived seeds are distinct per tag and id") {
  std::set<std::uint64_t> seen;
  for (auto tag : {StreamTag::kEmission, StreamTag::kMobility, StreamTag::kEpidemic, StreamTag::kPlacement}) {
    for (std::uint64_t id = 0; id < 1000; ++id) seen.insert(derive_seed(7, tag, id));
  }
  CHECK(seen.size() == 4000);
  CHECK(derive_seed(7, StreamTag::kMobility, 3) == derive_seed(7, StreamTag::kMobility, 3));
  CHECK(derive_seed(7, StreamTag::kMobility, 3) != derive_seed(8, StreamTag::kMobility, 3));
}

TEST_CASE("rng streams reproduce and have the right moments") {
  RngStream a(11, StreamTag::kEpidemic, 2);
  RngStream b(11, StreamTag::kEpidemic, 2);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

  RngStream r(5);
  const int n = 200000;
  double u = 0.0, e = 0.0, z = 0.0, z2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = r.uniform();
    CHECK_FALSE((x < 0.0 || x >= 1.0));
    u += x;
    e += r.exponential(3.0);
    const double g = r.normal();
    z += g;
    z2 += g * g;
  }
  CHECK(u / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(e / n == doctest::Approx(3.0).epsilon(0.02));
  CHECK(std::abs(z / n) < 0.01);
  CHECK(z2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("duration strings") {
  CHECK(parse_duration("15") == 15.0);
  CHECK(parse_duration("15s") == 15.0);
  CHECK(parse_duration("2.5m") == 150.0);
  CHECK(parse_duration("2h") == 7200.0);
  CHECK(parse_duration("100d") == 8640000.0);
  CHECK(parse_duration("-1") == -1.0);
  CHECK_THROWS(parse_duration("ten"));
  CHECK_THROWS(parse_duration(""));
}

TEST_CASE("default configuration is valid") {
  const ScenarioConfig config;
  CHECK(validate_scenario(config).empty());
  CHECK(config.environment.temperature_ambient == doctest::Approx(293.15));
  CHECK(config.receivers.front().threshold == 80.0);
}

TEST_CASE("validation reports every violation") {
  ScenarioConfig config;
  config.dt = -1.0;
  config.duration = 0.0;
  config.receivers.front().threshold = -5.0;
  const auto report = validate_scenario(config);
  CHECK(has_violation(report, "dt"));
  CHECK(has_violation(report, "duration"));
  CHECK(report.size() >= 3);
}

TEST_CASE("plume needs wind") {
  ScenarioConfig config;
  config.channel = Channel::kPlume;
  const auto report = validate_scenario(config);
  REQUIRE_FALSE(report.empty());
  CHECK(std::any_of(report.begin(), report.end(), [](const Violation& v) {
    return v.message.find("plume undefined in still air") != std::string::npos;
  }));
  config.environment.wind_velocity = {1.0, 0.0, 0.0};
  // a single cough is not a steady source
  CHECK_FALSE(validate_scenario(config).empty());
  config.emissions.front().repeat_period = 10.0;
  CHECK(validate_scenario(config).empty());
}

TEST_CASE("kernel must vanish at the contact range") {
  ScenarioConfig config;
  config.epidemic.dose_kernel = {{0.0, 1.0, 2.0}, {300.0, 200.0, 50.0}};
  CHECK_FALSE(validate_scenario(config).empty());
}

TEST_CASE("scenario text parsing") {
  const auto config = parse_scenario_text(R"(
name: tiny
channel: puff
duration: 2m
dt: 0.5
seed: 9
environment:
  temperature_ambient_c: 25
  wind_velocity: [2, 0, 0]
receivers:
  - id: a
    center: [3, 0, 1.5]
)");
  CHECK(config.name == "tiny");
  CHECK(config.channel == Channel::kPuff);
  CHECK(config.duration == 120.0);
  CHECK(config.seed == 9);
  CHECK(config.environment.temperature_ambient == doctest::Approx(298.15));
  CHECK(config.environment.wind_velocity.x == 2.0);
  REQUIRE(config.receivers.size() == 1);
  CHECK(config.receivers[0].threshold == 80.0);
  CHECK(config.receivers[0].center.z == 1.5);
}

TEST_CASE("unknown keys name the key and its position") {
  try {
    parse_scenario_text("name: x\nreceivers:\n  - id: a\n    thresold: 80\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("unknown key 'thresold'") != std::string::npos);
    CHECK(e.line() == 4);
    CHECK(e.column() == 5);
  }
}

TEST_CASE("malformed syntax reports a line") {
  try {
    parse_scenario_text("name: [unclosed\n dt: 1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() > 0);
  }
}

TEST_CASE("shipped scenarios") {
  const std::string dir = MOHANET_SCENARIO_DIR;
  const auto cough = parse_scenario(dir + "/demo_cough.scenario");
  CHECK(cough.channel == Channel::kCloud);
  CHECK(parse_scenario(dir + "/demo_puff.scenario").channel == Channel::kPuff);
  CHECK(parse_scenario(dir + "/demo_city.scenario").epidemic.node_count == 2000);
  try {
    parse_scenario(dir + "/broken.scenario");
    FAIL("broken scenario must not validate");
  } catch (const ValidationError& e) {
    CHECK(has_violation(e.report(), "dt"));
  }
  CHECK_THROWS_AS(parse_scenario(dir + "/misspelled.scenario"), ParseError);
}

TEST_CASE("summary echo contains defaults") {
  const auto json = scenario_to_json(ScenarioConfig{});
  CHECK(json["dt"].get<double>() == 0.01);
  CHECK(json["cloud"]["entrainment"].get<double>() == 0.1);
  CHECK(json["epidemic"]["dose_half_life"].get<std::string>() == "inf");
}
