#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <vector>

#include "mohanet/rng.hpp"
#include "mohanet/scenario.hpp"

namespace mohanet {

enum class EpiState : std::uint8_t { kS, kE, kI, kR };
const char* to_string(EpiState state);

/// Network agent.
struct Node {
  std::uint32_t id = 0;
  Vec2 position{};
  Vec2 waypoint{};
  double speed = 0.0;
  double pause_remaining = 0.0;
  EpiState state = EpiState::kS;
  double cumulative_dose = 0.0;
  double threshold = 80.0;
  /// Whole steps spent in the current state.
  std::int64_t state_steps = 0;
  /// Sojourn time of the current state (E, I, R).
  double state_duration = 0.0;
  double next_emission = 0.0;
  bool ever_infected = false;
};

/// Random waypoint motion for one step of length dt.
void step_random_waypoint(Node& node, const MobilitySpec& spec, double dt, RngStream& rng);

/// Draws the first waypoint leg (position is kept).
void start_random_waypoint(Node& node, const MobilitySpec& spec, RngStream& rng);

struct TraceRecord {
  double t = 0.0;
  std::uint32_t node_id = 0;
  Vec2 position{};
};

/// Piecewise-linear position traces keyed by node id.
class MobilityTrace {
 public:
  MobilityTrace() = default;
  explicit MobilityTrace(std::map<std::uint32_t, std::vector<TraceRecord>> tracks);

  Vec2 position(std::uint32_t node_id, double t) const;
  std::size_t node_count() const { return tracks_.size(); }
  std::vector<std::uint32_t> node_ids() const;
  bool empty() const { return tracks_.empty(); }

 private:
  std::map<std::uint32_t, std::vector<TraceRecord>> tracks_;
};

/// Reads CSV `t,node_id,x,y` with a header line. Throws ParseError with the
/// offending line for malformed, unsorted or out-of-region records.
MobilityTrace load_mobility_trace(std::istream& in, const Region& region);
MobilityTrace load_mobility_trace_file(const std::string& path, const Region& region);

}  // namespace mohanet
