#include "mohanet/mobility.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "mohanet/errors.hpp"

namespace mohanet {

const char* to_string(EpiState state) {
  switch (state) {
    case EpiState::kS:
      return "S";
    case EpiState::kE:
      return "E";
    case EpiState::kI:
      return "I";
    case EpiState::kR:
      return "R";
  }
  return "?";
}

void start_random_waypoint(Node& node, const MobilitySpec& spec, RngStream& rng) {
  node.waypoint = {rng.uniform(0.0, spec.region.width), rng.uniform(0.0, spec.region.height)};
  node.speed = rng.uniform(spec.speed_min, spec.speed_max);
  node.pause_remaining = 0.0;
}

void step_random_waypoint(Node& node, const MobilitySpec& spec, double dt, RngStream& rng) {
  if (node.pause_remaining > 0.0) {
    node.pause_remaining = std::max(0.0, node.pause_remaining - dt);
    return;
  }
  const Vec2 to_go = node.waypoint - node.position;
  const double remaining = norm(to_go);
  const double travel = node.speed * dt;
  if (travel < remaining) {
    node.position = node.position + to_go * (travel / remaining);
    return;
  }
  node.position = node.waypoint;
  node.pause_remaining = rng.uniform(0.0, spec.pause_max);
  node.waypoint = {rng.uniform(0.0, spec.region.width), rng.uniform(0.0, spec.region.height)};
  node.speed = rng.uniform(spec.speed_min, spec.speed_max);
}

MobilityTrace::MobilityTrace(std::map<std::uint32_t, std::vector<TraceRecord>> tracks) : tracks_(std::move(tracks)) {}

std::vector<std::uint32_t> MobilityTrace::node_ids() const {
  std::vector<std::uint32_t> ids;
  ids.reserve(tracks_.size());
  for (const auto& [id, _] : tracks_) ids.push_back(id);
  return ids;
}

Vec2 MobilityTrace::position(std::uint32_t node_id, double t) const {
  const auto it = tracks_.find(node_id);
  if (it == tracks_.end() || it->second.empty()) throw DomainError("node has no trace: " + std::to_string(node_id));
  const auto& track = it->second;
  if (t <= track.front().t) return track.front().position;
  if (t >= track.back().t) return track.back().position;
  const auto upper = std::upper_bound(track.begin(), track.end(), t,
                                      [](double value, const TraceRecord& r) { return value < r.t; });
  const TraceRecord& b = *upper;
  const TraceRecord& a = *(upper - 1);
  const double w = (t - a.t) / (b.t - a.t);
  return a.position + (b.position - a.position) * w;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_field(const std::string& text, std::size_t line, std::size_t column) {
  const std::string field = trim(text);
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw ParseError("malformed trace field '" + field + "'", line, column);
  }
  return value;
}

}  // namespace

MobilityTrace load_mobility_trace(std::istream& in, const Region& region) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::string header;
    for (char c : line) {
      if (c != ' ' && c != '\t' && c != '\r') header.push_back(c);
    }
    if (header != "t,node_id,x,y") throw ParseError("trace header must be 't,node_id,x,y'", line_no, 1);
    have_header = true;
    break;
  }
  if (!have_header) throw ParseError("no records");

  std::map<std::uint32_t, std::vector<TraceRecord>> tracks;
  std::size_t records = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::vector<std::size_t> columns;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      columns.push_back(start + 1);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4) throw ParseError("trace record needs 4 fields", line_no, 1);
    TraceRecord r;
    r.t = parse_field<double>(fields[0], line_no, columns[0]);
    r.node_id = parse_field<std::uint32_t>(fields[1], line_no, columns[1]);
    r.position = {parse_field<double>(fields[2], line_no, columns[2]),
                  parse_field<double>(fields[3], line_no, columns[3])};
    if (!region.contains(r.position)) throw ParseError("trace position outside region", line_no, columns[2]);
    auto& track = tracks[r.node_id];
    if (!track.empty() && !(r.t > track.back().t)) {
      throw ParseError("trace records of node " + std::to_string(r.node_id) + " are not time-sorted", line_no,
                       columns[0]);
    }
    track.push_back(r);
    ++records;
  }
  if (records == 0) throw ParseError("no records");
  return MobilityTrace(std::move(tracks));
}

MobilityTrace load_mobility_trace_file(const std::string& path, const Region& region) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trace file " + path);
  return load_mobility_trace(in, region);
}

}  // namespace mohanet
