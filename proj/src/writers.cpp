#include "mohanet/writers.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "mohanet/errors.hpp"

namespace mohanet {

std::string format_number(double value) {
  if (!std::isfinite(value)) throw DomainError("non-finite value in output");
  if (value == 0.0) return "0";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_trajectory_csv(std::ostream& out, const CloudTrajectory& trajectory) {
  out << "t,x,y,z,vx,vy,vz,radius,dT,N,Nv\n";
  for (const auto& s : trajectory.samples) {
    out << format_number(s.time) << ',' << format_number(s.center.x) << ',' << format_number(s.center.y) << ','
        << format_number(s.center.z) << ',' << format_number(s.velocity.x) << ',' << format_number(s.velocity.y)
        << ',' << format_number(s.velocity.z) << ',' << format_number(s.radius) << ','
        << format_number(s.excess_temperature) << ',' << format_number(s.total_droplets) << ','
        << format_number(s.viable_droplets) << '\n';
  }
}

void write_dose_csv(std::ostream& out, const std::vector<DoseTimeline>& timelines,
                    const std::vector<double>& thresholds) {
  out << "t,receiver_id,increment,cumulative,infected_flag\n";
  for (std::size_t k = 0; k < timelines.size(); ++k) {
    const double threshold = k < thresholds.size() ? thresholds[k] : 0.0;
    for (const auto& s : timelines[k].samples) {
      out << format_number(s.t) << ',' << timelines[k].receiver_id << ',' << format_number(s.increment) << ','
          << format_number(s.cumulative) << ',' << detect_infection(s.cumulative, threshold) << '\n';
    }
  }
}

void write_field_csv(std::ostream& out, const std::vector<FieldPoint>& field) {
  out << "x,y,z,t,C\n";
  for (const auto& p : field) {
    out << format_number(p.x) << ',' << format_number(p.y) << ',' << format_number(p.z) << ',' << format_number(p.t)
        << ',' << format_number(p.c) << '\n';
  }
}

void write_timeseries_csv(std::ostream& out, const std::vector<Counts>& series) {
  out << "t,S,E,I,R\n";
  for (const auto& c : series) {
    out << format_number(c.t) << ',' << c.s << ',' << c.e << ',' << c.i << ',' << c.r << '\n';
  }
}

void write_snapshots_jsonl(std::ostream& out, const std::vector<Snapshot>& snapshots) {
  for (const auto& s : snapshots) {
    out << "{\"t\":" << format_number(s.t) << ",\"id\":" << s.id << ",\"x\":" << format_number(s.position.x)
        << ",\"y\":" << format_number(s.position.y) << ",\"state\":\"" << to_string(s.state) << "\"}\n";
  }
}

void write_curves_csv(std::ostream& out, const std::vector<CompartmentPoint>& curves) {
  out << "t,s,e,i,r\n";
  for (const auto& p : curves) {
    out << format_number(p.t) << ',' << format_number(p.s) << ',' << format_number(p.e) << ','
        << format_number(p.i) << ',' << format_number(p.r) << '\n';
  }
}

void write_kernel_csv(std::ostream& out, const DoseKernel& kernel) {
  out << "distance,dose\n";
  for (std::size_t i = 0; i < kernel.distances.size(); ++i) {
    out << format_number(kernel.distances[i]) << ',' << format_number(kernel.doses[i]) << '\n';
  }
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace mohanet
