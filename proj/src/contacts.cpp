#include "mohanet/contacts.hpp"

#include <cmath>

namespace mohanet {

std::int64_t ContactGrid::cell_x(double x) const { return static_cast<std::int64_t>(std::floor((x - min_x_) / range_)); }
std::int64_t ContactGrid::cell_y(double y) const { return static_cast<std::int64_t>(std::floor((y - min_y_) / range_)); }

void ContactGrid::query(const Vec2& p, std::vector<std::uint32_t>& out) const {
  out.clear();
  const std::int64_t cx = cell_x(p.x);
  const std::int64_t cy = cell_y(p.y);
  for (std::int64_t ix = cx - 1; ix <= cx + 1; ++ix) {
    if (ix < 0 || ix >= cols_) continue;
    for (std::int64_t iy = cy - 1; iy <= cy + 1; ++iy) {
      if (iy < 0 || iy >= rows_) continue;
      const std::int64_t key = cell_key(ix, iy);
      auto lo = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(key, std::uint32_t{0}));
      for (; lo != entries_.end() && lo->first == key; ++lo) {
        if (distance(nodes_[lo->second].position, p) <= range_) out.push_back(lo->second);
      }
    }
  }
  std::sort(out.begin(), out.end());
}

namespace {

bool contact_less(const Contact& a, const Contact& b) {
  return a.infectious_id != b.infectious_id ? a.infectious_id < b.infectious_id : a.susceptible_id < b.susceptible_id;
}

}  // namespace

std::vector<Contact> find_contacts(std::span<const Node> nodes, double range) {
  std::vector<Contact> out;
  if (!(range > 0.0)) return out;
  const ContactGrid grid(nodes, range, [](const Node& n) { return n.state == EpiState::kS; });

  std::vector<std::uint32_t> infectious;
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].state == EpiState::kI) infectious.push_back(i);
  }
  std::vector<std::vector<Contact>> per_source(infectious.size());
#pragma omp parallel
  {
    std::vector<std::uint32_t> hits;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(infectious.size()); ++k) {
      const Node& src = nodes[infectious[static_cast<std::size_t>(k)]];
      grid.query(src.position, hits);
      auto& bucket = per_source[static_cast<std::size_t>(k)];
      for (std::uint32_t j : hits) bucket.push_back({src.id, nodes[j].id, distance(src.position, nodes[j].position)});
    }
  }
  for (auto& bucket : per_source) out.insert(out.end(), bucket.begin(), bucket.end());
  std::sort(out.begin(), out.end(), contact_less);
  return out;
}

std::vector<Contact> find_contacts_all_pairs(std::span<const Node> nodes, double range) {
  std::vector<Contact> out;
  if (!(range > 0.0)) return out;
  for (const Node& a : nodes) {
    if (a.state != EpiState::kI) continue;
    for (const Node& b : nodes) {
      if (b.state != EpiState::kS) continue;
      const double d = distance(a.position, b.position);
      if (d <= range) out.push_back({a.id, b.id, d});
    }
  }
  std::sort(out.begin(), out.end(), contact_less);
  return out;
}

double transmission_dose(double distance, const DoseKernel& kernel) {
  const auto& xs = kernel.distances;
  const auto& ys = kernel.doses;
  if (xs.empty() || distance > xs.back()) return 0.0;
  if (distance <= xs.front()) return ys.front();
  const auto upper = std::upper_bound(xs.begin(), xs.end(), distance);
  const auto i = static_cast<std::size_t>(upper - xs.begin());
  if (xs[i - 1] == distance) return ys[i - 1];
  const double w = (distance - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

}  // namespace mohanet
