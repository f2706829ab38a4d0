#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <span>
#include <vector>

#include "mohanet/mobility.hpp"

namespace mohanet {

struct Contact {
  std::uint32_t infectious_id = 0;
  std::uint32_t susceptible_id = 0;
  double distance = 0.0;
  bool operator==(const Contact&) const = default;
};

/// Uniform grid of buckets with cell size equal to the query range.
class ContactGrid {
 public:
  /// Indexes the nodes for which `include(node)` holds. range must be > 0.
  template <typename Pred>
  ContactGrid(std::span<const Node> nodes, double range, Pred include);
  ContactGrid(std::span<const Node> nodes, double range)
      : ContactGrid(nodes, range, [](const Node&) { return true; }) {}

  /// Indices into the node span within `range` of `p`, ascending.
  void query(const Vec2& p, std::vector<std::uint32_t>& out) const;

 private:
  std::int64_t cell_key(std::int64_t cx, std::int64_t cy) const { return cx * rows_ + cy; }
  std::int64_t cell_x(double x) const;
  std::int64_t cell_y(double y) const;

  std::span<const Node> nodes_;
  double range_;
  double min_x_ = 0.0;
  double min_y_ = 0.0;
  std::int64_t cols_ = 1;
  std::int64_t rows_ = 1;
  /// (cell key, node index) sorted by key.
  std::vector<std::pair<std::int64_t, std::uint32_t>> entries_;
};

template <typename Pred>
ContactGrid::ContactGrid(std::span<const Node> nodes, double range, Pred include) : nodes_(nodes), range_(range) {
  bool first = true;
  double max_x = 0.0;
  double max_y = 0.0;
  for (const Node& n : nodes) {
    if (!include(n)) continue;
    if (first) {
      min_x_ = max_x = n.position.x;
      min_y_ = max_y = n.position.y;
      first = false;
    }
    min_x_ = std::min(min_x_, n.position.x);
    min_y_ = std::min(min_y_, n.position.y);
    max_x = std::max(max_x, n.position.x);
    max_y = std::max(max_y, n.position.y);
  }
  cols_ = cell_x(max_x) + 1;
  rows_ = cell_y(max_y) + 1;
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    if (include(nodes[i])) entries_.emplace_back(cell_key(cell_x(nodes[i].position.x), cell_y(nodes[i].position.y)), i);
  }
  std::sort(entries_.begin(), entries_.end());
}

/// All I->S pairs with distance <= range, sorted by (infectious, susceptible).
/// One I with several partners is a multicast; one S with several I partners
/// is multiple access. range <= 0 yields nothing.
std::vector<Contact> find_contacts(std::span<const Node> nodes, double range);

/// O(N^2) reference scan.
std::vector<Contact> find_contacts_all_pairs(std::span<const Node> nodes, double range);

/// Linear interpolation in the kernel table; zero beyond the last knot.
double transmission_dose(double distance, const DoseKernel& kernel);

}  // namespace mohanet
