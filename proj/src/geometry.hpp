#pragma once

#include <cstdint>
#include <vector>

#include "graph.hpp"

namespace relsim {

/// BFS hop count between two spatial vertices; 0 iff x == y. Throws
/// Unreachable for a disconnected pair.
std::int32_t shortest_path_distance(const RelationalGraph& g, std::int32_t x, std::int32_t y);

struct WeightedEdge {
  std::int32_t u = 0;
  std::int32_t v = 0;
  double conductance = 1.0;
};

/// Effective resistance between x and y with unit conductance per relation,
/// optionally overridden per edge. The all-paths average distance: symmetric,
/// obeys the triangle inequality, and never exceeds the hop count on unit
/// conductances.
double resistance_distance(const RelationalGraph& g, std::int32_t x, std::int32_t y,
                           const std::vector<WeightedEdge>& conductance_overrides = {});

struct ShortcutReport {
  std::int32_t hops_before = 0;
  std::int32_t hops_after = 0;
  double resistance_before = 0.0;
  double resistance_after = 0.0;
  double rel_change = 0.0;  // fractional drop of the resistance distance
};

/// Adds one chord (u, v) at conductance w and reports both distances for the
/// pair (x, y) before and after. w = 0 leaves the graph unchanged. two_hop
/// models the chord as two relation edges in series (conductance w/2).
ShortcutReport shortcut_impact(const RelationalGraph& g, std::int32_t x, std::int32_t y,
                               std::int32_t u, std::int32_t v, double w, bool two_hop = false);

}  // namespace relsim
