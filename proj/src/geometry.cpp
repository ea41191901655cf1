#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include <Eigen/Dense>

#include "dynamics.hpp"
#include "error.hpp"

namespace relsim {

namespace {

std::int32_t bfs_distance(const std::vector<std::vector<std::int32_t>>& adj, std::int32_t x,
                          std::int32_t y) {
  if (x == y) return 0;
  std::vector<std::int32_t> dist(adj.size(), -1);
  std::queue<std::int32_t> frontier;
  dist[static_cast<std::size_t>(x)] = 0;
  frontier.push(x);
  while (!frontier.empty()) {
    std::int32_t v = frontier.front();
    frontier.pop();
    for (std::int32_t u : adj[static_cast<std::size_t>(v)]) {
      if (dist[static_cast<std::size_t>(u)] >= 0) continue;
      dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
      if (u == y) return dist[static_cast<std::size_t>(u)];
      frontier.push(u);
    }
  }
  fail(ErrorCode::Unreachable, "no path between " + std::to_string(x) + " and " + std::to_string(y));
}

std::vector<std::vector<std::int32_t>> adjacency_of(const RelationalGraph& g) {
  std::vector<std::vector<std::int32_t>> adj(static_cast<std::size_t>(g.vertex_count()));
  for (std::int32_t v = 0; v < g.vertex_count(); ++v) adj[static_cast<std::size_t>(v)] = g.neighbors(v);
  return adj;
}

// Effective resistance on the connected component containing x and y, from
// the grounded inverse (L + J/m)^-1 of the component's weighted Laplacian.
double effective_resistance(const std::vector<WeightedEdge>& edges, std::int32_t n,
                            std::int32_t x, std::int32_t y) {
  if (x == y) return 0.0;

  std::vector<std::vector<std::int32_t>> support(static_cast<std::size_t>(n));
  for (const auto& e : edges) {
    support[static_cast<std::size_t>(e.u)].push_back(e.v);
    support[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  std::vector<std::int32_t> component(static_cast<std::size_t>(n), -1);
  std::queue<std::int32_t> frontier;
  std::vector<std::int32_t> members;
  component[static_cast<std::size_t>(x)] = 0;
  members.push_back(x);
  frontier.push(x);
  while (!frontier.empty()) {
    std::int32_t v = frontier.front();
    frontier.pop();
    for (std::int32_t u : support[static_cast<std::size_t>(v)]) {
      if (component[static_cast<std::size_t>(u)] >= 0) continue;
      component[static_cast<std::size_t>(u)] = static_cast<std::int32_t>(members.size());
      members.push_back(u);
      frontier.push(u);
    }
  }
  if (component[static_cast<std::size_t>(y)] < 0)
    fail(ErrorCode::Unreachable,
         "no path between " + std::to_string(x) + " and " + std::to_string(y));

  const auto m = static_cast<std::int32_t>(members.size());
  if (m > kDenseCap)
    fail(ErrorCode::TooLarge, "resistance solve is dense; component size " + std::to_string(m) +
                                  " exceeds cap " + std::to_string(kDenseCap));

  Eigen::MatrixXd lap = Eigen::MatrixXd::Constant(m, m, 1.0 / static_cast<double>(m));
  for (const auto& e : edges) {
    std::int32_t lu = component[static_cast<std::size_t>(e.u)];
    std::int32_t lv = component[static_cast<std::size_t>(e.v)];
    if (lu < 0 || lv < 0) continue;
    lap(lu, lu) += e.conductance;
    lap(lv, lv) += e.conductance;
    lap(lu, lv) -= e.conductance;
    lap(lv, lu) -= e.conductance;
  }

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs(component[static_cast<std::size_t>(x)]) = 1.0;
  rhs(component[static_cast<std::size_t>(y)]) = -1.0;
  Eigen::LDLT<Eigen::MatrixXd> solver(lap);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::SolverError, "resistance solve failed");
  return rhs.dot(solver.solve(rhs));
}

std::vector<WeightedEdge> unit_edges(const RelationalGraph& g) {
  std::vector<WeightedEdge> edges;
  edges.reserve(static_cast<std::size_t>(g.edge_count()));
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v, 1.0});
  return edges;
}

}  // namespace

std::int32_t shortest_path_distance(const RelationalGraph& g, std::int32_t x, std::int32_t y) {
  g.require_vertex(x);
  g.require_vertex(y);
  return bfs_distance(adjacency_of(g), x, y);
}

double resistance_distance(const RelationalGraph& g, std::int32_t x, std::int32_t y,
                           const std::vector<WeightedEdge>& conductance_overrides) {
  g.require_vertex(x);
  g.require_vertex(y);
  std::vector<WeightedEdge> edges = unit_edges(g);
  for (const auto& o : conductance_overrides) {
    if (!(o.conductance > 0.0) || !std::isfinite(o.conductance))
      fail(ErrorCode::InvalidArgument, "conductance must be finite and > 0");
    if (!g.has_edge(o.u, o.v))
      fail(ErrorCode::UnknownVertex, "conductance override addresses a missing relation");
    for (auto& e : edges)
      if ((e.u == std::min(o.u, o.v)) && (e.v == std::max(o.u, o.v))) e.conductance = o.conductance;
  }
  return effective_resistance(edges, g.vertex_count(), x, y);
}

ShortcutReport shortcut_impact(const RelationalGraph& g, std::int32_t x, std::int32_t y,
                               std::int32_t u, std::int32_t v, double w, bool two_hop) {
  g.require_vertex(u);
  g.require_vertex(v);
  if (u == v) fail(ErrorCode::SelfLoopRejected, "chord endpoints coincide");
  if (!(w >= 0.0) || !std::isfinite(w))
    fail(ErrorCode::InvalidArgument, "chord conductance must be finite and >= 0");

  ShortcutReport report;
  report.hops_before = shortest_path_distance(g, x, y);
  report.resistance_before = resistance_distance(g, x, y);

  if (w == 0.0) {
    report.hops_after = report.hops_before;
    report.resistance_after = report.resistance_before;
    report.rel_change = 0.0;
    return report;
  }

  auto adj = adjacency_of(g);
  adj[static_cast<std::size_t>(u)].push_back(v);
  adj[static_cast<std::size_t>(v)].push_back(u);
  report.hops_after = bfs_distance(adj, x, y);

  std::vector<WeightedEdge> edges = unit_edges(g);
  edges.push_back({std::min(u, v), std::max(u, v), two_hop ? w / 2.0 : w});
  report.resistance_after = effective_resistance(edges, g.vertex_count(), x, y);
  report.rel_change =
      report.resistance_before > 0.0
          ? (report.resistance_before - report.resistance_after) / report.resistance_before
          : 0.0;
  return report;
}

}  // namespace relsim
