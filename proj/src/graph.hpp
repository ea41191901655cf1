#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace relsim {

/// Spatial points and their 0/1 symmetric relations. Vertex indices are
/// dense 0..n-1; the relation set is immutable after construction, so values
/// can be shared read-only across threads.
class RelationalGraph {
public:
  RelationalGraph() = default;

  /// Nearest-neighbor lattice over the given extents (row-major indexing,
  /// first extent slowest). periodic wraps every axis.
  static RelationalGraph lattice(const std::vector<std::int64_t>& dims, bool periodic);

  /// Parses "u v" pairs, one per line. '#' starts a comment, blank lines are
  /// skipped, duplicate edges collapse. Vertex count is max index + 1.
  static RelationalGraph from_edge_list(std::string_view text);

  /// Explicit edge set over n vertices. Self-loops are rejected, duplicates
  /// collapse.
  static RelationalGraph from_edges(std::int64_t n_vertices,
                                    std::vector<std::pair<std::int32_t, std::int32_t>> edges);

  /// One "u v" line per edge (u < v, sorted), LF newlines.
  std::string to_edge_list() const;

  std::int32_t vertex_count() const { return static_cast<std::int32_t>(adj_.size()); }
  std::int64_t edge_count() const { return n_edges_; }
  std::int32_t degree(std::int32_t v) const;
  const std::vector<std::int32_t>& neighbors(std::int32_t v) const;
  bool has_edge(std::int32_t u, std::int32_t v) const;
  bool is_connected() const;

  /// Sorted (u, v) pairs with u < v.
  std::vector<std::pair<std::int32_t, std::int32_t>> edges() const;

  /// Throws UnknownVertex if v is out of range.
  void require_vertex(std::int32_t v) const;

  /// Vertex-count cap; RELSIM_MAX_VERTICES overrides the default of 10^6.
  static std::int64_t max_vertices();

private:
  std::vector<std::vector<std::int32_t>> adj_;  // sorted neighbor lists
  std::int64_t n_edges_ = 0;
};

}  // namespace relsim
