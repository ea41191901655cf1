#include "graph.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <queue>
#include <sstream>

#include "error.hpp"

namespace relsim {

std::int64_t RelationalGraph::max_vertices() {
  if (const char* env = std::getenv("RELSIM_MAX_VERTICES")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::int64_t>(v);
  }
  return 1000000;
}

RelationalGraph RelationalGraph::from_edges(
    std::int64_t n_vertices, std::vector<std::pair<std::int32_t, std::int32_t>> edges) {
  if (n_vertices < 0) fail(ErrorCode::InvalidArgument, "negative vertex count");
  if (n_vertices > max_vertices())
    fail(ErrorCode::TooLarge, "vertex count " + std::to_string(n_vertices) +
                                  " exceeds cap " + std::to_string(max_vertices()));
  RelationalGraph g;
  g.adj_.resize(static_cast<std::size_t>(n_vertices));
  for (auto& [u, v] : edges) {
    if (u == v) fail(ErrorCode::SelfLoopRejected, "self-relation at vertex " + std::to_string(u));
    if (u < 0 || v < 0 || u >= n_vertices || v >= n_vertices)
      fail(ErrorCode::UnknownVertex, "edge endpoint out of range");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const auto& [u, v] : edges) {
    g.adj_[static_cast<std::size_t>(u)].push_back(v);
    g.adj_[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& nbrs : g.adj_) std::sort(nbrs.begin(), nbrs.end());
  g.n_edges_ = static_cast<std::int64_t>(edges.size());
  return g;
}

RelationalGraph RelationalGraph::lattice(const std::vector<std::int64_t>& dims, bool periodic) {
  if (dims.empty()) fail(ErrorCode::InvalidDimension, "empty extent list");
  std::int64_t total = 1;
  for (std::int64_t d : dims) {
    if (d < 1) fail(ErrorCode::InvalidDimension, "extent must be >= 1, got " + std::to_string(d));
    if (total > max_vertices() / d)
      fail(ErrorCode::TooLarge, "lattice exceeds vertex cap " + std::to_string(max_vertices()));
    total *= d;
  }
  const auto n_axes = dims.size();
  std::vector<std::int64_t> stride(n_axes, 1);
  for (std::size_t a = n_axes; a-- > 1;) stride[a - 1] = stride[a] * dims[a];

  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  std::vector<std::int64_t> coord(n_axes, 0);
  for (std::int64_t v = 0; v < total; ++v) {
    for (std::size_t a = 0; a < n_axes; ++a) {
      if (coord[a] + 1 < dims[a]) {
        edges.emplace_back(static_cast<std::int32_t>(v), static_cast<std::int32_t>(v + stride[a]));
      } else if (periodic && dims[a] > 1) {
        std::int64_t wrapped = v - coord[a] * stride[a];
        if (wrapped != v)
          edges.emplace_back(static_cast<std::int32_t>(std::min(v, wrapped)),
                             static_cast<std::int32_t>(std::max(v, wrapped)));
      }
    }
    for (std::size_t a = n_axes; a-- > 0;) {
      if (++coord[a] < dims[a]) break;
      coord[a] = 0;
    }
  }
  return from_edges(total, std::move(edges));
}

namespace {

bool parse_index(std::string_view token, std::int64_t& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && out >= 0;
}

}  // namespace

RelationalGraph RelationalGraph::from_edge_list(std::string_view text) {
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  std::int64_t max_index = -1;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
      if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    if (tokens.empty()) continue;
    if (tokens.size() != 2)
      fail(ErrorCode::ParseError,
           "line " + std::to_string(line_no) + ": expected two vertex indices");
    std::int64_t u = 0, v = 0;
    if (!parse_index(tokens[0], u) || !parse_index(tokens[1], v))
      fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": non-integer token");
    if (u == v)
      fail(ErrorCode::SelfLoopRejected,
           "line " + std::to_string(line_no) + ": self-relation at vertex " + std::to_string(u));
    if (u >= max_vertices() || v >= max_vertices())
      fail(ErrorCode::TooLarge, "line " + std::to_string(line_no) + ": index exceeds vertex cap");
    max_index = std::max({max_index, u, v});
    edges.emplace_back(static_cast<std::int32_t>(u), static_cast<std::int32_t>(v));
  }
  return from_edges(max_index + 1, std::move(edges));
}

std::string RelationalGraph::to_edge_list() const {
  std::ostringstream out;
  for (const auto& [u, v] : edges()) out << u << ' ' << v << '\n';
  return out.str();
}

std::int32_t RelationalGraph::degree(std::int32_t v) const {
  require_vertex(v);
  return static_cast<std::int32_t>(adj_[static_cast<std::size_t>(v)].size());
}

const std::vector<std::int32_t>& RelationalGraph::neighbors(std::int32_t v) const {
  require_vertex(v);
  return adj_[static_cast<std::size_t>(v)];
}

bool RelationalGraph::has_edge(std::int32_t u, std::int32_t v) const {
  require_vertex(u);
  require_vertex(v);
  const auto& nbrs = adj_[static_cast<std::size_t>(u)];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

bool RelationalGraph::is_connected() const {
  if (adj_.empty()) return true;
  std::vector<char> seen(adj_.size(), 0);
  std::queue<std::int32_t> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    std::int32_t v = frontier.front();
    frontier.pop();
    for (std::int32_t u : adj_[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        ++reached;
        frontier.push(u);
      }
    }
  }
  return reached == adj_.size();
}

std::vector<std::pair<std::int32_t, std::int32_t>> RelationalGraph::edges() const {
  std::vector<std::pair<std::int32_t, std::int32_t>> out;
  out.reserve(static_cast<std::size_t>(n_edges_));
  for (std::int32_t v = 0; v < vertex_count(); ++v)
    for (std::int32_t u : adj_[static_cast<std::size_t>(v)])
      if (v < u) out.emplace_back(v, u);
  return out;
}

void RelationalGraph::require_vertex(std::int32_t v) const {
  if (v < 0 || v >= vertex_count())
    fail(ErrorCode::UnknownVertex, "vertex " + std::to_string(v) + " out of range (n=" +
                                       std::to_string(vertex_count()) + ")");
}

}  // namespace relsim
