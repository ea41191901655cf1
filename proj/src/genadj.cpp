#include "genadj.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "error.hpp"

namespace relsim {

GeneralizedAdjacency::GeneralizedAdjacency(RelationalGraph graph)
    : graph_(std::move(graph)),
      wave_(0, graph_.vertex_count()),
      entangle_(0, 0) {}

void GeneralizedAdjacency::attach_particle(
    const std::map<std::int32_t, std::complex<double>>& amplitudes, bool normalize) {
  Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(spatial_count());
  for (const auto& [v, amp] : amplitudes) {
    graph_.require_vertex(v);
    if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag()))
      fail(ErrorCode::InvalidArgument, "non-finite amplitude at vertex " + std::to_string(v));
    row(v) = amp;
  }
  if (normalize) {
    double n = row.norm();
    if (n > 0.0) row /= n;
  }
  const std::int32_t k = object_count();
  wave_.conservativeResize(k + 1, spatial_count());
  wave_.row(k) = row;
  Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(k + 1, k + 1);
  grown.topLeftCorner(k, k) = entangle_;
  entangle_ = std::move(grown);
}

void GeneralizedAdjacency::add_entanglement(std::int32_t e1, std::int32_t e2, double strength) {
  if (e1 == e2) fail(ErrorCode::InvalidArgument, "entanglement relation needs two distinct objects");
  if (e1 < 0 || e2 < 0 || e1 >= object_count() || e2 >= object_count())
    fail(ErrorCode::UnknownVertex, "quantum object index out of range");
  if (!(strength >= 0.0 && strength <= 1.0))
    fail(ErrorCode::InvalidStrength, "strength must lie in [0,1], got " + std::to_string(strength));
  entangle_(e1, e2) = strength;
  entangle_(e2, e1) = strength;
}

Eigen::MatrixXcd GeneralizedAdjacency::assemble() const {
  const std::int32_t k = object_count();
  const std::int32_t n = spatial_count();
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(k + n, k + n);
  full.topLeftCorner(k, k) = entangle_.cast<std::complex<double>>();
  full.topRightCorner(k, n) = wave_;
  full.bottomLeftCorner(n, k) = wave_.adjoint();
  for (std::int32_t v = 0; v < n; ++v)
    for (std::int32_t u : graph_.neighbors(v)) full(k + v, k + u) = 1.0;
  return full;
}

namespace {

// 1e-12 grid; -0 normalizes to +0 so equal values share one bit pattern.
double quantize(double v) {
  double q = std::round(v * 1e12) / 1e12;
  return q == 0.0 ? 0.0 : q;
}

void push_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void push_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void push_f64(std::vector<std::uint8_t>& out, double v) {
  push_u64(out, std::bit_cast<std::uint64_t>(quantize(v)));
}

}  // namespace

std::vector<std::uint8_t> GeneralizedAdjacency::canonical_form() const {
  const std::int32_t k = object_count();
  if (k > 8)
    fail(ErrorCode::TooLargeForEnumeration,
         "canonical form enumerates object labelings; max 8 objects, got " + std::to_string(k));

  auto encode = [&](const std::vector<std::int32_t>& perm) {
    std::vector<std::uint8_t> out;
    const char magic[8] = {'R', 'E', 'L', 'A', 'D', 'J', '0', '1'};
    out.insert(out.end(), magic, magic + 8);
    push_u32(out, static_cast<std::uint32_t>(k));
    push_u32(out, static_cast<std::uint32_t>(spatial_count()));

    const auto spatial_edges = graph_.edges();
    push_u64(out, spatial_edges.size());
    for (const auto& [u, v] : spatial_edges) {
      push_u32(out, static_cast<std::uint32_t>(u));
      push_u32(out, static_cast<std::uint32_t>(v));
    }

    std::vector<std::tuple<std::int32_t, std::int32_t, double>> ent;
    for (std::int32_t r = 0; r < k; ++r)
      for (std::int32_t s = r + 1; s < k; ++s)
        if (double w = entangle_(perm[r], perm[s]); quantize(w) != 0.0) ent.emplace_back(r, s, w);
    push_u64(out, ent.size());
    for (const auto& [r, s, w] : ent) {
      push_u32(out, static_cast<std::uint32_t>(r));
      push_u32(out, static_cast<std::uint32_t>(s));
      push_f64(out, w);
    }

    for (std::int32_t r = 0; r < k; ++r)
      for (std::int32_t x = 0; x < spatial_count(); ++x) {
        push_f64(out, wave_(perm[r], x).real());
        push_f64(out, wave_(perm[r], x).imag());
      }
    return out;
  };

  std::vector<std::int32_t> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::uint8_t> best = encode(perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::vector<std::uint8_t> candidate = encode(perm);
    if (candidate < best) best = std::move(candidate);
  }
  return best;
}

GeneralizedAdjacency attach_particle(
    const RelationalGraph& g, const std::map<std::int32_t, std::complex<double>>& amplitudes,
    bool normalize) {
  GeneralizedAdjacency ga(g);
  ga.attach_particle(amplitudes, normalize);
  return ga;
}

}  // namespace relsim
