#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Core>

#include "graph.hpp"

namespace relsim {

/// Hermitian block join of quantum objects and spatial points: an
/// object-object entanglement block (real, symmetric, entries in [0,1], zero
/// diagonal), an object-point wave block (complex amplitudes), and the fixed
/// point-point spatial block taken from the graph. The assembled matrix
/// orders objects first, then spatial points, and equals its own conjugate
/// transpose by construction.
class GeneralizedAdjacency {
public:
  explicit GeneralizedAdjacency(RelationalGraph graph);

  /// Appends one quantum object. Keys address spatial vertices; unspecified
  /// vertices get amplitude zero. The row is L2-normalized when normalize
  /// is set (skipped for an all-zero row).
  void attach_particle(const std::map<std::int32_t, std::complex<double>>& amplitudes,
                       bool normalize = true);

  /// Sets the symmetric entanglement entry for a pair of objects.
  /// strength 0 means no relation; last write wins.
  void add_entanglement(std::int32_t e1, std::int32_t e2, double strength);

  std::int32_t object_count() const { return static_cast<std::int32_t>(wave_.rows()); }
  std::int32_t spatial_count() const { return graph_.vertex_count(); }
  const RelationalGraph& graph() const { return graph_; }
  const Eigen::MatrixXcd& wave_block() const { return wave_; }
  const Eigen::MatrixXd& entangle_block() const { return entangle_; }

  /// Full (objects + points) square matrix.
  Eigen::MatrixXcd assemble() const;

  /// Canonical byte encoding ("RELADJ01" header, little-endian layout,
  /// amplitudes quantized to a 1e-12 grid). Two values that differ only by a
  /// relabeling of quantum objects encode identically; spatial labels are
  /// fixed. Object count is capped at 8 (label enumeration).
  std::vector<std::uint8_t> canonical_form() const;

private:
  RelationalGraph graph_;
  Eigen::MatrixXcd wave_;      // rows: objects, cols: spatial vertices
  Eigen::MatrixXd entangle_;   // objects x objects
};

/// Single-particle convenience: builds the block structure over g and
/// attaches one object.
GeneralizedAdjacency attach_particle(
    const RelationalGraph& g, const std::map<std::int32_t, std::complex<double>>& amplitudes,
    bool normalize = true);

}  // namespace relsim
