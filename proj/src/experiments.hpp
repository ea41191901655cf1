#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "dynamics.hpp"
#include "entangle.hpp"
#include "geometry.hpp"
#include "graph.hpp"

namespace relsim {

// ---------------------------------------------------------------------------
// Ring dispersion
// ---------------------------------------------------------------------------

struct DispersionConfig {
  std::int32_t n = 64;    // ring size, >= 8
  std::int32_t mode = 2;  // plane-wave mode index, 0 <= mode < n
  double mu = 0.2;
  std::int32_t ticks = 64;
  Scheme scheme = Scheme::Exact;
};

struct DispersionResult {
  double k = 0.0;  // wavenumber 2*pi*mode/n
  std::vector<std::complex<double>> overlaps;  // per tick, vs the initial state
  std::vector<double> phases;                  // unwrapped arg of the overlap
  std::vector<double> norms;
  double fitted_phase_per_tick = 0.0;    // least-squares slope of the phase
  double lattice_phase_per_tick = 0.0;   // -mu*(2 - 2 cos k)
  double lattice_deviation = 0.0;        // |fitted - lattice|
  double continuum_phase_per_tick = 0.0; // -mu*k^2
  double continuum_rel_deviation = 0.0;  // relative to the continuum value
  double norm_growth = 0.0;              // final norm - 1
};

/// Evolves the plane-wave mode on the n-ring and fits the per-tick overlap
/// phase against the lattice and continuum dispersion laws.
DispersionResult run_dispersion(const DispersionConfig& config);

void write_dispersion(const DispersionConfig& config, const DispersionResult& result,
                      const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------
// Double slit
// ---------------------------------------------------------------------------

struct DoubleSlitConfig {
  std::int32_t nx = 61;
  std::int32_t ny = 41;
  std::int32_t barrier_x = 20;
  std::int32_t slit_y1 = 14;
  std::int32_t slit_y2 = 26;
  std::int32_t source_x = 5;
  std::int32_t source_y = 20;
  double source_sigma = 3.0;
  double source_kx = 1.5707963267948966;  // carrier momentum toward the barrier
  double mu = 0.2;
  std::int32_t ticks = 120;
  std::int32_t screen_x = 55;
  double min_peak_fraction = 0.01;  // maxima below this fraction of the peak do not count

  /// Validates ranges and slit placement; throws InvalidGeometry.
  void validate() const;
  std::string canonical_text() const;
};

DoubleSlitConfig double_slit_config_from_text(std::string_view kv_text);

struct DoubleSlitResult {
  Eigen::VectorXd intensity_both;   // |psi|^2 along the screen column
  Eigen::VectorXd intensity_slit1;  // slit 2 filled
  Eigen::VectorXd intensity_slit2;  // slit 1 filled
  Eigen::VectorXd residual;         // both - slit1 - slit2
  std::int32_t local_maxima = 0;
  double peak = 0.0;
  double max_abs_residual = 0.0;
  double residual_over_peak = 0.0;
  double symmetry_error = 0.0;  // max |I(y) - I(ny-1-y)| of the both-slit profile
};

/// Gaussian packet against a two-slit barrier on an open lattice, evolved
/// with the Cayley stepper; reference single-slit runs reuse the identical
/// geometry with one slit filled.
DoubleSlitResult run_double_slit(const DoubleSlitConfig& config);

void write_double_slit(const DoubleSlitConfig& config, const DoubleSlitResult& result,
                       const std::filesystem::path& out_dir);

/// Lattice with the barrier column closed except at the open slit rows.
RelationalGraph double_slit_graph(const DoubleSlitConfig& config,
                                  const std::vector<std::int32_t>& open_slits);

// ---------------------------------------------------------------------------
// EPR measurement scenario
// ---------------------------------------------------------------------------

struct EprMeasureRow {
  std::int64_t tick;
  std::int32_t a, b;
  double mutual_information;
  double negativity;
};

struct EprResult {
  std::vector<EprMeasureRow> measures;  // all pairs at ticks 0, 1, 2
  RelationEventLog log;
  Outcome outcome;
  PureState premeasurement;  // tick-1 state, before collapse
  PureState final_state;
};

/// Singlet + apparatus pipeline: premeasurement coupling at tick 1, collapse
/// at tick 2, with pairwise measures and the relation event log recorded at
/// every step. The locality check is enforced before returning.
EprResult run_epr_scenario(std::uint64_t seed, double eps = kDefaultRelationEps);

void write_epr(std::uint64_t seed, double eps, const EprResult& result,
               const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------
// Shortcut scan
// ---------------------------------------------------------------------------

struct ShortcutScanRow {
  double w;
  ShortcutReport report;
};

/// Distance impact of one chord across the antipodal pair of the n-ring,
/// evaluated at each conductance in w_list.
std::vector<ShortcutScanRow> run_shortcut(std::int32_t n, const std::vector<double>& w_list);

void write_shortcut(std::int32_t n, const std::vector<ShortcutScanRow>& rows,
                    const std::filesystem::path& out_dir);

}  // namespace relsim
