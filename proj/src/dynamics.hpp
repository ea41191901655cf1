#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string_view>

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "graph.hpp"

namespace relsim {

enum class Scheme { Euler, Cayley, Exact };

Scheme scheme_from_name(std::string_view name);
std::string_view scheme_name(Scheme scheme);

/// One particle's complex amplitude per spatial vertex, stamped with a tick
/// count (one tick = one discrete time unit).
struct WaveState {
  Eigen::VectorXcd amplitudes;
  std::int64_t tick = 0;

  double norm() const { return amplitudes.norm(); }
};

/// Graph Laplacian D = A - V where V is the diagonal valence (degree)
/// matrix. Symmetric, zero row sums, off-diagonal entries equal to the
/// adjacency.
class Laplacian {
public:
  explicit Laplacian(const RelationalGraph& g);

  std::int32_t size() const { return n_; }
  const Eigen::SparseMatrix<double>& sparse() const { return mat_; }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(mat_); }
  double operator()(std::int32_t x, std::int32_t y) const { return mat_.coeff(x, y); }

  /// Gershgorin bound on max |eigenvalue|: twice the max degree.
  double spectral_bound() const { return 2.0 * max_degree_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;

private:
  std::int32_t n_ = 0;
  std::int32_t max_degree_ = 0;
  Eigen::SparseMatrix<double> mat_;
};

/// Dense decompositions (Exact scheme, kernels, resistance solves) are
/// limited to this many vertices.
inline constexpr std::int32_t kDenseCap = 4096;

/// Explicit first-order step: psi(t+1) = (I + i*mu*D) psi(t). Matches the
/// discrete iteration verbatim; grows the norm on any non-constant state.
WaveState euler_step(const WaveState& psi, const Laplacian& lap, double mu);

/// Unitary rational step: psi(t+1) = (I - i*mu*D/2)^-1 (I + i*mu*D/2) psi(t).
WaveState cayley_step(const WaveState& psi, const Laplacian& lap, double mu);

/// Spectral reference integrator: psi(t+ticks) = exp(i*mu*ticks*D) psi(t).
WaveState exact_evolve(const WaveState& psi, const Laplacian& lap, double mu, std::int64_t ticks);

/// Precomputed propagator for repeated stepping with one scheme and
/// coupling. Euler caches the step operator, Cayley the sparse LU
/// factorization, Exact the eigendecomposition (dense, capped at kDenseCap).
class Stepper {
public:
  Stepper(const Laplacian& lap, Scheme scheme, double mu);

  WaveState step(const WaveState& psi) const;
  WaveState advance(WaveState psi, std::int64_t ticks) const;

  Scheme scheme() const { return scheme_; }
  double mu() const { return mu_; }
  std::int32_t size() const { return n_; }

private:
  void require_shape(const WaveState& psi) const;

  Scheme scheme_;
  double mu_;
  std::int32_t n_;
  Eigen::SparseMatrix<std::complex<double>> step_op_;    // Euler: I + i*mu*D
  Eigen::SparseMatrix<std::complex<double>> cayley_rhs_; // I + i*mu*D/2
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<std::complex<double>>>> cayley_lu_;
  Eigen::MatrixXd eigvecs_;
  Eigen::VectorXd eigvals_;
};

/// Propagator matrix K with psi(t) = K psi(0). Euler: (I + i*mu*D)^t,
/// Exact: exp(i*mu*t*D), Cayley: the Cayley step applied t times. Columns
/// act as propagators from the column vertex.
Eigen::MatrixXcd kernel_matrix(const RelationalGraph& g, double mu, std::int64_t t, Scheme scheme);

/// Walk-sum propagator entry, enumerated explicitly: every length-t walk
/// from y to x contributes the product of its step weights, where staying at
/// vertex v weighs (1 - i*mu*deg(v)) and each hop weighs i*mu. Equals the
/// Euler kernel entry. Guarded to t <= 12 and n <= 12.
std::complex<double> kernel_path_sum(const RelationalGraph& g, double mu, std::int32_t t,
                                     std::int32_t x, std::int32_t y);

/// All entries of the walk-sum propagator (one walk enumeration per start
/// vertex); same guard as kernel_path_sum.
Eigen::MatrixXcd kernel_path_sum_matrix(const RelationalGraph& g, double mu, std::int32_t t);

}  // namespace relsim
