#include "dynamics.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"

namespace relsim {

namespace {

using Complex = std::complex<double>;
constexpr Complex kImag(0.0, 1.0);

void require_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu))
    fail(ErrorCode::InvalidArgument, "mu must be finite and > 0");
}

void require_ticks(std::int64_t t) {
  if (t < 0) fail(ErrorCode::InvalidArgument, "tick count must be >= 0");
}

void warn_euler_stability(const Laplacian& lap, double mu) {
  static std::atomic<bool> warned{false};
  if (mu * lap.spectral_bound() > 0.5 && !warned.exchange(true))
    std::fprintf(stderr,
                 "relsim: warning: Euler scheme with mu*|eig| bound %.3g > 0.5 inflates norms "
                 "noticeably per tick\n",
                 mu * lap.spectral_bound());
}

Eigen::SparseMatrix<Complex> identity_plus(const Eigen::SparseMatrix<double>& lap, Complex factor) {
  Eigen::SparseMatrix<Complex> m = (factor * lap.cast<Complex>()).pruned();
  Eigen::SparseMatrix<Complex> eye(lap.rows(), lap.cols());
  eye.setIdentity();
  return (eye + m).pruned();
}

}  // namespace

Scheme scheme_from_name(std::string_view name) {
  if (name == "euler") return Scheme::Euler;
  if (name == "cayley") return Scheme::Cayley;
  if (name == "exact") return Scheme::Exact;
  fail(ErrorCode::InvalidArgument, "unknown scheme '" + std::string(name) + "'");
}

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Euler: return "euler";
    case Scheme::Cayley: return "cayley";
    case Scheme::Exact: return "exact";
  }
  return "?";
}

Laplacian::Laplacian(const RelationalGraph& g) : n_(g.vertex_count()), mat_(n_, n_) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(2 * g.edge_count() + n_));
  for (std::int32_t v = 0; v < n_; ++v) {
    const auto& nbrs = g.neighbors(v);
    max_degree_ = std::max<std::int32_t>(max_degree_, static_cast<std::int32_t>(nbrs.size()));
    if (!nbrs.empty())
      triplets.emplace_back(v, v, -static_cast<double>(nbrs.size()));
    for (std::int32_t u : nbrs) triplets.emplace_back(v, u, 1.0);
  }
  mat_.setFromTriplets(triplets.begin(), triplets.end());
  mat_.makeCompressed();
}

Eigen::VectorXcd Laplacian::apply(const Eigen::VectorXcd& v) const {
  if (v.size() != n_) fail(ErrorCode::ShapeError, "state length does not match Laplacian size");
  return mat_.cast<Complex>() * v;
}

WaveState euler_step(const WaveState& psi, const Laplacian& lap, double mu) {
  require_mu(mu);
  if (psi.amplitudes.size() != lap.size())
    fail(ErrorCode::ShapeError, "state length does not match Laplacian size");
  return {psi.amplitudes + kImag * mu * lap.apply(psi.amplitudes), psi.tick + 1};
}

WaveState cayley_step(const WaveState& psi, const Laplacian& lap, double mu) {
  Stepper stepper(lap, Scheme::Cayley, mu);
  return stepper.step(psi);
}

WaveState exact_evolve(const WaveState& psi, const Laplacian& lap, double mu, std::int64_t ticks) {
  Stepper stepper(lap, Scheme::Exact, mu);
  return stepper.advance(psi, ticks);
}

Stepper::Stepper(const Laplacian& lap, Scheme scheme, double mu)
    : scheme_(scheme), mu_(mu), n_(lap.size()) {
  require_mu(mu);
  switch (scheme_) {
    case Scheme::Euler:
      warn_euler_stability(lap, mu);
      step_op_ = identity_plus(lap.sparse(), kImag * mu);
      break;
    case Scheme::Cayley: {
      cayley_rhs_ = identity_plus(lap.sparse(), kImag * (mu / 2.0));
      Eigen::SparseMatrix<Complex> lhs = identity_plus(lap.sparse(), -kImag * (mu / 2.0));
      cayley_lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<Complex>>>();
      cayley_lu_->compute(lhs);
      if (cayley_lu_->info() != Eigen::Success)
        fail(ErrorCode::SolverError, "Cayley factorization failed");
      break;
    }
    case Scheme::Exact: {
      if (n_ > kDenseCap)
        fail(ErrorCode::TooLarge, "exact scheme needs dense decomposition; size " +
                                      std::to_string(n_) + " exceeds cap " +
                                      std::to_string(kDenseCap));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap.dense());
      if (solver.info() != Eigen::Success)
        fail(ErrorCode::SolverError, "Laplacian eigendecomposition failed");
      eigvecs_ = solver.eigenvectors();
      eigvals_ = solver.eigenvalues();
      // one Newton polish toward the nearest orthogonal basis; keeps the
      // norm drift of repeated applications at rounding level
      const Eigen::MatrixXd gram = eigvecs_.transpose() * eigvecs_;
      eigvecs_ = eigvecs_ * (1.5 * Eigen::MatrixXd::Identity(n_, n_) - 0.5 * gram);
      break;
    }
  }
}

void Stepper::require_shape(const WaveState& psi) const {
  if (psi.amplitudes.size() != n_)
    fail(ErrorCode::ShapeError, "state length does not match Laplacian size");
}

WaveState Stepper::step(const WaveState& psi) const {
  return advance(psi, 1);
}

WaveState Stepper::advance(WaveState psi, std::int64_t ticks) const {
  require_shape(psi);
  require_ticks(ticks);
  if (ticks == 0) return psi;
  switch (scheme_) {
    case Scheme::Euler:
      for (std::int64_t i = 0; i < ticks; ++i) psi.amplitudes = step_op_ * psi.amplitudes;
      break;
    case Scheme::Cayley:
      for (std::int64_t i = 0; i < ticks; ++i) {
        psi.amplitudes = cayley_lu_->solve((cayley_rhs_ * psi.amplitudes).eval());
        if (cayley_lu_->info() != Eigen::Success)
          fail(ErrorCode::SolverError, "Cayley solve failed");
      }
      break;
    case Scheme::Exact: {
      Eigen::VectorXcd modal = eigvecs_.transpose() * psi.amplitudes;
      const double angle_scale = mu_ * static_cast<double>(ticks);
      for (Eigen::Index i = 0; i < modal.size(); ++i)
        modal(i) *= std::exp(kImag * (angle_scale * eigvals_(i)));
      psi.amplitudes = eigvecs_ * modal;
      break;
    }
  }
  psi.tick += ticks;
  return psi;
}

Eigen::MatrixXcd kernel_matrix(const RelationalGraph& g, double mu, std::int64_t t, Scheme scheme) {
  require_mu(mu);
  require_ticks(t);
  const std::int32_t n = g.vertex_count();
  if (n > kDenseCap)
    fail(ErrorCode::TooLarge,
         "kernel matrix is dense; size " + std::to_string(n) + " exceeds cap " +
             std::to_string(kDenseCap));
  Laplacian lap(g);
  Eigen::MatrixXcd k_mat = Eigen::MatrixXcd::Identity(n, n);
  switch (scheme) {
    case Scheme::Euler: {
      warn_euler_stability(lap, mu);
      Eigen::SparseMatrix<Complex> op = identity_plus(lap.sparse(), kImag * mu);
      for (std::int64_t i = 0; i < t; ++i) k_mat = op * k_mat;
      break;
    }
    case Scheme::Cayley: {
      Stepper stepper(lap, Scheme::Cayley, mu);
      Eigen::SparseMatrix<Complex> rhs = identity_plus(lap.sparse(), kImag * (mu / 2.0));
      Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu(
          identity_plus(lap.sparse(), -kImag * (mu / 2.0)));
      if (lu.info() != Eigen::Success) fail(ErrorCode::SolverError, "Cayley factorization failed");
      for (std::int64_t i = 0; i < t; ++i) {
        k_mat = lu.solve((rhs * k_mat).eval());
        if (lu.info() != Eigen::Success) fail(ErrorCode::SolverError, "Cayley solve failed");
      }
      break;
    }
    case Scheme::Exact: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap.dense());
      if (solver.info() != Eigen::Success)
        fail(ErrorCode::SolverError, "Laplacian eigendecomposition failed");
      Eigen::VectorXcd phases(n);
      const double angle_scale = mu * static_cast<double>(t);
      for (std::int32_t i = 0; i < n; ++i)
        phases(i) = std::exp(kImag * (angle_scale * solver.eigenvalues()(i)));
      k_mat = solver.eigenvectors().cast<Complex>() * phases.asDiagonal() *
              solver.eigenvectors().transpose().cast<Complex>();
      break;
    }
  }
  return k_mat;
}

namespace {

constexpr std::int32_t kEnumCap = 12;

void check_enumeration_guard(const RelationalGraph& g, std::int32_t t) {
  if (t < 0) fail(ErrorCode::InvalidArgument, "tick count must be >= 0");
  if (t > kEnumCap || g.vertex_count() > kEnumCap)
    fail(ErrorCode::TooLargeForEnumeration,
         "walk enumeration is limited to t <= 12 and 12 vertices");
}

// Depth-first enumeration of all length-t walks leaving v; each complete
// walk adds its accumulated weight to the entry of its final vertex.
// Summation is Kahan-compensated: dense graphs contribute thousands of
// near-cancelling walk terms per entry.
void accumulate_walks(const RelationalGraph& g, double mu, std::int32_t steps_left,
                      std::int32_t v, Complex weight, Eigen::VectorXcd& column,
                      Eigen::VectorXcd& compensation) {
  if (steps_left == 0) {
    const Complex y = weight - compensation(v);
    const Complex t = column(v) + y;
    compensation(v) = (t - column(v)) - y;
    column(v) = t;
    return;
  }
  const Complex stay(1.0, -mu * static_cast<double>(g.degree(v)));
  accumulate_walks(g, mu, steps_left - 1, v, weight * stay, column, compensation);
  const Complex hop(0.0, mu);
  for (std::int32_t u : g.neighbors(v))
    accumulate_walks(g, mu, steps_left - 1, u, weight * hop, column, compensation);
}

}  // namespace

std::complex<double> kernel_path_sum(const RelationalGraph& g, double mu, std::int32_t t,
                                     std::int32_t x, std::int32_t y) {
  require_mu(mu);
  check_enumeration_guard(g, t);
  g.require_vertex(x);
  g.require_vertex(y);
  Eigen::VectorXcd column = Eigen::VectorXcd::Zero(g.vertex_count());
  Eigen::VectorXcd compensation = Eigen::VectorXcd::Zero(g.vertex_count());
  accumulate_walks(g, mu, t, y, Complex(1.0, 0.0), column, compensation);
  return column(x);
}

Eigen::MatrixXcd kernel_path_sum_matrix(const RelationalGraph& g, double mu, std::int32_t t) {
  require_mu(mu);
  check_enumeration_guard(g, t);
  const std::int32_t n = g.vertex_count();
  Eigen::MatrixXcd k_mat = Eigen::MatrixXcd::Zero(n, n);
  for (std::int32_t y = 0; y < n; ++y) {
    Eigen::VectorXcd column = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd compensation = Eigen::VectorXcd::Zero(n);
    accumulate_walks(g, mu, t, y, Complex(1.0, 0.0), column, compensation);
    k_mat.col(y) = column;
  }
  return k_mat;
}

}  // namespace relsim
