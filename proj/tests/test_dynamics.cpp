#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "dynamics.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "rng.hpp"

using namespace relsim;
using Complex = std::complex<double>;

namespace {

ErrorCode code_of(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

Eigen::VectorXcd random_state(std::int32_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  Eigen::VectorXcd v(n);
  for (std::int32_t i = 0; i < n; ++i)
    v(i) = Complex(rng.next_double() - 0.5, rng.next_double() - 0.5);
  return v / v.norm();
}

Eigen::VectorXcd ring_mode(std::int32_t n, std::int32_t m) {
  Eigen::VectorXcd v(n);
  const double k = 2.0 * std::numbers::pi * m / n;
  for (std::int32_t j = 0; j < n; ++j)
    v(j) = std::exp(Complex(0.0, k * j)) / std::sqrt(static_cast<double>(n));
  return v;
}

}  // namespace

TEST_CASE("three-vertex path Laplacian") {
  const Laplacian lap(RelationalGraph::lattice({3}, false));
  Eigen::MatrixXd expected(3, 3);
  expected << -1, 1, 0, 1, -2, 1, 0, 1, -1;
  CHECK((lap.dense() - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("isolated vertex has a zero Laplacian") {
  const Laplacian lap(RelationalGraph::lattice({1}, false));
  CHECK(lap.size() == 1);
  CHECK(lap.dense()(0, 0) == 0.0);
}

TEST_CASE("ring Laplacian spectrum matches the closed form") {
  const std::int32_t n = 100;
  const Laplacian lap(RelationalGraph::lattice({n}, true));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap.dense());
  REQUIRE(solver.info() == Eigen::Success);

  std::vector<double> expected;
  for (std::int32_t m = 0; m < n; ++m)
    expected.push_back(-(2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * m / n)));
  std::sort(expected.begin(), expected.end());
  for (std::int32_t i = 0; i < n; ++i)
    CHECK(solver.eigenvalues()(i) ==
          doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-9));
}

TEST_CASE("Laplacian rows sum to zero and the matrix is symmetric") {
  const Laplacian lap(RelationalGraph::lattice({5, 3}, true));
  const Eigen::MatrixXd dense = lap.dense();
  CHECK(dense.rowwise().sum().cwiseAbs().maxCoeff() == 0.0);
  CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("explicit step on an isolated vertex is the identity") {
  const Laplacian lap(RelationalGraph::lattice({1}, false));
  const WaveState psi{Eigen::VectorXcd::Constant(1, Complex(0.3, -0.2)), 5};
  const WaveState out = euler_step(psi, lap, 0.7);
  CHECK(out.amplitudes(0) == psi.amplitudes(0));
  CHECK(out.tick == 6);
}

TEST_CASE("explicit step on the two-vertex path, by hand") {
  const Laplacian lap(RelationalGraph::lattice({2}, false));
  WaveState psi{Eigen::VectorXcd::Zero(2), 0};
  psi.amplitudes(0) = 1.0;
  const WaveState out = euler_step(psi, lap, 0.1);
  CHECK(out.amplitudes(0).real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(out.amplitudes(0).imag() == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(out.amplitudes(1).real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(out.amplitudes(1).imag() == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(out.amplitudes.squaredNorm() == doctest::Approx(1.02).epsilon(1e-15));
}

TEST_CASE("explicit step rejects mismatched shapes") {
  const Laplacian lap(RelationalGraph::lattice({3}, false));
  const WaveState psi{Eigen::VectorXcd::Zero(2), 0};
  CHECK(code_of([&] { euler_step(psi, lap, 0.1); }) == ErrorCode::ShapeError);
}

TEST_CASE("rational step is unitary and fixes eigenmodes up to phase") {
  const Laplacian lap(RelationalGraph::lattice({8}, true));
  WaveState psi{ring_mode(8, 1), 0};
  const Eigen::VectorXcd before = psi.amplitudes;
  psi = cayley_step(psi, lap, 0.1);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(before.dot(psi.amplitudes)) - 1.0) < 1e-10);

  const Laplacian trivial(RelationalGraph::lattice({1}, false));
  const WaveState single{Eigen::VectorXcd::Constant(1, Complex(0.6, 0.8)), 0};
  CHECK(cayley_step(single, trivial, 0.1).amplitudes(0) == Complex(0.6, 0.8));
}

TEST_CASE("spectral evolution: identity at zero ticks, ring phases in closed form") {
  const std::int32_t n = 64;
  const Laplacian lap(RelationalGraph::lattice({n}, true));
  const double mu = 0.2;

  WaveState psi{ring_mode(n, 2), 0};
  const Eigen::VectorXcd initial = psi.amplitudes;

  const WaveState frozen = exact_evolve(psi, lap, mu, 0);
  CHECK((frozen.amplitudes - initial).cwiseAbs().maxCoeff() == 0.0);
  CHECK(frozen.tick == 0);

  const double k = 2.0 * std::numbers::pi * 2 / n;
  const double expected_phase = -mu * (2.0 - 2.0 * std::cos(k));
  WaveState evolved = psi;
  for (int t = 1; t <= 5; ++t) {
    evolved = exact_evolve(evolved, lap, mu, 1);
    const Complex overlap = initial.dot(evolved.amplitudes);
    CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-12);
    CHECK(std::arg(overlap) == doctest::Approx(t * expected_phase).epsilon(1e-10));
  }
}

TEST_CASE("explicit-step error against the spectral reference halves with the step count") {
  const std::int32_t n = 64;
  const RelationalGraph ring = RelationalGraph::lattice({n}, true);
  const Laplacian lap(ring);

  // smooth packet: mostly low modes, so the asymptotic first-order regime is reached early
  Eigen::VectorXcd packet(n);
  for (std::int32_t j = 0; j < n; ++j) {
    const double d = std::min(std::abs(j - 20.0), n - std::abs(j - 20.0));
    packet(j) = std::exp(Complex(0.0, 0.3 * j)) * std::exp(-d * d / 32.0);
  }
  packet /= packet.norm();

  const WaveState reference = exact_evolve({packet, 0}, lap, 1.0, 1);

  std::vector<double> errors;
  for (std::int32_t steps : {16, 32, 64, 128}) {
    WaveState psi{packet, 0};
    const Stepper stepper(lap, Scheme::Euler, 1.0 / steps);
    psi = stepper.advance(std::move(psi), steps);
    errors.push_back((psi.amplitudes - reference.amplitudes).cwiseAbs().maxCoeff());
  }
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double ratio = errors[i] / errors[i + 1];
    CHECK(ratio > 1.6);
    CHECK(ratio < 2.4);
  }
}

TEST_CASE("constant state is fixed by every scheme") {
  const Laplacian lap(RelationalGraph::lattice({4, 3}, false));
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Constant(12, 1.0 / std::sqrt(12.0));
  for (Scheme scheme : {Scheme::Euler, Scheme::Cayley, Scheme::Exact}) {
    const Stepper stepper(lap, scheme, 0.25);
    const WaveState out = stepper.step({ones, 0});
    CHECK((out.amplitudes - ones).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("explicit step inflates, unitary steps preserve inner products") {
  const Laplacian lap(RelationalGraph::lattice({10}, true));
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const WaveState psi{random_state(10, seed), 0};
    CHECK(euler_step(psi, lap, 0.3).norm() >= psi.norm() - 1e-15);
  }

  const WaveState a{random_state(10, 101), 0};
  const WaveState b{random_state(10, 202), 0};
  for (Scheme scheme : {Scheme::Cayley, Scheme::Exact}) {
    const Stepper stepper(lap, scheme, 0.3);
    WaveState at = a, bt = b;
    const Complex initial = a.amplitudes.dot(b.amplitudes);
    for (int t = 0; t < 50; ++t) {
      at = stepper.step(at);
      bt = stepper.step(bt);
    }
    CHECK(std::abs(at.amplitudes.dot(bt.amplitudes) - initial) < 1e-12);
    CHECK(std::abs(at.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("kernel base cases") {
  const RelationalGraph p3 = RelationalGraph::lattice({3}, false);
  const double mu = 0.2;

  const Eigen::MatrixXcd k0 = kernel_matrix(p3, mu, 0, Scheme::Euler);
  CHECK((k0 - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::MatrixXcd k1 = kernel_matrix(p3, mu, 1, Scheme::Euler);
  const Eigen::MatrixXcd expected =
      Eigen::MatrixXcd::Identity(3, 3) +
      Complex(0.0, mu) * Laplacian(p3).dense().cast<Complex>();
  CHECK((k1 - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("walk-sum base cases") {
  const RelationalGraph p2 = RelationalGraph::lattice({2}, false);
  CHECK(kernel_path_sum(p2, 0.3, 0, 0, 0) == Complex(1.0, 0.0));
  CHECK(kernel_path_sum(p2, 0.3, 0, 1, 0) == Complex(0.0, 0.0));
  CHECK(kernel_path_sum(p2, 0.3, 1, 1, 0) == Complex(0.0, 0.3));
}

TEST_CASE("walk sum equals the explicit kernel on the three-vertex path") {
  const RelationalGraph p3 = RelationalGraph::lattice({3}, false);
  const Eigen::MatrixXcd by_power = kernel_matrix(p3, 0.2, 3, Scheme::Euler);
  const Eigen::MatrixXcd by_walks = kernel_path_sum_matrix(p3, 0.2, 3);
  CHECK((by_power - by_walks).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("walk sum equals the matrix power on every four-vertex graph") {
  for (std::uint32_t mask = 0; mask < (1u << 6); ++mask) {
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    std::uint32_t bit = 0;
    for (std::int32_t u = 0; u < 4; ++u)
      for (std::int32_t v = u + 1; v < 4; ++v, ++bit)
        if (mask & (1u << bit)) edges.emplace_back(u, v);
    const RelationalGraph g = RelationalGraph::from_edges(4, std::move(edges));
    for (std::int32_t t = 0; t <= 4; ++t) {
      const Eigen::MatrixXcd by_walks = kernel_path_sum_matrix(g, 0.3, t);
      const Eigen::MatrixXcd by_power = kernel_matrix(g, 0.3, t, Scheme::Euler);
      CHECK((by_walks - by_power).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("walk enumeration guard") {
  const RelationalGraph big = RelationalGraph::lattice({13}, false);
  CHECK(code_of([&] { kernel_path_sum(big, 0.3, 1, 0, 0); }) ==
        ErrorCode::TooLargeForEnumeration);
  const RelationalGraph small = RelationalGraph::lattice({3}, false);
  CHECK(code_of([&] { kernel_path_sum(small, 0.3, 13, 0, 0); }) ==
        ErrorCode::TooLargeForEnumeration);
}

TEST_CASE("exact scheme refuses sizes beyond the dense cap") {
  // cap applies to the spectral decomposition; build a graph just over it
  const RelationalGraph g = RelationalGraph::lattice({kDenseCap + 1}, false);
  const Laplacian lap(g);
  CHECK(code_of([&] { Stepper(lap, Scheme::Exact, 0.1); }) == ErrorCode::TooLarge);
}

TEST_CASE("scheme names round-trip") {
  for (Scheme scheme : {Scheme::Euler, Scheme::Cayley, Scheme::Exact})
    CHECK(scheme_from_name(scheme_name(scheme)) == scheme);
  CHECK(code_of([] { scheme_from_name("verlet"); }) == ErrorCode::InvalidArgument);
}
