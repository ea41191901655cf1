#include "checks.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "dynamics.hpp"
#include "entangle.hpp"
#include "experiments.hpp"
#include "geometry.hpp"
#include "graph.hpp"
#include "rng.hpp"

namespace relsim {

namespace {

Eigen::VectorXcd random_unit_vector(std::int32_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  Eigen::VectorXcd v(n);
  for (std::int32_t i = 0; i < n; ++i)
    v(i) = std::complex<double>(rng.next_double() - 0.5, rng.next_double() - 0.5);
  return v / v.norm();
}

}  // namespace

int run_self_checks(std::ostream& out) {
  int failures = 0;
  auto check = [&](const std::string& name, const std::function<bool()>& body) {
    bool ok = false;
    std::string detail;
    try {
      ok = body();
    } catch (const std::exception& e) {
      detail = std::string(" (") + e.what() + ")";
    }
    out << (ok ? "ok   " : "FAIL ") << name << detail << '\n';
    if (!ok) ++failures;
  };

  check("walk sum matches the euler kernel on small graphs", [] {
    CounterRng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const std::int32_t n = 2 + static_cast<std::int32_t>(rng.next_u64() % 4);
      std::vector<std::pair<std::int32_t, std::int32_t>> edges;
      for (std::int32_t u = 0; u < n; ++u)
        for (std::int32_t v = u + 1; v < n; ++v)
          if (rng.next_double() < 0.6) edges.emplace_back(u, v);
      const RelationalGraph g = RelationalGraph::from_edges(n, std::move(edges));
      for (std::int32_t t = 0; t <= 4; ++t) {
        const Eigen::MatrixXcd by_walks = kernel_path_sum_matrix(g, 0.3, t);
        const Eigen::MatrixXcd by_power = kernel_matrix(g, 0.3, t, Scheme::Euler);
        if ((by_walks - by_power).cwiseAbs().maxCoeff() > 1e-12) return false;
      }
    }
    return true;
  });

  check("laplacian rows sum to zero", [] {
    const RelationalGraph g = RelationalGraph::lattice({5, 4}, true);
    const Eigen::MatrixXd dense = Laplacian(g).dense();
    return dense.rowwise().sum().cwiseAbs().maxCoeff() == 0.0 &&
           (dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0;
  });

  check("cayley and exact steps preserve the norm", [] {
    const RelationalGraph ring = RelationalGraph::lattice({16}, true);
    const Laplacian lap(ring);
    WaveState cayley{random_unit_vector(16, 11), 0};
    WaveState exact = cayley;
    const Stepper cayley_stepper(lap, Scheme::Cayley, 0.3);
    for (int t = 0; t < 200; ++t) cayley = cayley_stepper.step(cayley);
    exact = exact_evolve(exact, lap, 0.3, 200);
    return std::abs(cayley.norm() - 1.0) < 1e-12 && std::abs(exact.norm() - 1.0) < 1e-12;
  });

  check("euler step never shrinks the norm", [] {
    const RelationalGraph ring = RelationalGraph::lattice({12}, true);
    const Laplacian lap(ring);
    for (std::uint64_t seed = 0; seed < 16; ++seed) {
      const WaveState psi{random_unit_vector(12, 100 + seed), 0};
      if (euler_step(psi, lap, 0.2).norm() < psi.norm() - 1e-15) return false;
    }
    return true;
  });

  check("constant state is a fixed point of every stepper", [] {
    const RelationalGraph ring = RelationalGraph::lattice({10}, true);
    const Laplacian lap(ring);
    const Eigen::VectorXcd ones = Eigen::VectorXcd::Constant(10, 1.0 / std::sqrt(10.0));
    const WaveState psi{ones, 0};
    for (Scheme scheme : {Scheme::Euler, Scheme::Cayley, Scheme::Exact}) {
      const WaveState stepped = Stepper(lap, scheme, 0.3).step(psi);
      if ((stepped.amplitudes - ones).cwiseAbs().maxCoeff() > 1e-12) return false;
    }
    return true;
  });

  check("measurement pipeline obeys the locality discipline", [] {
    const EprResult result = run_epr_scenario(42);
    return locality_check(result.log).pass;
  });

  check("resistance distance stays below the hop count", [] {
    CounterRng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
      const std::int32_t n = 8 + static_cast<std::int32_t>(rng.next_u64() % 8);
      std::vector<std::pair<std::int32_t, std::int32_t>> edges;
      for (std::int32_t v = 1; v < n; ++v)
        edges.emplace_back(static_cast<std::int32_t>(rng.next_u64() % v), v);
      for (int extra = 0; extra < n; ++extra) {
        const auto u = static_cast<std::int32_t>(rng.next_u64() % n);
        const auto v = static_cast<std::int32_t>(rng.next_u64() % n);
        if (u != v) edges.emplace_back(std::min(u, v), std::max(u, v));
      }
      const RelationalGraph g = RelationalGraph::from_edges(n, std::move(edges));
      for (std::int32_t y = 1; y < n; ++y)
        if (resistance_distance(g, 0, y) > shortest_path_distance(g, 0, y) + 1e-9) return false;
    }
    return true;
  });

  return failures;
}

}  // namespace relsim
