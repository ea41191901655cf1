// Exercises the shared-library surface through the public C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "relsim/relsim.h"

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("version and error text are always available") {
  CHECK(std::string(relsim_version()) == "0.1.0");
  CHECK(relsim_last_error() != nullptr);
}

TEST_CASE("graph lifecycle through the C surface") {
  const int64_t dims[] = {4, 4};
  relsim_graph* g = nullptr;
  REQUIRE(relsim_graph_lattice(dims, 2, 1, &g) == RELSIM_OK);
  CHECK(relsim_graph_vertex_count(g) == 16);
  CHECK(relsim_graph_edge_count(g) == 32);
  CHECK(relsim_graph_is_connected(g) == 1);

  int32_t degree = 0;
  CHECK(relsim_graph_degree(g, 5, &degree) == RELSIM_OK);
  CHECK(degree == 4);
  CHECK(relsim_graph_degree(g, 99, &degree) == RELSIM_ERR_UNKNOWN_VERTEX);
  CHECK(std::strlen(relsim_last_error()) > 0);

  char* text = nullptr;
  REQUIRE(relsim_graph_to_edge_list(g, &text) == RELSIM_OK);
  relsim_graph* round = nullptr;
  REQUIRE(relsim_graph_from_edge_list(text, &round) == RELSIM_OK);
  CHECK(relsim_graph_edge_count(round) == 32);
  relsim_free(text);
  relsim_graph_free(round);
  relsim_graph_free(g);
}

TEST_CASE("edge list errors surface as typed statuses") {
  relsim_graph* g = nullptr;
  CHECK(relsim_graph_from_edge_list("0 0\n", &g) == RELSIM_ERR_SELF_LOOP);
  CHECK(relsim_graph_from_edge_list("0 a\n", &g) == RELSIM_ERR_PARSE);
  const int64_t bad_dims[] = {0};
  CHECK(relsim_graph_lattice(bad_dims, 1, 0, &g) == RELSIM_ERR_INVALID_DIMENSION);
  const int64_t huge[] = {2000000};
  CHECK(relsim_graph_lattice(huge, 1, 0, &g) == RELSIM_ERR_TOO_LARGE);
}

TEST_CASE("generalized adjacency and canonical bytes") {
  const int64_t dims[] = {5};
  relsim_graph* g = nullptr;
  REQUIRE(relsim_graph_lattice(dims, 1, 0, &g) == RELSIM_OK);

  auto build = [&](bool swapped, relsim_genadj** out) {
    REQUIRE(relsim_genadj_create(g, out) == RELSIM_OK);
    const int32_t row_a_verts[] = {0, 1};
    const double row_a_re[] = {0.6, 0.8};
    const double row_a_im[] = {0.0, 0.1};
    const int32_t row_b_verts[] = {3, 4};
    const double row_b_re[] = {0.3, -0.5};
    const double row_b_im[] = {0.2, 0.0};
    if (swapped) {
      REQUIRE(relsim_genadj_attach_particle(*out, row_b_verts, row_b_re, row_b_im, 2, 1) ==
              RELSIM_OK);
      REQUIRE(relsim_genadj_attach_particle(*out, row_a_verts, row_a_re, row_a_im, 2, 1) ==
              RELSIM_OK);
    } else {
      REQUIRE(relsim_genadj_attach_particle(*out, row_a_verts, row_a_re, row_a_im, 2, 1) ==
              RELSIM_OK);
      REQUIRE(relsim_genadj_attach_particle(*out, row_b_verts, row_b_re, row_b_im, 2, 1) ==
              RELSIM_OK);
    }
    REQUIRE(relsim_genadj_add_entanglement(*out, 0, 1, 0.7) == RELSIM_OK);
  };

  relsim_genadj *a = nullptr, *b = nullptr;
  build(false, &a);
  build(true, &b);
  CHECK(relsim_genadj_object_count(a) == 2);

  uint8_t *bytes_a = nullptr, *bytes_b = nullptr;
  size_t len_a = 0, len_b = 0;
  REQUIRE(relsim_genadj_canonical_form(a, &bytes_a, &len_a) == RELSIM_OK);
  REQUIRE(relsim_genadj_canonical_form(b, &bytes_b, &len_b) == RELSIM_OK);
  REQUIRE(len_a == len_b);
  CHECK(std::memcmp(bytes_a, bytes_b, len_a) == 0);
  CHECK(std::memcmp(bytes_a, "RELADJ01", 8) == 0);

  CHECK(relsim_genadj_add_entanglement(a, 0, 1, 1.5) == RELSIM_ERR_INVALID_STRENGTH);

  relsim_free(bytes_a);
  relsim_free(bytes_b);
  relsim_genadj_free(a);
  relsim_genadj_free(b);
  relsim_graph_free(g);
}

TEST_CASE("evolution keeps the unitary norm and the kernel matches the walk sum") {
  const int64_t dims[] = {8};
  relsim_graph* g = nullptr;
  REQUIRE(relsim_graph_lattice(dims, 1, 1, &g) == RELSIM_OK);

  relsim_state* s = nullptr;
  REQUIRE(relsim_state_localized(g, 3, &s) == RELSIM_OK);
  CHECK(relsim_state_size(s) == 8);
  REQUIRE(relsim_evolve(g, s, RELSIM_SCHEME_CAYLEY, 0.2, 50) == RELSIM_OK);
  CHECK(relsim_state_tick(s) == 50);
  CHECK(std::abs(relsim_state_norm(s) - 1.0) < 1e-12);

  std::vector<double> re(8), im(8);
  REQUIRE(relsim_state_amplitudes(s, re.data(), im.data(), 8) == RELSIM_OK);
  double norm_sq = 0.0;
  for (int i = 0; i < 8; ++i) norm_sq += re[i] * re[i] + im[i] * im[i];
  CHECK(std::abs(norm_sq - 1.0) < 1e-12);
  CHECK(relsim_state_amplitudes(s, re.data(), im.data(), 7) == RELSIM_ERR_SHAPE);
  relsim_state_free(s);

  const int32_t n = 8;
  std::vector<double> kre(static_cast<size_t>(n) * n), kim(static_cast<size_t>(n) * n);
  REQUIRE(relsim_kernel(g, 0.3, 3, RELSIM_SCHEME_EULER, kre.data(), kim.data(), n) == RELSIM_OK);
  double max_dev = 0.0;
  for (int32_t x = 0; x < n; ++x)
    for (int32_t y = 0; y < n; ++y) {
      double wr = 0.0, wi = 0.0;
      REQUIRE(relsim_kernel_path_sum(g, 0.3, 3, x, y, &wr, &wi) == RELSIM_OK);
      max_dev = std::max(max_dev, std::abs(wr - kre[static_cast<size_t>(x) * n + y]) +
                                      std::abs(wi - kim[static_cast<size_t>(x) * n + y]));
    }
  CHECK(max_dev < 1e-12);

  double wr = 0.0, wi = 0.0;
  CHECK(relsim_kernel_path_sum(g, 0.3, 13, 0, 0, &wr, &wi) ==
        RELSIM_ERR_TOO_LARGE_FOR_ENUMERATION);
  relsim_graph_free(g);
}

TEST_CASE("distances and the shortcut report") {
  const int64_t dims[] = {100};
  relsim_graph* g = nullptr;
  REQUIRE(relsim_graph_lattice(dims, 1, 1, &g) == RELSIM_OK);

  int32_t hops = 0;
  REQUIRE(relsim_distance_hops(g, 0, 50, &hops) == RELSIM_OK);
  CHECK(hops == 50);

  double resistance = 0.0;
  REQUIRE(relsim_distance_resistance(g, 0, 50, &resistance) == RELSIM_OK);
  CHECK(std::abs(resistance - 25.0) < 1e-9);

  relsim_shortcut_report report;
  REQUIRE(relsim_shortcut_impact(g, 0, 50, 0, 50, 0.001, 0, &report) == RELSIM_OK);
  CHECK(report.hops_after == 1);
  CHECK(std::abs(report.rel_change - 0.025 / 1.025) < 1e-9);
  relsim_graph_free(g);

  relsim_graph* split = nullptr;
  REQUIRE(relsim_graph_from_edge_list("0 1\n2 3\n", &split) == RELSIM_OK);
  CHECK(relsim_distance_hops(split, 0, 3, &hops) == RELSIM_ERR_UNREACHABLE);
  CHECK(relsim_distance_resistance(split, 0, 3, &resistance) == RELSIM_ERR_UNREACHABLE);
  relsim_graph_free(split);
}

TEST_CASE("qubit pipeline through the C surface") {
  relsim_pure* s0 = nullptr;
  REQUIRE(relsim_pure_epr(&s0) == RELSIM_OK);
  CHECK(relsim_pure_qubit_count(s0) == 3);
  CHECK(relsim_pure_dim(s0) == 8);
  CHECK(relsim_pure_tick(s0) == 0);

  double mi = 0.0, neg = 0.0;
  REQUIRE(relsim_pure_pair_measures(s0, 0, 1, &mi, &neg) == RELSIM_OK);
  CHECK(std::abs(mi - 2.0 * std::log(2.0)) < 1e-9);
  CHECK(std::abs(neg - 0.5) < 1e-9);

  relsim_pure* s1 = nullptr;
  REQUIRE(relsim_pure_measure_interaction(s0, 1, 2, &s1) == RELSIM_OK);
  CHECK(relsim_pure_tick(s1) == 1);

  std::vector<double> re(8), im(8);
  REQUIRE(relsim_pure_amplitudes(s1, re.data(), im.data(), 8) == RELSIM_OK);
  CHECK(std::abs(re[2] - 0.5) < 1e-12);
  CHECK(std::abs(re[6] + 0.5) < 1e-12);

  // reduced pair density of the electrons: diagonal (0, 1/2, 1/2, 0)
  const int32_t keep[] = {0, 1};
  std::vector<double> rho_re(16), rho_im(16);
  REQUIRE(relsim_pure_reduced_density(s1, keep, 2, rho_re.data(), rho_im.data()) == RELSIM_OK);
  CHECK(std::abs(rho_re[0]) < 1e-12);
  CHECK(std::abs(rho_re[5] - 0.5) < 1e-12);
  CHECK(std::abs(rho_re[10] - 0.5) < 1e-12);

  relsim_eventlog* log = nullptr;
  REQUIRE(relsim_eventlog_create(&log) == RELSIM_OK);
  REQUIRE(relsim_seed_initial_relations(s0, 1e-9, log) == RELSIM_OK);
  REQUIRE(relsim_propagate_relations(s0, s1, 1, 2, 1e-9, log) == RELSIM_OK);

  int32_t outcome = 0;
  relsim_pure* s2 = nullptr;
  REQUIRE(relsim_pure_collapse(s1, 2, 42, &outcome, &s2) == RELSIM_OK);
  CHECK((outcome == 1 || outcome == -1));
  REQUIRE(relsim_propagate_relations(s1, s2, -1, -1, 1e-9, log) == RELSIM_OK);

  CHECK(relsim_eventlog_size(log) == 6);
  int pass = 0;
  size_t offending = 0;
  REQUIRE(relsim_eventlog_locality_check(log, &pass, &offending) == RELSIM_OK);
  CHECK(pass == 1);

  int64_t tick = 0;
  int kind = 0, cause = 0;
  int32_t a = 0, b = 0, witness = 0;
  REQUIRE(relsim_eventlog_event(log, 2, &tick, &kind, &a, &b, &witness, &cause) == RELSIM_OK);
  CHECK(tick == 2);
  CHECK(kind == RELSIM_EVENT_CREATED);
  CHECK(cause == RELSIM_CAUSE_PROPAGATION);
  CHECK(witness == 1);

  char* csv = nullptr;
  REQUIRE(relsim_eventlog_to_csv(log, &csv) == RELSIM_OK);
  CHECK(std::string(csv).rfind("tick,kind,a,b,witness,cause\n", 0) == 0);
  relsim_free(csv);

  relsim_eventlog_free(log);
  relsim_pure_free(s2);
  relsim_pure_free(s1);
  relsim_pure_free(s0);
}

TEST_CASE("forged logs fail the locality check through the C surface") {
  relsim_eventlog* log = nullptr;
  REQUIRE(relsim_eventlog_create(&log) == RELSIM_OK);
  REQUIRE(relsim_eventlog_append(log, 0, RELSIM_EVENT_CREATED, 0, 1, -1,
                                 RELSIM_CAUSE_INTERACTION) == RELSIM_OK);
  REQUIRE(relsim_eventlog_append(log, 1, RELSIM_EVENT_CREATED, 0, 2, -1,
                                 RELSIM_CAUSE_PROPAGATION) == RELSIM_OK);
  int pass = 1;
  size_t offending = 99;
  REQUIRE(relsim_eventlog_locality_check(log, &pass, &offending) == RELSIM_OK);
  CHECK(pass == 0);
  CHECK(offending == 1);
  relsim_eventlog_free(log);
}

TEST_CASE("apparatus validation crosses the C boundary") {
  // apparatus qubit already flipped
  std::vector<double> re(4, 0.0), im(4, 0.0);
  re[2] = 1.0;
  relsim_pure* s = nullptr;
  REQUIRE(relsim_pure_create(2, re.data(), im.data(), 0, &s) == RELSIM_OK);
  relsim_pure* out = nullptr;
  CHECK(relsim_pure_measure_interaction(s, 0, 1, &out) ==
        RELSIM_ERR_APPARATUS_NOT_INITIALIZED);
  relsim_pure_free(s);

  re[2] = 0.7;  // not unit norm
  relsim_pure* bad = nullptr;
  CHECK(relsim_pure_create(2, re.data(), im.data(), 0, &bad) == RELSIM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("scenario runners write their artifacts") {
  const auto dir = std::filesystem::temp_directory_path() / "relsim_capi_scenarios";
  std::filesystem::remove_all(dir);

  REQUIRE(relsim_run_epr(42, 1e-9, (dir / "epr").string().c_str()) == RELSIM_OK);
  CHECK(slurp(dir / "epr" / "measures.csv").rfind("tick,a,b,", 0) == 0);
  CHECK(slurp(dir / "epr" / "events.csv").rfind("tick,kind,", 0) == 0);
  CHECK(slurp(dir / "epr" / "manifest.txt").find("seed=42") != std::string::npos);

  REQUIRE(relsim_run_dispersion(16, 1, 0.2, 16, RELSIM_SCHEME_EXACT,
                                (dir / "disp").string().c_str()) == RELSIM_OK);
  CHECK(slurp(dir / "disp" / "summary.csv").find("lattice_deviation") != std::string::npos);

  const double w[] = {0.0, 0.001};
  REQUIRE(relsim_run_shortcut(20, w, 2, (dir / "sc").string().c_str()) == RELSIM_OK);
  CHECK(slurp(dir / "sc" / "shortcut.csv").rfind("pair,w,metric,", 0) == 0);

  REQUIRE(relsim_run_double_slit("nx = 21\nny = 11\nbarrier_x = 8\nslit_y1 = 3\nslit_y2 = 7\n"
                                 "source_x = 2\nsource_y = 5\nscreen_x = 16\nticks = 20\n",
                                 (dir / "ds").string().c_str()) == RELSIM_OK);
  CHECK(slurp(dir / "ds" / "screen.csv").rfind("y,intensity_both,", 0) == 0);

  CHECK(relsim_run_double_slit("slit_y1 = 3\nslit_y2 = 3\n", (dir / "bad").string().c_str()) ==
        RELSIM_ERR_INVALID_GEOMETRY);

  std::filesystem::remove_all(dir);
}

TEST_CASE("the built-in check suite passes") {
  int32_t failures = -1;
  REQUIRE(relsim_check(&failures) == RELSIM_OK);
  CHECK(failures == 0);
}
