#include "relsim/relsim.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <new>
#include <string>

#include "checks.hpp"
#include "dynamics.hpp"
#include "entangle.hpp"
#include "error.hpp"
#include "experiments.hpp"
#include "genadj.hpp"
#include "geometry.hpp"
#include "graph.hpp"
#include "textio.hpp"

using namespace relsim;

// Handle definitions; each wraps one core value.
struct relsim_graph {
  RelationalGraph value;
};
struct relsim_genadj {
  GeneralizedAdjacency value;
};
struct relsim_state {
  WaveState value;
};
struct relsim_pure {
  PureState value;
};
struct relsim_eventlog {
  RelationEventLog value;
};

namespace {

thread_local std::string g_last_error;

relsim_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return RELSIM_ERR_INVALID_ARGUMENT;
    case ErrorCode::InvalidDimension: return RELSIM_ERR_INVALID_DIMENSION;
    case ErrorCode::TooLarge: return RELSIM_ERR_TOO_LARGE;
    case ErrorCode::SelfLoopRejected: return RELSIM_ERR_SELF_LOOP;
    case ErrorCode::ParseError: return RELSIM_ERR_PARSE;
    case ErrorCode::UnknownVertex: return RELSIM_ERR_UNKNOWN_VERTEX;
    case ErrorCode::InvalidStrength: return RELSIM_ERR_INVALID_STRENGTH;
    case ErrorCode::ShapeError: return RELSIM_ERR_SHAPE;
    case ErrorCode::SolverError: return RELSIM_ERR_SOLVER;
    case ErrorCode::Unreachable: return RELSIM_ERR_UNREACHABLE;
    case ErrorCode::TooLargeForEnumeration: return RELSIM_ERR_TOO_LARGE_FOR_ENUMERATION;
    case ErrorCode::ApparatusNotInitialized: return RELSIM_ERR_APPARATUS_NOT_INITIALIZED;
    case ErrorCode::InvalidSubset: return RELSIM_ERR_INVALID_SUBSET;
    case ErrorCode::LocalityViolation: return RELSIM_ERR_LOCALITY_VIOLATION;
    case ErrorCode::InvalidGeometry: return RELSIM_ERR_INVALID_GEOMETRY;
    case ErrorCode::Io: return RELSIM_ERR_IO;
  }
  return RELSIM_ERR_INTERNAL;
}

template <typename Body>
relsim_status guarded(Body&& body) {
  try {
    body();
    return RELSIM_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RELSIM_ERR_TOO_LARGE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RELSIM_ERR_INTERNAL;
  }
}

relsim_status invalid(const char* message) {
  g_last_error = message;
  return RELSIM_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Scheme scheme_of(int scheme) {
  switch (scheme) {
    case RELSIM_SCHEME_EULER: return Scheme::Euler;
    case RELSIM_SCHEME_CAYLEY: return Scheme::Cayley;
    case RELSIM_SCHEME_EXACT: return Scheme::Exact;
  }
  fail(ErrorCode::InvalidArgument, "unknown scheme id " + std::to_string(scheme));
}

}  // namespace

extern "C" {

const char* relsim_version(void) { return "0.1.0"; }

const char* relsim_last_error(void) { return g_last_error.c_str(); }

void relsim_free(void* buffer) { std::free(buffer); }

/* ------------------------------------------------------------------ */

relsim_status relsim_graph_lattice(const int64_t* dims, int32_t n_dims, int periodic,
                                   relsim_graph** out) {
  if (!dims || n_dims < 1 || !out) return invalid("lattice needs extents and an out handle");
  return guarded([&] {
    std::vector<std::int64_t> extents(dims, dims + n_dims);
    *out = new relsim_graph{RelationalGraph::lattice(extents, periodic != 0)};
  });
}

relsim_status relsim_graph_from_edge_list(const char* text, relsim_graph** out) {
  if (!text || !out) return invalid("edge list needs text and an out handle");
  return guarded([&] { *out = new relsim_graph{RelationalGraph::from_edge_list(text)}; });
}

relsim_status relsim_graph_to_edge_list(const relsim_graph* g, char** out_text) {
  if (!g || !out_text) return invalid("null graph or out pointer");
  return guarded([&] { *out_text = dup_string(g->value.to_edge_list()); });
}

int32_t relsim_graph_vertex_count(const relsim_graph* g) {
  return g ? g->value.vertex_count() : 0;
}

int64_t relsim_graph_edge_count(const relsim_graph* g) { return g ? g->value.edge_count() : 0; }

relsim_status relsim_graph_degree(const relsim_graph* g, int32_t v, int32_t* out) {
  if (!g || !out) return invalid("null graph or out pointer");
  return guarded([&] { *out = g->value.degree(v); });
}

int relsim_graph_is_connected(const relsim_graph* g) {
  return g && g->value.is_connected() ? 1 : 0;
}

void relsim_graph_free(relsim_graph* g) { delete g; }

/* ------------------------------------------------------------------ */

relsim_status relsim_genadj_create(const relsim_graph* g, relsim_genadj** out) {
  if (!g || !out) return invalid("null graph or out pointer");
  return guarded([&] { *out = new relsim_genadj{GeneralizedAdjacency(g->value)}; });
}

relsim_status relsim_genadj_attach_particle(relsim_genadj* ga, const int32_t* vertices,
                                            const double* re, const double* im, int32_t n_entries,
                                            int normalize) {
  if (!ga || (n_entries > 0 && (!vertices || !re || !im)) || n_entries < 0)
    return invalid("bad amplitude arrays");
  return guarded([&] {
    std::map<std::int32_t, std::complex<double>> amplitudes;
    for (int32_t i = 0; i < n_entries; ++i)
      amplitudes[vertices[i]] = std::complex<double>(re[i], im[i]);
    ga->value.attach_particle(amplitudes, normalize != 0);
  });
}

relsim_status relsim_genadj_add_entanglement(relsim_genadj* ga, int32_t e1, int32_t e2,
                                             double strength) {
  if (!ga) return invalid("null handle");
  return guarded([&] { ga->value.add_entanglement(e1, e2, strength); });
}

int32_t relsim_genadj_object_count(const relsim_genadj* ga) {
  return ga ? ga->value.object_count() : 0;
}

relsim_status relsim_genadj_canonical_form(const relsim_genadj* ga, uint8_t** out_bytes,
                                           size_t* out_len) {
  if (!ga || !out_bytes || !out_len) return invalid("null handle or out pointer");
  return guarded([&] {
    const std::vector<std::uint8_t> bytes = ga->value.canonical_form();
    auto* buffer = static_cast<uint8_t*>(std::malloc(bytes.size()));
    if (!buffer) throw std::bad_alloc();
    std::memcpy(buffer, bytes.data(), bytes.size());
    *out_bytes = buffer;
    *out_len = bytes.size();
  });
}

void relsim_genadj_free(relsim_genadj* ga) { delete ga; }

/* ------------------------------------------------------------------ */

relsim_status relsim_state_create(const relsim_graph* g, const double* re, const double* im,
                                  relsim_state** out) {
  if (!g || !re || !im || !out) return invalid("null graph, amplitudes, or out pointer");
  return guarded([&] {
    const std::int32_t n = g->value.vertex_count();
    Eigen::VectorXcd amp(n);
    for (std::int32_t i = 0; i < n; ++i) {
      amp(i) = std::complex<double>(re[i], im[i]);
      if (!std::isfinite(re[i]) || !std::isfinite(im[i]))
        fail(ErrorCode::InvalidArgument, "non-finite amplitude");
    }
    *out = new relsim_state{WaveState{std::move(amp), 0}};
  });
}

relsim_status relsim_state_localized(const relsim_graph* g, int32_t vertex, relsim_state** out) {
  if (!g || !out) return invalid("null graph or out pointer");
  return guarded([&] {
    g->value.require_vertex(vertex);
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(g->value.vertex_count());
    amp(vertex) = 1.0;
    *out = new relsim_state{WaveState{std::move(amp), 0}};
  });
}

int32_t relsim_state_size(const relsim_state* s) {
  return s ? static_cast<int32_t>(s->value.amplitudes.size()) : 0;
}

int64_t relsim_state_tick(const relsim_state* s) { return s ? s->value.tick : 0; }

double relsim_state_norm(const relsim_state* s) { return s ? s->value.norm() : 0.0; }

relsim_status relsim_state_amplitudes(const relsim_state* s, double* re, double* im, int32_t n) {
  if (!s || !re || !im) return invalid("null state or buffers");
  if (n != s->value.amplitudes.size()) {
    g_last_error = "buffer length does not match state size";
    return RELSIM_ERR_SHAPE;
  }
  for (int32_t i = 0; i < n; ++i) {
    re[i] = s->value.amplitudes(i).real();
    im[i] = s->value.amplitudes(i).imag();
  }
  return RELSIM_OK;
}

relsim_status relsim_evolve(const relsim_graph* g, relsim_state* s, int scheme, double mu,
                            int64_t ticks) {
  if (!g || !s) return invalid("null graph or state");
  return guarded([&] {
    const Laplacian lap(g->value);
    const Stepper stepper(lap, scheme_of(scheme), mu);
    s->value = stepper.advance(std::move(s->value), ticks);
  });
}

void relsim_state_free(relsim_state* s) { delete s; }

relsim_status relsim_kernel(const relsim_graph* g, double mu, int64_t t, int scheme, double* re,
                            double* im, int32_t n) {
  if (!g || !re || !im) return invalid("null graph or buffers");
  if (n != g->value.vertex_count()) {
    g_last_error = "buffer length does not match vertex count";
    return RELSIM_ERR_SHAPE;
  }
  return guarded([&] {
    const Eigen::MatrixXcd k_mat = kernel_matrix(g->value, mu, t, scheme_of(scheme));
    for (int32_t r = 0; r < n; ++r)
      for (int32_t c = 0; c < n; ++c) {
        re[r * n + c] = k_mat(r, c).real();
        im[r * n + c] = k_mat(r, c).imag();
      }
  });
}

relsim_status relsim_kernel_path_sum(const relsim_graph* g, double mu, int32_t t, int32_t x,
                                     int32_t y, double* re, double* im) {
  if (!g || !re || !im) return invalid("null graph or out pointers");
  return guarded([&] {
    const std::complex<double> entry = kernel_path_sum(g->value, mu, t, x, y);
    *re = entry.real();
    *im = entry.imag();
  });
}

/* ------------------------------------------------------------------ */

relsim_status relsim_distance_hops(const relsim_graph* g, int32_t x, int32_t y, int32_t* out) {
  if (!g || !out) return invalid("null graph or out pointer");
  return guarded([&] { *out = shortest_path_distance(g->value, x, y); });
}

relsim_status relsim_distance_resistance(const relsim_graph* g, int32_t x, int32_t y,
                                         double* out) {
  if (!g || !out) return invalid("null graph or out pointer");
  return guarded([&] { *out = resistance_distance(g->value, x, y); });
}

relsim_status relsim_shortcut_impact(const relsim_graph* g, int32_t x, int32_t y, int32_t u,
                                     int32_t v, double w, int two_hop,
                                     relsim_shortcut_report* out) {
  if (!g || !out) return invalid("null graph or out pointer");
  return guarded([&] {
    const ShortcutReport report = shortcut_impact(g->value, x, y, u, v, w, two_hop != 0);
    out->hops_before = report.hops_before;
    out->hops_after = report.hops_after;
    out->resistance_before = report.resistance_before;
    out->resistance_after = report.resistance_after;
    out->rel_change = report.rel_change;
  });
}

/* ------------------------------------------------------------------ */

relsim_status relsim_pure_create(int32_t n_qubits, const double* re, const double* im,
                                 int64_t tick, relsim_pure** out) {
  if (!re || !im || !out) return invalid("null amplitudes or out pointer");
  return guarded([&] {
    if (n_qubits < 1 || n_qubits > 12)
      fail(ErrorCode::TooLarge, "qubit count must lie in [1, 12]");
    const std::int64_t dim = std::int64_t{1} << n_qubits;
    Eigen::VectorXcd amp(dim);
    for (std::int64_t i = 0; i < dim; ++i) amp(i) = std::complex<double>(re[i], im[i]);
    *out = new relsim_pure{PureState(n_qubits, std::move(amp), tick)};
  });
}

relsim_status relsim_pure_epr(relsim_pure** out) {
  if (!out) return invalid("null out pointer");
  return guarded([&] { *out = new relsim_pure{make_epr_with_apparatus()}; });
}

int32_t relsim_pure_qubit_count(const relsim_pure* s) { return s ? s->value.n_qubits() : 0; }

int64_t relsim_pure_dim(const relsim_pure* s) { return s ? s->value.dim() : 0; }

int64_t relsim_pure_tick(const relsim_pure* s) { return s ? s->value.tick() : 0; }

relsim_status relsim_pure_amplitudes(const relsim_pure* s, double* re, double* im, int64_t dim) {
  if (!s || !re || !im) return invalid("null state or buffers");
  if (dim != s->value.dim()) {
    g_last_error = "buffer length does not match state dimension";
    return RELSIM_ERR_SHAPE;
  }
  for (int64_t i = 0; i < dim; ++i) {
    re[i] = s->value.amplitudes()(i).real();
    im[i] = s->value.amplitudes()(i).imag();
  }
  return RELSIM_OK;
}

relsim_status relsim_pure_measure_interaction(const relsim_pure* s, int32_t electron,
                                              int32_t apparatus, relsim_pure** out) {
  if (!s || !out) return invalid("null state or out pointer");
  return guarded([&] {
    *out = new relsim_pure{apply_measurement_interaction(s->value, electron, apparatus)};
  });
}

relsim_status relsim_pure_collapse(const relsim_pure* s, int32_t apparatus, uint64_t seed,
                                   int32_t* outcome, relsim_pure** out) {
  if (!s || !outcome || !out) return invalid("null state or out pointers");
  return guarded([&] {
    CollapseResult result = collapse(s->value, apparatus, seed);
    *outcome = static_cast<int32_t>(result.outcome);
    *out = new relsim_pure{std::move(result.state)};
  });
}

relsim_status relsim_pure_pair_measures(const relsim_pure* s, int32_t i, int32_t j,
                                        double* mutual_information, double* negativity) {
  if (!s || !mutual_information || !negativity) return invalid("null state or out pointers");
  return guarded([&] {
    const PairMeasures m = pair_relation_measures(s->value, i, j);
    *mutual_information = m.mutual_information;
    *negativity = m.negativity;
  });
}

relsim_status relsim_pure_reduced_density(const relsim_pure* s, const int32_t* keep,
                                          int32_t n_keep, double* re, double* im) {
  if (!s || !keep || n_keep < 1 || !re || !im) return invalid("null state, subset, or buffers");
  return guarded([&] {
    const Eigen::MatrixXcd rho =
        reduced_density(s->value, std::vector<std::int32_t>(keep, keep + n_keep));
    const auto dim = static_cast<std::int64_t>(rho.rows());
    for (std::int64_t r = 0; r < dim; ++r)
      for (std::int64_t c = 0; c < dim; ++c) {
        re[r * dim + c] = rho(r, c).real();
        im[r * dim + c] = rho(r, c).imag();
      }
  });
}

void relsim_pure_free(relsim_pure* s) { delete s; }

/* ------------------------------------------------------------------ */

relsim_status relsim_eventlog_create(relsim_eventlog** out) {
  if (!out) return invalid("null out pointer");
  return guarded([&] { *out = new relsim_eventlog{}; });
}

size_t relsim_eventlog_size(const relsim_eventlog* log) { return log ? log->value.size() : 0; }

relsim_status relsim_eventlog_append(relsim_eventlog* log, int64_t tick, int kind, int32_t a,
                                     int32_t b, int32_t witness, int cause) {
  if (!log) return invalid("null log");
  return guarded([&] {
    RelationEvent event;
    event.tick = tick;
    event.kind = kind == RELSIM_EVENT_REMOVED ? EventKind::Removed : EventKind::Created;
    event.a = a;
    event.b = b;
    if (witness >= 0) event.witness = witness;
    event.cause = cause == RELSIM_CAUSE_PROPAGATION  ? EventCause::Propagation
                  : cause == RELSIM_CAUSE_COLLAPSE   ? EventCause::Collapse
                                                     : EventCause::Interaction;
    std::vector<RelationEvent> events = log->value.events();
    events.push_back(event);
    log->value = RelationEventLog::from_events(std::move(events));
  });
}

relsim_status relsim_eventlog_event(const relsim_eventlog* log, size_t index, int64_t* tick,
                                    int* kind, int32_t* a, int32_t* b, int32_t* witness,
                                    int* cause) {
  if (!log || !tick || !kind || !a || !b || !witness || !cause)
    return invalid("null log or out pointers");
  if (index >= log->value.size()) return invalid("event index out of range");
  const RelationEvent& e = log->value[index];
  *tick = e.tick;
  *kind = e.kind == EventKind::Removed ? RELSIM_EVENT_REMOVED : RELSIM_EVENT_CREATED;
  *a = e.a;
  *b = e.b;
  *witness = e.witness ? *e.witness : -1;
  *cause = e.cause == EventCause::Propagation ? RELSIM_CAUSE_PROPAGATION
           : e.cause == EventCause::Collapse  ? RELSIM_CAUSE_COLLAPSE
                                              : RELSIM_CAUSE_INTERACTION;
  return RELSIM_OK;
}

relsim_status relsim_eventlog_to_csv(const relsim_eventlog* log, char** out_text) {
  if (!log || !out_text) return invalid("null log or out pointer");
  return guarded([&] { *out_text = dup_string(log->value.to_csv()); });
}

relsim_status relsim_eventlog_locality_check(const relsim_eventlog* log, int* pass,
                                             size_t* offending_index) {
  if (!log || !pass) return invalid("null log or out pointer");
  return guarded([&] {
    const LocalityVerdict verdict = locality_check(log->value);
    *pass = verdict.pass ? 1 : 0;
    if (offending_index)
      *offending_index = verdict.offending_index.value_or(log->value.size());
    if (!verdict.pass) g_last_error = verdict.reason;
  });
}

relsim_status relsim_propagate_relations(const relsim_pure* before, const relsim_pure* after,
                                         int32_t interact_a, int32_t interact_b, double eps,
                                         relsim_eventlog* log) {
  if (!before || !after || !log) return invalid("null states or log");
  return guarded([&] {
    std::optional<std::pair<std::int32_t, std::int32_t>> interacting;
    if (interact_a >= 0 && interact_b >= 0) interacting = {interact_a, interact_b};
    log->value = propagate_relations(before->value, after->value, interacting,
                                     std::move(log->value), eps);
  });
}

relsim_status relsim_seed_initial_relations(const relsim_pure* s, double eps,
                                            relsim_eventlog* log) {
  if (!s || !log) return invalid("null state or log");
  return guarded([&] {
    log->value = seed_initial_relations(s->value, std::move(log->value), eps);
  });
}

void relsim_eventlog_free(relsim_eventlog* log) { delete log; }

/* ------------------------------------------------------------------ */

relsim_status relsim_run_epr(uint64_t seed, double eps, const char* out_dir) {
  if (!out_dir) return invalid("null output directory");
  return guarded([&] {
    const EprResult result = run_epr_scenario(seed, eps);
    write_epr(seed, eps, result, out_dir);
  });
}

relsim_status relsim_run_dispersion(int32_t n, int32_t mode, double mu, int32_t ticks, int scheme,
                                    const char* out_dir) {
  if (!out_dir) return invalid("null output directory");
  return guarded([&] {
    DispersionConfig config;
    config.n = n;
    config.mode = mode;
    config.mu = mu;
    config.ticks = ticks;
    config.scheme = scheme_of(scheme);
    write_dispersion(config, run_dispersion(config), out_dir);
  });
}

relsim_status relsim_run_double_slit(const char* config_text, const char* out_dir) {
  if (!out_dir) return invalid("null output directory");
  return guarded([&] {
    const DoubleSlitConfig config =
        double_slit_config_from_text(config_text ? config_text : "");
    write_double_slit(config, run_double_slit(config), out_dir);
  });
}

relsim_status relsim_run_shortcut(int32_t n, const double* w_list, int32_t n_w,
                                  const char* out_dir) {
  if (!out_dir || (n_w > 0 && !w_list) || n_w < 0) return invalid("bad conductance list");
  return guarded([&] {
    const std::vector<double> w(w_list, w_list + n_w);
    write_shortcut(n, run_shortcut(n, w), out_dir);
  });
}

relsim_status relsim_check(int32_t* failures) {
  if (!failures) return invalid("null out pointer");
  return guarded([&] { *failures = run_self_checks(std::cout); });
}

} /* extern "C" */
