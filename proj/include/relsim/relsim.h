#ifndef RELSIM_H
#define RELSIM_H

/*
 * relsim - deterministic simulator for quantum dynamics on relational graphs.
 *
 * C API of the shared library. All functions return relsim_status; on any
 * status other than RELSIM_OK a thread-local message is available through
 * relsim_last_error(). Objects are opaque handles released with their
 * matching _free function. Buffers returned through out-parameters are
 * malloc-allocated and released with relsim_free().
 *
 * Conventions:
 *   - spatial vertices and quantum objects use dense 0-based indices
 *   - qubit registers are little-endian (qubit 0 = least significant bit);
 *     spin-up is bit value 0, spin-down bit value 1
 *   - schemes: 0 = euler (I + i*mu*D per tick), 1 = cayley (unitary
 *     rational step), 2 = exact (spectral exponential, dense, <= 4096
 *     vertices)
 *   - CSV artifacts carry a mandatory header row and 17-significant-digit
 *     floats
 *   - the RELSIM_MAX_VERTICES environment variable overrides the default
 *     graph size cap of 10^6 vertices
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RELSIM_BUILD)
#    define RELSIM_API __declspec(dllexport)
#  else
#    define RELSIM_API __declspec(dllimport)
#  endif
#else
#  define RELSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum relsim_status {
  RELSIM_OK = 0,
  RELSIM_ERR_INVALID_ARGUMENT = 1,
  RELSIM_ERR_INVALID_DIMENSION = 2,
  RELSIM_ERR_TOO_LARGE = 3,
  RELSIM_ERR_SELF_LOOP = 4,
  RELSIM_ERR_PARSE = 5,
  RELSIM_ERR_UNKNOWN_VERTEX = 6,
  RELSIM_ERR_INVALID_STRENGTH = 7,
  RELSIM_ERR_SHAPE = 8,
  RELSIM_ERR_SOLVER = 9,
  RELSIM_ERR_UNREACHABLE = 10,
  RELSIM_ERR_TOO_LARGE_FOR_ENUMERATION = 11,
  RELSIM_ERR_APPARATUS_NOT_INITIALIZED = 12,
  RELSIM_ERR_INVALID_SUBSET = 13,
  RELSIM_ERR_LOCALITY_VIOLATION = 14,
  RELSIM_ERR_INVALID_GEOMETRY = 15,
  RELSIM_ERR_IO = 16,
  RELSIM_ERR_INTERNAL = 17
} relsim_status;

enum {
  RELSIM_SCHEME_EULER = 0,
  RELSIM_SCHEME_CAYLEY = 1,
  RELSIM_SCHEME_EXACT = 2
};

/* Library version string, embedded in every scenario manifest. */
RELSIM_API const char* relsim_version(void);

/* Thread-local message for the most recent failure on this thread. */
RELSIM_API const char* relsim_last_error(void);

/* Releases any buffer returned through a text or byte out-parameter. */
RELSIM_API void relsim_free(void* buffer);

/* ------------------------------------------------------------------ */
/* Relational graphs                                                   */
/* ------------------------------------------------------------------ */

typedef struct relsim_graph relsim_graph;

/* Nearest-neighbor lattice over n_dims extents (row-major vertex order,
 * first extent slowest); periodic != 0 wraps every axis. */
RELSIM_API relsim_status relsim_graph_lattice(const int64_t* dims, int32_t n_dims, int periodic,
                                              relsim_graph** out);

/* Parses an edge-list document: one "u v" pair per line, '#' comments,
 * duplicate edges collapse, vertex count is max index + 1. */
RELSIM_API relsim_status relsim_graph_from_edge_list(const char* text, relsim_graph** out);

/* Serializes as sorted "u v" lines (LF newlines). */
RELSIM_API relsim_status relsim_graph_to_edge_list(const relsim_graph* g, char** out_text);

RELSIM_API int32_t relsim_graph_vertex_count(const relsim_graph* g);
RELSIM_API int64_t relsim_graph_edge_count(const relsim_graph* g);
RELSIM_API relsim_status relsim_graph_degree(const relsim_graph* g, int32_t v, int32_t* out);
RELSIM_API int relsim_graph_is_connected(const relsim_graph* g);
RELSIM_API void relsim_graph_free(relsim_graph* g);

/* ------------------------------------------------------------------ */
/* Generalized adjacency (objects + points)                            */
/* ------------------------------------------------------------------ */

typedef struct relsim_genadj relsim_genadj;

RELSIM_API relsim_status relsim_genadj_create(const relsim_graph* g, relsim_genadj** out);

/* Appends one quantum object. vertices/re/im describe n_entries sparse
 * amplitudes; unlisted vertices get amplitude zero. normalize != 0 rescales
 * the row to unit L2 norm. */
RELSIM_API relsim_status relsim_genadj_attach_particle(relsim_genadj* ga, const int32_t* vertices,
                                                       const double* re, const double* im,
                                                       int32_t n_entries, int normalize);

/* Sets the symmetric entanglement entry of an object pair; strength in
 * [0,1], 0 removes the relation, last write wins. */
RELSIM_API relsim_status relsim_genadj_add_entanglement(relsim_genadj* ga, int32_t e1, int32_t e2,
                                                        double strength);

RELSIM_API int32_t relsim_genadj_object_count(const relsim_genadj* ga);

/* Canonical byte encoding ("RELADJ01" magic, little-endian layout,
 * amplitudes quantized to 1e-12). Identical for any relabeling of the
 * quantum objects. */
RELSIM_API relsim_status relsim_genadj_canonical_form(const relsim_genadj* ga, uint8_t** out_bytes,
                                                      size_t* out_len);

RELSIM_API void relsim_genadj_free(relsim_genadj* ga);

/* ------------------------------------------------------------------ */
/* Wave states and evolution                                           */
/* ------------------------------------------------------------------ */

typedef struct relsim_state relsim_state;

/* State from explicit amplitudes (length = vertex count of g). */
RELSIM_API relsim_status relsim_state_create(const relsim_graph* g, const double* re,
                                             const double* im, relsim_state** out);

/* Unit amplitude on one vertex, zero elsewhere. */
RELSIM_API relsim_status relsim_state_localized(const relsim_graph* g, int32_t vertex,
                                                relsim_state** out);

RELSIM_API int32_t relsim_state_size(const relsim_state* s);
RELSIM_API int64_t relsim_state_tick(const relsim_state* s);
RELSIM_API double relsim_state_norm(const relsim_state* s);

/* Copies amplitudes into caller buffers of length n (= state size). */
RELSIM_API relsim_status relsim_state_amplitudes(const relsim_state* s, double* re, double* im,
                                                 int32_t n);

/* Advances the state in place by the given number of ticks. */
RELSIM_API relsim_status relsim_evolve(const relsim_graph* g, relsim_state* s, int scheme,
                                       double mu, int64_t ticks);

RELSIM_API void relsim_state_free(relsim_state* s);

/* Propagator matrix K with psi(t) = K psi(0), written row-major into
 * caller buffers of length n*n. */
RELSIM_API relsim_status relsim_kernel(const relsim_graph* g, double mu, int64_t t, int scheme,
                                       double* re, double* im, int32_t n);

/* Walk-sum propagator entry (explicit enumeration over length-t walks from
 * y to x; stay weighs 1 - i*mu*deg, hop weighs i*mu). t <= 12 and at most
 * 12 vertices. */
RELSIM_API relsim_status relsim_kernel_path_sum(const relsim_graph* g, double mu, int32_t t,
                                                int32_t x, int32_t y, double* re, double* im);

/* ------------------------------------------------------------------ */
/* Distances                                                           */
/* ------------------------------------------------------------------ */

RELSIM_API relsim_status relsim_distance_hops(const relsim_graph* g, int32_t x, int32_t y,
                                              int32_t* out);

/* Effective resistance with unit conductance per relation. */
RELSIM_API relsim_status relsim_distance_resistance(const relsim_graph* g, int32_t x, int32_t y,
                                                    double* out);

typedef struct relsim_shortcut_report {
  int32_t hops_before;
  int32_t hops_after;
  double resistance_before;
  double resistance_after;
  double rel_change; /* fractional drop of the resistance distance */
} relsim_shortcut_report;

/* Impact of one chord (u, v) at conductance w on both distances for the
 * pair (x, y). two_hop != 0 models the chord as two edges in series. */
RELSIM_API relsim_status relsim_shortcut_impact(const relsim_graph* g, int32_t x, int32_t y,
                                                int32_t u, int32_t v, double w, int two_hop,
                                                relsim_shortcut_report* out);

/* ------------------------------------------------------------------ */
/* Qubit registers and relation events                                 */
/* ------------------------------------------------------------------ */

typedef struct relsim_pure relsim_pure;
typedef struct relsim_eventlog relsim_eventlog;

enum { RELSIM_EVENT_CREATED = 0, RELSIM_EVENT_REMOVED = 1 };
enum {
  RELSIM_CAUSE_INTERACTION = 0,
  RELSIM_CAUSE_PROPAGATION = 1,
  RELSIM_CAUSE_COLLAPSE = 2
};

/* Unit-norm register from explicit amplitudes of length 2^n_qubits
 * (validated to 1e-12); n_qubits <= 12. */
RELSIM_API relsim_status relsim_pure_create(int32_t n_qubits, const double* re, const double* im,
                                            int64_t tick, relsim_pure** out);

/* Singlet pair (subsystems 0 and 1) plus an apparatus register (subsystem
 * 2) in |0>, at tick 0. */
RELSIM_API relsim_status relsim_pure_epr(relsim_pure** out);

RELSIM_API int32_t relsim_pure_qubit_count(const relsim_pure* s);
RELSIM_API int64_t relsim_pure_dim(const relsim_pure* s);
RELSIM_API int64_t relsim_pure_tick(const relsim_pure* s);
RELSIM_API relsim_status relsim_pure_amplitudes(const relsim_pure* s, double* re, double* im,
                                                int64_t dim);

/* Premeasurement coupling |u>|0> -> |u>|+>, |d>|0> -> |d>|->; requires the
 * apparatus qubit in |0>. Advances the tick. */
RELSIM_API relsim_status relsim_pure_measure_interaction(const relsim_pure* s, int32_t electron,
                                                         int32_t apparatus, relsim_pure** out);

/* Projective +/- measurement of the apparatus qubit; outcome (+1 or -1) is
 * drawn from the counter RNG at the seed. Advances the tick. */
RELSIM_API relsim_status relsim_pure_collapse(const relsim_pure* s, int32_t apparatus,
                                              uint64_t seed, int32_t* outcome, relsim_pure** out);

/* Quantum mutual information (nats) and negativity of one subsystem pair. */
RELSIM_API relsim_status relsim_pure_pair_measures(const relsim_pure* s, int32_t i, int32_t j,
                                                   double* mutual_information, double* negativity);

/* Reduced density matrix over n_keep qubits, row-major 2^n_keep square,
 * written into caller buffers of length 4^n_keep. */
RELSIM_API relsim_status relsim_pure_reduced_density(const relsim_pure* s, const int32_t* keep,
                                                     int32_t n_keep, double* re, double* im);

RELSIM_API void relsim_pure_free(relsim_pure* s);

RELSIM_API relsim_status relsim_eventlog_create(relsim_eventlog** out);
RELSIM_API size_t relsim_eventlog_size(const relsim_eventlog* log);

/* Unchecked append (witness < 0 means none); relsim_eventlog_locality_check
 * validates the discipline. */
RELSIM_API relsim_status relsim_eventlog_append(relsim_eventlog* log, int64_t tick, int kind,
                                                int32_t a, int32_t b, int32_t witness, int cause);

/* Event fields by index; *witness is -1 when absent. */
RELSIM_API relsim_status relsim_eventlog_event(const relsim_eventlog* log, size_t index,
                                               int64_t* tick, int* kind, int32_t* a, int32_t* b,
                                               int32_t* witness, int* cause);

/* CSV document with header tick,kind,a,b,witness,cause. */
RELSIM_API relsim_status relsim_eventlog_to_csv(const relsim_eventlog* log, char** out_text);

/* pass = 1 when every propagation event has a witness chain established
 * before its tick; otherwise pass = 0 and *offending_index points at the
 * first bad event. */
RELSIM_API relsim_status relsim_eventlog_locality_check(const relsim_eventlog* log, int* pass,
                                                        size_t* offending_index);

/* Relation bookkeeping for one state transition (after tick = before tick
 * + 1). Pairs whose mutual information rises above eps are stamped Created
 * (at the transition tick when both parties interacted, one tick later with
 * a witness otherwise); pairs falling below eps are stamped Removed. Pass
 * interact_a = interact_b = -1 for a transition without interaction. */
RELSIM_API relsim_status relsim_propagate_relations(const relsim_pure* before,
                                                    const relsim_pure* after, int32_t interact_a,
                                                    int32_t interact_b, double eps,
                                                    relsim_eventlog* log);

/* Stamps every pair related in s (mutual information > eps) as Created at
 * the state's tick. */
RELSIM_API relsim_status relsim_seed_initial_relations(const relsim_pure* s, double eps,
                                                       relsim_eventlog* log);

RELSIM_API void relsim_eventlog_free(relsim_eventlog* log);

/* ------------------------------------------------------------------ */
/* Scenario runners (CSV + manifest per out_dir)                       */
/* ------------------------------------------------------------------ */

/* Singlet/apparatus pipeline: measures.csv, events.csv, summary.csv. */
RELSIM_API relsim_status relsim_run_epr(uint64_t seed, double eps, const char* out_dir);

/* Plane-wave mode on the n-ring: dispersion.csv, summary.csv. */
RELSIM_API relsim_status relsim_run_dispersion(int32_t n, int32_t mode, double mu, int32_t ticks,
                                               int scheme, const char* out_dir);

/* Two-slit lattice interference: screen.csv, summary.csv. config_text uses
 * "key = value" lines (empty or NULL keeps every default); later lines win. */
RELSIM_API relsim_status relsim_run_double_slit(const char* config_text, const char* out_dir);

/* Chord conductance scan across the antipodal pair of the n-ring:
 * shortcut.csv. */
RELSIM_API relsim_status relsim_run_shortcut(int32_t n, const double* w_list, int32_t n_w,
                                             const char* out_dir);

/* ------------------------------------------------------------------ */
/* Built-in invariant suite                                            */
/* ------------------------------------------------------------------ */

/* Prints one line per check to stdout; *failures receives the number of
 * failed checks. */
RELSIM_API relsim_status relsim_check(int32_t* failures);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RELSIM_H */
