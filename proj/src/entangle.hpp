#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "error.hpp"

namespace relsim {

/// Relations count as present once the pairwise mutual information exceeds
/// this threshold.
inline constexpr double kDefaultRelationEps = 1e-9;

/// Unit-norm state over n qubits, little-endian bit order (qubit 0 is the
/// least significant bit of the basis index). Spin-up is bit value 0,
/// spin-down bit value 1; apparatus pointer states are |+> = (|0>+|1>)/sqrt2
/// and |-> = (|0>-|1>)/sqrt2.
class PureState {
public:
  /// Validates length 2^n_qubits, n_qubits <= 12, finite entries and unit
  /// norm within 1e-12.
  PureState(std::int32_t n_qubits, Eigen::VectorXcd amplitudes, std::int64_t tick = 0);

  static PureState basis(std::int32_t n_qubits, std::int64_t basis_index, std::int64_t tick = 0);

  std::int32_t n_qubits() const { return n_qubits_; }
  std::int64_t dim() const { return static_cast<std::int64_t>(amplitudes_.size()); }
  std::int64_t tick() const { return tick_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  std::complex<double> amplitude(std::int64_t basis_index) const;

private:
  std::int32_t n_qubits_;
  Eigen::VectorXcd amplitudes_;
  std::int64_t tick_;
};

/// Subsystem labels of the three-party scenario built by
/// make_epr_with_apparatus.
inline constexpr std::int32_t kElectron1 = 0;
inline constexpr std::int32_t kElectron2 = 1;
inline constexpr std::int32_t kApparatus = 2;

/// Two electrons in the singlet (|ud> - |du>)/sqrt2 joined by an apparatus
/// register in |0>, at tick 0.
PureState make_epr_with_apparatus();

/// Premeasurement coupling: |u>|0> -> |u>|+>, |d>|0> -> |d>|->, extended
/// linearly (a controlled flip followed by the Hadamard rotation on the
/// apparatus). Requires the apparatus qubit in |0> within 1e-12. Advances
/// the tick by one.
PureState apply_measurement_interaction(const PureState& s, std::int32_t electron,
                                        std::int32_t apparatus);

enum class Outcome : std::int8_t { Plus = +1, Minus = -1 };

struct CollapseResult {
  Outcome outcome;
  PureState state;
  double p_plus;  // Born weight of the + branch
};

/// Projective measurement of the apparatus qubit in the +/- basis. The
/// outcome is drawn by inverse sampling of one uniform deviate from the
/// counter RNG at the given seed; the post state is the renormalized
/// projection. Advances the tick by one.
CollapseResult collapse(const PureState& s, std::int32_t apparatus, std::uint64_t seed);

/// Reduced density matrix over the kept qubits (ascending order, reduced
/// space little-endian).
Eigen::MatrixXcd reduced_density(const PureState& s, const std::vector<std::int32_t>& keep);

struct PairMeasures {
  double mutual_information;  // nats
  double negativity;
};

/// Quantum mutual information S(i) + S(j) - S(ij) and negativity (magnitude
/// sum of the negative partial-transpose eigenvalues) for one pair.
PairMeasures pair_relation_measures(const PureState& s, std::int32_t i, std::int32_t j);

/// Scale for mapping pairwise mutual information onto [0,1] relation
/// strengths (its two-qubit maximum, attained by a Bell pair).
inline const double kMaxPairMutualInformation = 2.0 * std::log(2.0);

// ---------------------------------------------------------------------------
// Relation event log
// ---------------------------------------------------------------------------

enum class EventKind : std::int8_t { Created, Removed };
enum class EventCause : std::int8_t { Interaction, Propagation, Collapse };

std::string_view event_kind_name(EventKind kind);
std::string_view event_cause_name(EventCause cause);

struct RelationEvent {
  std::int64_t tick = 0;
  EventKind kind = EventKind::Created;
  std::int32_t a = 0;
  std::int32_t b = 0;  // unordered pair, stored with a < b
  std::optional<std::int32_t> witness;
  EventCause cause = EventCause::Interaction;
};

/// Tick-stamped creations and removals of pairwise relations. append()
/// enforces non-decreasing ticks and a witness on every propagation event;
/// from_events() skips validation so that forged logs can be fed to
/// locality_check.
class RelationEventLog {
public:
  RelationEventLog() = default;
  static RelationEventLog from_events(std::vector<RelationEvent> events);

  void append(RelationEvent event);

  std::size_t size() const { return events_.size(); }
  const RelationEvent& operator[](std::size_t i) const { return events_[i]; }
  const std::vector<RelationEvent>& events() const { return events_; }

  /// Pairs related after replaying all events with tick <= t.
  std::vector<std::pair<std::int32_t, std::int32_t>> relations_at(std::int64_t t) const;
  bool related_at(std::int64_t t, std::int32_t a, std::int32_t b) const;

  /// CSV with header tick,kind,a,b,witness,cause.
  std::string to_csv() const;

private:
  std::vector<RelationEvent> events_;
};

struct LocalityVerdict {
  bool pass = true;
  std::optional<std::size_t> offending_index;
  std::string reason;
};

/// Verifies the witness discipline: ticks are non-decreasing and every
/// propagation event at tick t carries a witness w with both (a,w) and (w,b)
/// related at tick <= t-1.
LocalityVerdict locality_check(const RelationEventLog& log);

/// Relation bookkeeping for one state transition (tick t-1 -> t). A pair
/// whose mutual information rises above eps is stamped Created: at tick t
/// with cause Interaction when both parties took part in the interaction,
/// otherwise at tick t+1 with cause Propagation and a witness already
/// related to both sides. A pair falling below eps is stamped Removed at
/// tick t (cause Collapse). Throws LocalityViolation when a propagation
/// event has no valid witness.
RelationEventLog propagate_relations(const PureState& before, const PureState& after,
                                     std::optional<std::pair<std::int32_t, std::int32_t>> interacting,
                                     RelationEventLog log, double eps = kDefaultRelationEps);

/// Stamps every pair related in the given state as Created (cause
/// Interaction) at the state's tick; used to seed a log with preexisting
/// relations.
RelationEventLog seed_initial_relations(const PureState& s, RelationEventLog log,
                                        double eps = kDefaultRelationEps);

}  // namespace relsim
