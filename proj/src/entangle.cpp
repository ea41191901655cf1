#include "entangle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "rng.hpp"

namespace relsim {

namespace {

using Complex = std::complex<double>;

constexpr double kNormTolerance = 1e-12;
constexpr std::int32_t kMaxQubits = 12;

void require_qubit(const PureState& s, std::int32_t q) {
  if (q < 0 || q >= s.n_qubits())
    fail(ErrorCode::InvalidArgument, "qubit index " + std::to_string(q) + " out of range");
}

}  // namespace

PureState::PureState(std::int32_t n_qubits, Eigen::VectorXcd amplitudes, std::int64_t tick)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)), tick_(tick) {
  if (n_qubits_ < 1) fail(ErrorCode::InvalidArgument, "need at least one qubit");
  if (n_qubits_ > kMaxQubits)
    fail(ErrorCode::TooLarge, "at most 12 qubits supported, got " + std::to_string(n_qubits_));
  if (amplitudes_.size() != (std::int64_t{1} << n_qubits_))
    fail(ErrorCode::ShapeError, "amplitude vector length must be 2^n_qubits");
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i)
    if (!std::isfinite(amplitudes_(i).real()) || !std::isfinite(amplitudes_(i).imag()))
      fail(ErrorCode::InvalidArgument, "non-finite amplitude");
  if (std::abs(amplitudes_.norm() - 1.0) > kNormTolerance)
    fail(ErrorCode::InvalidArgument, "state norm deviates from 1 beyond 1e-12");
}

PureState PureState::basis(std::int32_t n_qubits, std::int64_t basis_index, std::int64_t tick) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    fail(ErrorCode::TooLarge, "qubit count must lie in [1, 12]");
  if (basis_index < 0 || basis_index >= (std::int64_t{1} << n_qubits))
    fail(ErrorCode::InvalidArgument, "basis index out of range");
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(std::int64_t{1} << n_qubits);
  amp(basis_index) = 1.0;
  return PureState(n_qubits, std::move(amp), tick);
}

std::complex<double> PureState::amplitude(std::int64_t basis_index) const {
  if (basis_index < 0 || basis_index >= dim())
    fail(ErrorCode::InvalidArgument, "basis index out of range");
  return amplitudes_(basis_index);
}

PureState make_epr_with_apparatus() {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(8);
  // (|u>_1 |d>_2 - |d>_1 |u>_2) |0>_3 / sqrt2 with u=0, d=1:
  amp(0b010) = inv_sqrt2;   // e1 up, e2 down
  amp(0b001) = -inv_sqrt2;  // e1 down, e2 up
  return PureState(3, std::move(amp), 0);
}

PureState apply_measurement_interaction(const PureState& s, std::int32_t electron,
                                        std::int32_t apparatus) {
  require_qubit(s, electron);
  require_qubit(s, apparatus);
  if (electron == apparatus)
    fail(ErrorCode::InvalidArgument, "electron and apparatus must be distinct");

  const std::int64_t app_bit = std::int64_t{1} << apparatus;
  for (std::int64_t i = 0; i < s.dim(); ++i)
    if ((i & app_bit) && std::abs(s.amplitudes()(i)) > kNormTolerance)
      fail(ErrorCode::ApparatusNotInitialized, "apparatus qubit is not in |0>");

  const std::int64_t electron_bit = std::int64_t{1} << electron;
  Eigen::VectorXcd amp = s.amplitudes();

  // Controlled flip of the apparatus on electron spin-down.
  for (std::int64_t i = 0; i < s.dim(); ++i)
    if ((i & electron_bit) && !(i & app_bit)) std::swap(amp(i), amp(i | app_bit));

  // Hadamard rotation of the apparatus: |0> -> |+>, |1> -> |->.
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::int64_t i = 0; i < s.dim(); ++i) {
    if (i & app_bit) continue;
    const Complex a0 = amp(i);
    const Complex a1 = amp(i | app_bit);
    amp(i) = (a0 + a1) * inv_sqrt2;
    amp(i | app_bit) = (a0 - a1) * inv_sqrt2;
  }
  return PureState(s.n_qubits(), std::move(amp), s.tick() + 1);
}

CollapseResult collapse(const PureState& s, std::int32_t apparatus, std::uint64_t seed) {
  require_qubit(s, apparatus);
  const std::int64_t app_bit = std::int64_t{1} << apparatus;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  Eigen::VectorXcd plus = Eigen::VectorXcd::Zero(s.dim());
  Eigen::VectorXcd minus = Eigen::VectorXcd::Zero(s.dim());
  for (std::int64_t i = 0; i < s.dim(); ++i) {
    if (i & app_bit) continue;
    const Complex a0 = s.amplitudes()(i);
    const Complex a1 = s.amplitudes()(i | app_bit);
    const Complex c_plus = (a0 + a1) * inv_sqrt2;
    const Complex c_minus = (a0 - a1) * inv_sqrt2;
    plus(i) = c_plus * inv_sqrt2;
    plus(i | app_bit) = c_plus * inv_sqrt2;
    minus(i) = c_minus * inv_sqrt2;
    minus(i | app_bit) = -c_minus * inv_sqrt2;
  }
  const double p_plus = plus.squaredNorm();

  CounterRng rng(seed);
  const bool take_plus = rng.next_double() < p_plus;
  Eigen::VectorXcd& branch = take_plus ? plus : minus;
  branch /= branch.norm();
  return {take_plus ? Outcome::Plus : Outcome::Minus,
          PureState(s.n_qubits(), std::move(branch), s.tick() + 1), p_plus};
}

Eigen::MatrixXcd reduced_density(const PureState& s, const std::vector<std::int32_t>& keep) {
  if (keep.empty()) fail(ErrorCode::InvalidSubset, "kept subset must be non-empty");
  std::set<std::int32_t> unique(keep.begin(), keep.end());
  if (unique.size() != keep.size()) fail(ErrorCode::InvalidSubset, "duplicate qubit in subset");
  for (std::int32_t q : keep) require_qubit(s, q);

  std::vector<std::int32_t> kept(unique.begin(), unique.end());
  std::vector<std::int32_t> traced;
  for (std::int32_t q = 0; q < s.n_qubits(); ++q)
    if (!unique.count(q)) traced.push_back(q);

  const std::int64_t kd = std::int64_t{1} << kept.size();
  const std::int64_t td = std::int64_t{1} << traced.size();
  auto expand = [](const std::vector<std::int32_t>& qubits, std::int64_t packed) {
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < qubits.size(); ++i)
      if (packed & (std::int64_t{1} << i)) idx |= std::int64_t{1} << qubits[i];
    return idx;
  };

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(kd, kd);
  for (std::int64_t r = 0; r < kd; ++r) {
    const std::int64_t r_base = expand(kept, r);
    for (std::int64_t c = 0; c < kd; ++c) {
      const std::int64_t c_base = expand(kept, c);
      Complex sum(0.0, 0.0);
      for (std::int64_t e = 0; e < td; ++e) {
        const std::int64_t env = expand(traced, e);
        sum += s.amplitudes()(r_base | env) * std::conj(s.amplitudes()(c_base | env));
      }
      rho(r, c) = sum;
    }
  }
  return rho;
}

namespace {

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::SolverError, "density eigendecomposition failed");
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (lambda > 1e-15) entropy -= lambda * std::log(lambda);
  }
  return entropy;
}

}  // namespace

PairMeasures pair_relation_measures(const PureState& s, std::int32_t i, std::int32_t j) {
  require_qubit(s, i);
  require_qubit(s, j);
  if (i == j) fail(ErrorCode::InvalidArgument, "pair needs two distinct qubits");

  const Eigen::MatrixXcd rho_i = reduced_density(s, {i});
  const Eigen::MatrixXcd rho_j = reduced_density(s, {j});
  const Eigen::MatrixXcd rho_ij = reduced_density(s, {std::min(i, j), std::max(i, j)});

  double mi = von_neumann_entropy(rho_i) + von_neumann_entropy(rho_j) -
              von_neumann_entropy(rho_ij);
  if (mi < 0.0 && mi > -1e-12) mi = 0.0;

  // Partial transpose over the second qubit of the 4x4 pair density.
  Eigen::MatrixXcd pt(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const int r_first = r & 1, r_second = r >> 1;
      const int c_first = c & 1, c_second = c >> 1;
      pt(r, c) = rho_ij((c_second << 1) | r_first, (r_second << 1) | c_first);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(pt);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::SolverError, "partial transpose eigendecomposition failed");
  double negativity = 0.0;
  for (Eigen::Index k = 0; k < 4; ++k)
    if (solver.eigenvalues()(k) < 0.0) negativity -= solver.eigenvalues()(k);

  return {mi, negativity};
}

// ---------------------------------------------------------------------------
// Relation event log
// ---------------------------------------------------------------------------

std::string_view event_kind_name(EventKind kind) {
  return kind == EventKind::Created ? "Created" : "Removed";
}

std::string_view event_cause_name(EventCause cause) {
  switch (cause) {
    case EventCause::Interaction: return "Interaction";
    case EventCause::Propagation: return "Propagation";
    case EventCause::Collapse: return "Collapse";
  }
  return "?";
}

RelationEventLog RelationEventLog::from_events(std::vector<RelationEvent> events) {
  RelationEventLog log;
  log.events_ = std::move(events);
  for (auto& e : log.events_)
    if (e.a > e.b) std::swap(e.a, e.b);
  return log;
}

void RelationEventLog::append(RelationEvent event) {
  if (event.a == event.b) fail(ErrorCode::InvalidArgument, "relation needs two distinct parties");
  if (event.a > event.b) std::swap(event.a, event.b);
  if (!events_.empty() && event.tick < events_.back().tick)
    fail(ErrorCode::InvalidArgument, "event ticks must be non-decreasing");
  if (event.cause == EventCause::Propagation && event.kind == EventKind::Created &&
      !event.witness)
    fail(ErrorCode::LocalityViolation, "propagation event without witness");
  events_.push_back(event);
}

std::vector<std::pair<std::int32_t, std::int32_t>> RelationEventLog::relations_at(
    std::int64_t t) const {
  std::set<std::pair<std::int32_t, std::int32_t>> related;
  for (const auto& e : events_) {
    if (e.tick > t) continue;
    if (e.kind == EventKind::Created)
      related.insert({e.a, e.b});
    else
      related.erase({e.a, e.b});
  }
  return {related.begin(), related.end()};
}

bool RelationEventLog::related_at(std::int64_t t, std::int32_t a, std::int32_t b) const {
  if (a > b) std::swap(a, b);
  bool related = false;
  for (const auto& e : events_) {
    if (e.tick > t) continue;
    if (e.a == a && e.b == b) related = (e.kind == EventKind::Created);
  }
  return related;
}

std::string RelationEventLog::to_csv() const {
  std::ostringstream out;
  out << "tick,kind,a,b,witness,cause\n";
  for (const auto& e : events_) {
    out << e.tick << ',' << event_kind_name(e.kind) << ',' << e.a << ',' << e.b << ',';
    if (e.witness) out << *e.witness;
    out << ',' << event_cause_name(e.cause) << '\n';
  }
  return out.str();
}

LocalityVerdict locality_check(const RelationEventLog& log) {
  std::int64_t last_tick = std::numeric_limits<std::int64_t>::min();
  for (std::size_t i = 0; i < log.size(); ++i) {
    const RelationEvent& e = log[i];
    if (e.tick < last_tick)
      return {false, i, "event ticks decrease"};
    last_tick = e.tick;
    if (e.kind != EventKind::Created || e.cause != EventCause::Propagation) continue;
    if (!e.witness)
      return {false, i, "propagation event without witness"};
    const std::int32_t w = *e.witness;
    if (w == e.a || w == e.b)
      return {false, i, "witness coincides with a related party"};
    if (!log.related_at(e.tick - 1, e.a, w) || !log.related_at(e.tick - 1, w, e.b))
      return {false, i, "witness chain not established before the event"};
  }
  return {};
}

RelationEventLog propagate_relations(const PureState& before, const PureState& after,
                                     std::optional<std::pair<std::int32_t, std::int32_t>> interacting,
                                     RelationEventLog log, double eps) {
  if (before.n_qubits() != after.n_qubits())
    fail(ErrorCode::ShapeError, "states describe different systems");
  if (after.tick() != before.tick() + 1)
    fail(ErrorCode::InvalidArgument, "after-state tick must be before-state tick + 1");
  if (interacting) {
    require_qubit(before, interacting->first);
    require_qubit(before, interacting->second);
  }
  const std::int64_t t = after.tick();

  auto is_interacting = [&](std::int32_t q) {
    return interacting && (interacting->first == q || interacting->second == q);
  };

  struct PairDelta {
    std::int32_t a, b;
    bool rose;
  };
  std::vector<PairDelta> deltas;
  for (std::int32_t a = 0; a < before.n_qubits(); ++a)
    for (std::int32_t b = a + 1; b < before.n_qubits(); ++b) {
      const double mi_before = pair_relation_measures(before, a, b).mutual_information;
      const double mi_after = pair_relation_measures(after, a, b).mutual_information;
      if (mi_before <= eps && mi_after > eps) deltas.push_back({a, b, true});
      if (mi_before > eps && mi_after <= eps) deltas.push_back({a, b, false});
    }

  std::vector<PairDelta> propagated;
  for (const auto& d : deltas) {
    if (!d.rose) continue;
    if (is_interacting(d.a) && is_interacting(d.b))
      log.append({t, EventKind::Created, d.a, d.b, std::nullopt, EventCause::Interaction});
    else
      propagated.push_back(d);
  }
  for (const auto& d : deltas)
    if (!d.rose) log.append({t, EventKind::Removed, d.a, d.b, std::nullopt, EventCause::Collapse});

  for (const auto& d : propagated) {
    std::optional<std::int32_t> witness;
    for (std::int32_t w = 0; w < before.n_qubits(); ++w) {
      if (w == d.a || w == d.b) continue;
      if (log.related_at(t, d.a, w) && log.related_at(t, w, d.b)) {
        witness = w;
        break;
      }
    }
    if (!witness)
      fail(ErrorCode::LocalityViolation,
           "pair (" + std::to_string(d.a) + "," + std::to_string(d.b) +
               ") became related without a witness");
    log.append({t + 1, EventKind::Created, d.a, d.b, witness, EventCause::Propagation});
  }
  return log;
}

RelationEventLog seed_initial_relations(const PureState& s, RelationEventLog log, double eps) {
  for (std::int32_t a = 0; a < s.n_qubits(); ++a)
    for (std::int32_t b = a + 1; b < s.n_qubits(); ++b)
      if (pair_relation_measures(s, a, b).mutual_information > eps)
        log.append({s.tick(), EventKind::Created, a, b, std::nullopt, EventCause::Interaction});
  return log;
}

}  // namespace relsim
