#include "experiments.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "textio.hpp"

namespace relsim {

namespace {

using Complex = std::complex<double>;

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
}

double parse_double_value(const std::string& key, const std::string& value) {
  char* end = nullptr;
  double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    fail(ErrorCode::ParseError, "config key '" + key + "': bad number '" + value + "'");
  return v;
}

std::int64_t parse_int_value(const std::string& key, const std::string& value) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    fail(ErrorCode::ParseError, "config key '" + key + "': bad integer '" + value + "'");
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Ring dispersion
// ---------------------------------------------------------------------------

DispersionResult run_dispersion(const DispersionConfig& config) {
  if (config.n < 8) fail(ErrorCode::InvalidArgument, "ring size must be >= 8");
  if (config.mode < 0 || config.mode >= config.n)
    fail(ErrorCode::InvalidArgument, "mode must lie in [0, n)");
  if (config.ticks < 1) fail(ErrorCode::InvalidArgument, "need at least one tick");

  const RelationalGraph ring = RelationalGraph::lattice({config.n}, true);
  const Laplacian lap(ring);
  const double k = 2.0 * std::numbers::pi * config.mode / config.n;

  Eigen::VectorXcd amp(config.n);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(config.n));
  for (std::int32_t j = 0; j < config.n; ++j)
    amp(j) = std::exp(Complex(0.0, k * j)) * inv_sqrt_n;
  const Eigen::VectorXcd initial = amp;

  const Stepper stepper(lap, config.scheme, config.mu);
  WaveState psi{amp, 0};

  DispersionResult result;
  result.k = k;
  result.overlaps.reserve(static_cast<std::size_t>(config.ticks) + 1);
  result.phases.reserve(static_cast<std::size_t>(config.ticks) + 1);
  result.norms.reserve(static_cast<std::size_t>(config.ticks) + 1);

  double prev_phase = 0.0;
  for (std::int32_t t = 0; t <= config.ticks; ++t) {
    if (t > 0) psi = stepper.step(psi);
    const Complex overlap = initial.dot(psi.amplitudes);  // conjugates the initial state
    result.overlaps.push_back(overlap);
    double phase = std::abs(overlap) > 0.0 ? std::arg(overlap) : 0.0;
    if (t > 0) {
      // unwrap relative to the previous tick
      while (phase - prev_phase > std::numbers::pi) phase -= 2.0 * std::numbers::pi;
      while (phase - prev_phase < -std::numbers::pi) phase += 2.0 * std::numbers::pi;
    }
    result.phases.push_back(phase);
    prev_phase = phase;
    result.norms.push_back(psi.norm());
  }

  // Least-squares slope of phase vs tick.
  const auto n_pts = static_cast<double>(result.phases.size());
  double sum_t = 0.0, sum_tt = 0.0, sum_p = 0.0, sum_tp = 0.0;
  for (std::size_t t = 0; t < result.phases.size(); ++t) {
    sum_t += static_cast<double>(t);
    sum_tt += static_cast<double>(t) * static_cast<double>(t);
    sum_p += result.phases[t];
    sum_tp += static_cast<double>(t) * result.phases[t];
  }
  result.fitted_phase_per_tick = (n_pts * sum_tp - sum_t * sum_p) / (n_pts * sum_tt - sum_t * sum_t);

  result.lattice_phase_per_tick = -config.mu * (2.0 - 2.0 * std::cos(k));
  result.lattice_deviation = std::abs(result.fitted_phase_per_tick - result.lattice_phase_per_tick);
  result.continuum_phase_per_tick = -config.mu * k * k;
  result.continuum_rel_deviation =
      config.mode == 0
          ? 0.0
          : std::abs(result.fitted_phase_per_tick - result.continuum_phase_per_tick) /
                std::abs(result.continuum_phase_per_tick);
  result.norm_growth = result.norms.back() - 1.0;
  return result;
}

void write_dispersion(const DispersionConfig& config, const DispersionResult& result,
                      const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);

  std::ostringstream csv;
  csv << "tick,overlap_re,overlap_im,phase,norm\n";
  for (std::size_t t = 0; t < result.overlaps.size(); ++t)
    csv << t << ',' << format_double(result.overlaps[t].real()) << ','
        << format_double(result.overlaps[t].imag()) << ',' << format_double(result.phases[t])
        << ',' << format_double(result.norms[t]) << '\n';
  write_text_file(out_dir / "dispersion.csv", csv.str());

  std::ostringstream summary;
  summary << "key,value\n";
  summary << "n," << config.n << '\n';
  summary << "mode," << config.mode << '\n';
  summary << "k," << format_double(result.k) << '\n';
  summary << "mu," << format_double(config.mu) << '\n';
  summary << "ticks," << config.ticks << '\n';
  summary << "scheme," << scheme_name(config.scheme) << '\n';
  summary << "fitted_phase_per_tick," << format_double(result.fitted_phase_per_tick) << '\n';
  summary << "lattice_phase_per_tick," << format_double(result.lattice_phase_per_tick) << '\n';
  summary << "lattice_deviation," << format_double(result.lattice_deviation) << '\n';
  summary << "continuum_phase_per_tick," << format_double(result.continuum_phase_per_tick) << '\n';
  summary << "continuum_rel_deviation," << format_double(result.continuum_rel_deviation) << '\n';
  summary << "norm_growth," << format_double(result.norm_growth) << '\n';
  write_text_file(out_dir / "summary.csv", summary.str());

  std::map<std::string, std::string> kv{
      {"n", std::to_string(config.n)},
      {"mode", std::to_string(config.mode)},
      {"mu", format_double(config.mu)},
      {"ticks", std::to_string(config.ticks)},
      {"scheme", std::string(scheme_name(config.scheme))},
  };
  write_manifest(out_dir, "dispersion", std::nullopt, serialize_key_values(kv));
}

// ---------------------------------------------------------------------------
// Double slit
// ---------------------------------------------------------------------------

void DoubleSlitConfig::validate() const {
  if (nx < 8 || ny < 5) fail(ErrorCode::InvalidGeometry, "lattice too small");
  if (static_cast<std::int64_t>(nx) * ny > RelationalGraph::max_vertices())
    fail(ErrorCode::TooLarge, "lattice exceeds vertex cap");
  if (barrier_x <= 0 || barrier_x >= nx - 1)
    fail(ErrorCode::InvalidGeometry, "barrier must be interior");
  if (slit_y1 == slit_y2) fail(ErrorCode::InvalidGeometry, "slits coincide");
  if (slit_y1 < 0 || slit_y1 >= ny || slit_y2 < 0 || slit_y2 >= ny)
    fail(ErrorCode::InvalidGeometry, "slit row out of range");
  if (source_x < 0 || source_x >= barrier_x)
    fail(ErrorCode::InvalidGeometry, "source must sit before the barrier");
  if (screen_x <= barrier_x || screen_x >= nx)
    fail(ErrorCode::InvalidGeometry, "screen must sit behind the barrier");
  if (source_y < 0 || source_y >= ny) fail(ErrorCode::InvalidGeometry, "source row out of range");
  if (!(source_sigma > 0.0)) fail(ErrorCode::InvalidGeometry, "source width must be > 0");
  if (ticks < 1) fail(ErrorCode::InvalidArgument, "need at least one tick");
  if (!(min_peak_fraction >= 0.0 && min_peak_fraction < 1.0))
    fail(ErrorCode::InvalidArgument, "min_peak_fraction must lie in [0,1)");
}

std::string DoubleSlitConfig::canonical_text() const {
  std::map<std::string, std::string> kv{
      {"nx", std::to_string(nx)},
      {"ny", std::to_string(ny)},
      {"barrier_x", std::to_string(barrier_x)},
      {"slit_y1", std::to_string(slit_y1)},
      {"slit_y2", std::to_string(slit_y2)},
      {"source_x", std::to_string(source_x)},
      {"source_y", std::to_string(source_y)},
      {"source_sigma", format_double(source_sigma)},
      {"source_kx", format_double(source_kx)},
      {"mu", format_double(mu)},
      {"ticks", std::to_string(ticks)},
      {"screen_x", std::to_string(screen_x)},
      {"min_peak_fraction", format_double(min_peak_fraction)},
  };
  return serialize_key_values(kv);
}

DoubleSlitConfig double_slit_config_from_text(std::string_view kv_text) {
  DoubleSlitConfig config;
  for (const auto& [key, value] : parse_key_values(kv_text)) {
    if (key == "nx") config.nx = static_cast<std::int32_t>(parse_int_value(key, value));
    else if (key == "ny") config.ny = static_cast<std::int32_t>(parse_int_value(key, value));
    else if (key == "barrier_x") config.barrier_x = static_cast<std::int32_t>(parse_int_value(key, value));
    else if (key == "slit_y1") config.slit_y1 = static_cast<std::int32_t>(parse_int_value(key, value));
    else if (key == "slit_y2") config.slit_y2 = static_cast<std::int32_t>(parse_int_value(key, value));
    else if (key == "source_x") config.source_x = static_cast<std::int32_t>(parse_int_value(key, value));
    else if (key == "source_y") config.source_y = static_cast<std::int32_t>(parse_int_value(key, value));
    else if (key == "source_sigma") config.source_sigma = parse_double_value(key, value);
    else if (key == "source_kx") config.source_kx = parse_double_value(key, value);
    else if (key == "mu") config.mu = parse_double_value(key, value);
    else if (key == "ticks") config.ticks = static_cast<std::int32_t>(parse_int_value(key, value));
    else if (key == "screen_x") config.screen_x = static_cast<std::int32_t>(parse_int_value(key, value));
    else if (key == "min_peak_fraction") config.min_peak_fraction = parse_double_value(key, value);
    else fail(ErrorCode::ParseError, "unknown config key '" + key + "'");
  }
  config.validate();
  return config;
}

RelationalGraph double_slit_graph(const DoubleSlitConfig& config,
                                  const std::vector<std::int32_t>& open_slits) {
  const auto vertex = [&](std::int32_t x, std::int32_t y) { return x * config.ny + y; };
  std::vector<char> blocked(static_cast<std::size_t>(config.nx) * config.ny, 0);
  for (std::int32_t y = 0; y < config.ny; ++y)
    blocked[static_cast<std::size_t>(vertex(config.barrier_x, y))] = 1;
  for (std::int32_t y : open_slits)
    blocked[static_cast<std::size_t>(vertex(config.barrier_x, y))] = 0;

  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  for (std::int32_t x = 0; x < config.nx; ++x)
    for (std::int32_t y = 0; y < config.ny; ++y) {
      const std::int32_t v = vertex(x, y);
      if (blocked[static_cast<std::size_t>(v)]) continue;
      if (x + 1 < config.nx && !blocked[static_cast<std::size_t>(vertex(x + 1, y))])
        edges.emplace_back(v, vertex(x + 1, y));
      if (y + 1 < config.ny && !blocked[static_cast<std::size_t>(vertex(x, y + 1))])
        edges.emplace_back(v, vertex(x, y + 1));
    }
  return RelationalGraph::from_edges(static_cast<std::int64_t>(config.nx) * config.ny,
                                     std::move(edges));
}

namespace {

Eigen::VectorXd slit_run_intensity(const DoubleSlitConfig& config,
                                   const std::vector<std::int32_t>& open_slits) {
  const RelationalGraph g = double_slit_graph(config, open_slits);
  const Laplacian lap(g);
  const auto vertex = [&](std::int32_t x, std::int32_t y) { return x * config.ny + y; };

  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(g.vertex_count());
  const double two_sigma_sq = 2.0 * config.source_sigma * config.source_sigma;
  for (std::int32_t x = 0; x < config.nx; ++x)
    for (std::int32_t y = 0; y < config.ny; ++y) {
      if (x == config.barrier_x) continue;  // barrier column carries no amplitude
      const double dx = x - config.source_x;
      const double dy = y - config.source_y;
      const double envelope = std::exp(-(dx * dx + dy * dy) / two_sigma_sq);
      amp(vertex(x, y)) = envelope * std::exp(Complex(0.0, config.source_kx * x));
    }
  amp /= amp.norm();

  const Stepper stepper(lap, Scheme::Cayley, config.mu);
  WaveState psi{std::move(amp), 0};
  psi = stepper.advance(std::move(psi), config.ticks);

  Eigen::VectorXd intensity(config.ny);
  for (std::int32_t y = 0; y < config.ny; ++y)
    intensity(y) = std::norm(psi.amplitudes(vertex(config.screen_x, y)));
  return intensity;
}

}  // namespace

DoubleSlitResult run_double_slit(const DoubleSlitConfig& config) {
  config.validate();

  DoubleSlitResult result;
  result.intensity_both = slit_run_intensity(config, {config.slit_y1, config.slit_y2});
  result.intensity_slit1 = slit_run_intensity(config, {config.slit_y1});
  result.intensity_slit2 = slit_run_intensity(config, {config.slit_y2});
  result.residual = result.intensity_both - result.intensity_slit1 - result.intensity_slit2;

  result.peak = result.intensity_both.maxCoeff();
  result.max_abs_residual = result.residual.cwiseAbs().maxCoeff();
  result.residual_over_peak = result.peak > 0.0 ? result.max_abs_residual / result.peak : 0.0;

  const double floor = config.min_peak_fraction * result.peak;
  for (std::int32_t y = 1; y + 1 < config.ny; ++y)
    if (result.intensity_both(y) > result.intensity_both(y - 1) &&
        result.intensity_both(y) > result.intensity_both(y + 1) &&
        result.intensity_both(y) >= floor)
      ++result.local_maxima;

  for (std::int32_t y = 0; y < config.ny; ++y)
    result.symmetry_error =
        std::max(result.symmetry_error,
                 std::abs(result.intensity_both(y) - result.intensity_both(config.ny - 1 - y)));
  return result;
}

void write_double_slit(const DoubleSlitConfig& config, const DoubleSlitResult& result,
                       const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);

  std::ostringstream csv;
  csv << "y,intensity_both,intensity_slit1,intensity_slit2,residual\n";
  for (std::int32_t y = 0; y < config.ny; ++y)
    csv << y << ',' << format_double(result.intensity_both(y)) << ','
        << format_double(result.intensity_slit1(y)) << ','
        << format_double(result.intensity_slit2(y)) << ',' << format_double(result.residual(y))
        << '\n';
  write_text_file(out_dir / "screen.csv", csv.str());

  std::ostringstream summary;
  summary << "key,value\n";
  summary << "local_maxima," << result.local_maxima << '\n';
  summary << "peak_intensity," << format_double(result.peak) << '\n';
  summary << "max_abs_residual," << format_double(result.max_abs_residual) << '\n';
  summary << "residual_over_peak," << format_double(result.residual_over_peak) << '\n';
  summary << "symmetry_error," << format_double(result.symmetry_error) << '\n';
  write_text_file(out_dir / "summary.csv", summary.str());

  write_manifest(out_dir, "doubleslit", std::nullopt, config.canonical_text());
}

// ---------------------------------------------------------------------------
// EPR measurement scenario
// ---------------------------------------------------------------------------

EprResult run_epr_scenario(std::uint64_t seed, double eps) {
  const PureState s0 = make_epr_with_apparatus();
  RelationEventLog log = seed_initial_relations(s0, {}, eps);

  const PureState s1 = apply_measurement_interaction(s0, kElectron2, kApparatus);
  log = propagate_relations(s0, s1, std::make_pair(kElectron2, kApparatus), std::move(log), eps);

  CollapseResult collapsed = collapse(s1, kApparatus, seed);
  log = propagate_relations(s1, collapsed.state, std::nullopt, std::move(log), eps);

  const LocalityVerdict verdict = locality_check(log);
  if (!verdict.pass)
    fail(ErrorCode::LocalityViolation, "event log failed the locality check: " + verdict.reason);

  EprResult result{{}, std::move(log), collapsed.outcome, s1, collapsed.state};
  const PureState* stages[] = {&s0, &s1, &collapsed.state};
  for (const PureState* s : stages)
    for (std::int32_t a = 0; a < s->n_qubits(); ++a)
      for (std::int32_t b = a + 1; b < s->n_qubits(); ++b) {
        const PairMeasures m = pair_relation_measures(*s, a, b);
        result.measures.push_back({s->tick(), a, b, m.mutual_information, m.negativity});
      }
  return result;
}

void write_epr(std::uint64_t seed, double eps, const EprResult& result,
               const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);

  std::ostringstream csv;
  csv << "tick,a,b,mutual_information,negativity\n";
  for (const auto& row : result.measures)
    csv << row.tick << ',' << row.a << ',' << row.b << ','
        << format_double(row.mutual_information) << ',' << format_double(row.negativity) << '\n';
  write_text_file(out_dir / "measures.csv", csv.str());

  write_text_file(out_dir / "events.csv", result.log.to_csv());

  std::ostringstream summary;
  summary << "key,value\n";
  summary << "outcome," << (result.outcome == Outcome::Plus ? "+" : "-") << '\n';
  summary << "eps," << format_double(eps) << '\n';
  write_text_file(out_dir / "summary.csv", summary.str());

  std::map<std::string, std::string> kv{{"eps", format_double(eps)}};
  write_manifest(out_dir, "epr", seed, serialize_key_values(kv));
}

// ---------------------------------------------------------------------------
// Shortcut scan
// ---------------------------------------------------------------------------

std::vector<ShortcutScanRow> run_shortcut(std::int32_t n, const std::vector<double>& w_list) {
  if (n < 8 || n % 2 != 0) fail(ErrorCode::InvalidArgument, "ring size must be even and >= 8");
  const RelationalGraph ring = RelationalGraph::lattice({n}, true);
  const std::int32_t x = 0;
  const std::int32_t y = n / 2;
  std::vector<ShortcutScanRow> rows;
  rows.reserve(w_list.size());
  for (double w : w_list) rows.push_back({w, shortcut_impact(ring, x, y, x, y, w)});
  return rows;
}

void write_shortcut(std::int32_t n, const std::vector<ShortcutScanRow>& rows,
                    const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);

  std::ostringstream csv;
  csv << "pair,w,metric,before,after,rel_change\n";
  const std::string pair = "0-" + std::to_string(n / 2);
  for (const auto& row : rows) {
    const auto& r = row.report;
    const double hop_rel =
        r.hops_before > 0
            ? (static_cast<double>(r.hops_before) - r.hops_after) / r.hops_before
            : 0.0;
    csv << pair << ',' << format_double(row.w) << ",hops," << r.hops_before << ','
        << r.hops_after << ',' << format_double(hop_rel) << '\n';
    csv << pair << ',' << format_double(row.w) << ",resistance,"
        << format_double(r.resistance_before) << ',' << format_double(r.resistance_after) << ','
        << format_double(r.rel_change) << '\n';
  }
  write_text_file(out_dir / "shortcut.csv", csv.str());

  std::map<std::string, std::string> kv{{"n", std::to_string(n)}};
  write_manifest(out_dir, "shortcut", std::nullopt, serialize_key_values(kv));
}

}  // namespace relsim
