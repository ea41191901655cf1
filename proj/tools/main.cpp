// Command-line front end; links the C API only.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relsim/relsim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitCapability = 3;
constexpr int kExitUsage = 64;

int exit_code_of(relsim_status status) {
  switch (status) {
    case RELSIM_OK:
      return kExitOk;
    case RELSIM_ERR_TOO_LARGE:
    case RELSIM_ERR_TOO_LARGE_FOR_ENUMERATION:
    case RELSIM_ERR_SOLVER:
    case RELSIM_ERR_IO:
    case RELSIM_ERR_INTERNAL:
      return kExitCapability;
    default:
      return kExitValidation;
  }
}

[[noreturn]] void die(relsim_status status) {
  std::fprintf(stderr, "relsim: error: %s\n", relsim_last_error());
  std::exit(exit_code_of(status));
}

void require_ok(relsim_status status) {
  if (status != RELSIM_OK) die(status);
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "relsim: error: cannot open %s\n", path.c_str());
    std::exit(kExitValidation);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "relsim: error: cannot write %s\n", path.c_str());
    std::exit(kExitCapability);
  }
  out << content;
}

using GraphPtr = std::unique_ptr<relsim_graph, decltype(&relsim_graph_free)>;

GraphPtr load_graph(const std::string& path) {
  const std::string text = read_file(path);
  relsim_graph* g = nullptr;
  require_ok(relsim_graph_from_edge_list(text.c_str(), &g));
  return GraphPtr(g, &relsim_graph_free);
}

std::vector<int64_t> parse_dims(const std::string& spec) {
  std::vector<int64_t> dims;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    dims.push_back(std::strtoll(token.c_str(), nullptr, 10));
  }
  return dims;
}

std::vector<double> parse_doubles(const std::string& spec) {
  std::vector<double> values;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    values.push_back(std::strtod(token.c_str(), nullptr));
  }
  return values;
}

int parse_scheme(const std::string& name) {
  if (name == "euler") return RELSIM_SCHEME_EULER;
  if (name == "cayley") return RELSIM_SCHEME_CAYLEY;
  if (name == "exact") return RELSIM_SCHEME_EXACT;
  std::fprintf(stderr, "relsim: error: unknown scheme '%s'\n", name.c_str());
  std::exit(kExitValidation);
}

std::string state_csv(const std::vector<double>& re, const std::vector<double>& im) {
  std::ostringstream out;
  out << "vertex,re,im\n";
  for (std::size_t v = 0; v < re.size(); ++v)
    out << v << ',' << format17(re[v]) << ',' << format17(im[v]) << '\n';
  return out.str();
}

// Parses a vertex,re,im CSV (header required) into amplitude arrays.
void parse_state_csv(const std::string& text, int32_t n, std::vector<double>& re,
                     std::vector<double>& im) {
  re.assign(static_cast<std::size_t>(n), 0.0);
  im.assign(static_cast<std::size_t>(n), 0.0);
  std::stringstream ss(text);
  std::string line;
  bool header = true;
  while (std::getline(ss, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    long vertex = 0;
    double r = 0.0, i = 0.0;
    if (std::sscanf(line.c_str(), "%ld,%lf,%lf", &vertex, &r, &i) != 3 || vertex < 0 ||
        vertex >= n) {
      std::fprintf(stderr, "relsim: error: bad state row '%s'\n", line.c_str());
      std::exit(kExitValidation);
    }
    re[static_cast<std::size_t>(vertex)] = r;
    im[static_cast<std::size_t>(vertex)] = i;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relsim - quantum dynamics on relational graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("relsim ") + relsim_version());

  // lattice
  std::string lattice_dims = "8";
  bool lattice_periodic = false;
  std::string lattice_out;
  auto* lattice_cmd = app.add_subcommand("lattice", "emit a nearest-neighbor lattice edge list");
  lattice_cmd->add_option("--dims", lattice_dims, "comma-separated extents, e.g. 61,41");
  lattice_cmd->add_flag("--periodic", lattice_periodic, "wrap every axis");
  lattice_cmd->add_option("--out", lattice_out, "output file (default stdout)");

  // evolve
  std::string evolve_graph, evolve_state, evolve_out, evolve_scheme = "cayley";
  int32_t evolve_localize = -1;
  double evolve_mu = 0.2;
  int64_t evolve_ticks = 1;
  auto* evolve_cmd = app.add_subcommand("evolve", "advance a wave state and dump it as CSV");
  evolve_cmd->add_option("--graph", evolve_graph, "edge-list file")->required();
  evolve_cmd->add_option("--state", evolve_state, "initial state CSV (vertex,re,im)");
  evolve_cmd->add_option("--localize", evolve_localize, "start from unit amplitude on one vertex");
  evolve_cmd->add_option("--mu", evolve_mu, "per-tick coupling");
  evolve_cmd->add_option("--t", evolve_ticks, "tick count");
  evolve_cmd->add_option("--scheme", evolve_scheme, "euler | cayley | exact");
  evolve_cmd->add_option("--out", evolve_out, "output file (default stdout)");

  // kernel
  std::string kernel_graph, kernel_out, kernel_scheme = "euler", kernel_oracle;
  double kernel_mu = 0.2;
  int64_t kernel_ticks = 1;
  int32_t kernel_source = -1;
  auto* kernel_cmd = app.add_subcommand("kernel", "emit the propagator matrix as CSV");
  kernel_cmd->add_option("--graph", kernel_graph, "edge-list file")->required();
  kernel_cmd->add_option("--mu", kernel_mu, "per-tick coupling");
  kernel_cmd->add_option("--t", kernel_ticks, "tick count");
  kernel_cmd->add_option("--scheme", kernel_scheme, "euler | cayley | exact");
  kernel_cmd->add_option("--source", kernel_source,
                         "emit one propagator column as a state CSV");
  kernel_cmd->add_option("--oracle", kernel_oracle,
                         "'path-sum': print the max deviation against walk enumeration");
  kernel_cmd->add_option("--out", kernel_out, "output file (default stdout)");

  // distance
  std::string distance_graph, distance_metric = "hops";
  std::vector<int32_t> distance_pair;
  auto* distance_cmd = app.add_subcommand("distance", "intrinsic distance between two vertices");
  distance_cmd->add_option("--graph", distance_graph, "edge-list file")->required();
  distance_cmd->add_option("--pair", distance_pair, "two vertex indices")
      ->expected(2)
      ->required();
  distance_cmd->add_option("--metric", distance_metric, "hops | resistance");

  // shortcut
  int32_t shortcut_n = 100;
  std::string shortcut_w = "0,0.0001,0.001,0.01,0.1,1";
  std::string shortcut_out;
  auto* shortcut_cmd =
      app.add_subcommand("shortcut", "chord impact scan on the antipodal ring pair");
  shortcut_cmd->add_option("--n", shortcut_n, "ring size (even, >= 8)");
  shortcut_cmd->add_option("--w", shortcut_w, "comma-separated chord conductances");
  shortcut_cmd->add_option("--out", shortcut_out, "output directory")->required();

  // epr
  uint64_t epr_seed = 42;
  double epr_eps = 1e-9;
  std::string epr_out;
  auto* epr_cmd = app.add_subcommand("epr", "singlet + apparatus measurement pipeline");
  epr_cmd->add_option("--seed", epr_seed, "collapse RNG seed");
  epr_cmd->add_option("--eps", epr_eps, "relation threshold on mutual information");
  epr_cmd->add_option("--out", epr_out, "output directory")->required();

  // doubleslit
  std::string ds_config, ds_out;
  std::vector<std::string> ds_sets;
  auto* ds_cmd = app.add_subcommand("doubleslit", "two-slit interference on a lattice");
  ds_cmd->add_option("--config", ds_config, "key = value config file");
  ds_cmd->add_option("--set", ds_sets, "override one key, e.g. --set ticks=200");
  ds_cmd->add_option("--out", ds_out, "output directory")->required();

  // dispersion
  int32_t disp_n = 64, disp_mode = 2, disp_ticks = 64;
  double disp_mu = 0.2;
  std::string disp_scheme = "exact", disp_out;
  auto* disp_cmd = app.add_subcommand("dispersion", "plane-wave phase advance on a ring");
  disp_cmd->add_option("--n", disp_n, "ring size (>= 8)");
  disp_cmd->add_option("--mode", disp_mode, "plane-wave mode index");
  disp_cmd->add_option("--mu", disp_mu, "per-tick coupling");
  disp_cmd->add_option("--ticks,--t", disp_ticks, "tick count");
  disp_cmd->add_option("--scheme", disp_scheme, "euler | cayley | exact");
  disp_cmd->add_option("--out", disp_out, "output directory")->required();

  // check
  auto* check_cmd = app.add_subcommand("check", "run the built-in invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (lattice_cmd->parsed()) {
    const std::vector<int64_t> dims = parse_dims(lattice_dims);
    relsim_graph* g = nullptr;
    require_ok(relsim_graph_lattice(dims.data(), static_cast<int32_t>(dims.size()),
                                    lattice_periodic ? 1 : 0, &g));
    GraphPtr graph(g, &relsim_graph_free);
    char* text = nullptr;
    require_ok(relsim_graph_to_edge_list(graph.get(), &text));
    write_output(lattice_out, text);
    relsim_free(text);
    return kExitOk;
  }

  if (evolve_cmd->parsed()) {
    GraphPtr graph = load_graph(evolve_graph);
    const int32_t n = relsim_graph_vertex_count(graph.get());
    relsim_state* s = nullptr;
    if (evolve_localize >= 0) {
      require_ok(relsim_state_localized(graph.get(), evolve_localize, &s));
    } else if (!evolve_state.empty()) {
      std::vector<double> re, im;
      parse_state_csv(read_file(evolve_state), n, re, im);
      require_ok(relsim_state_create(graph.get(), re.data(), im.data(), &s));
    } else {
      std::fprintf(stderr, "relsim: error: need --state or --localize\n");
      return kExitValidation;
    }
    std::unique_ptr<relsim_state, decltype(&relsim_state_free)> state(s, &relsim_state_free);
    require_ok(relsim_evolve(graph.get(), state.get(), parse_scheme(evolve_scheme), evolve_mu,
                             evolve_ticks));
    std::vector<double> re(static_cast<std::size_t>(n)), im(static_cast<std::size_t>(n));
    require_ok(relsim_state_amplitudes(state.get(), re.data(), im.data(), n));
    write_output(evolve_out, state_csv(re, im));
    return kExitOk;
  }

  if (kernel_cmd->parsed()) {
    GraphPtr graph = load_graph(kernel_graph);
    const int32_t n = relsim_graph_vertex_count(graph.get());
    const int scheme = parse_scheme(kernel_scheme);
    std::vector<double> re(static_cast<std::size_t>(n) * n), im(static_cast<std::size_t>(n) * n);
    require_ok(relsim_kernel(graph.get(), kernel_mu, kernel_ticks, scheme, re.data(), im.data(), n));

    if (!kernel_oracle.empty()) {
      if (kernel_oracle != "path-sum") {
        std::fprintf(stderr, "relsim: error: unknown oracle '%s'\n", kernel_oracle.c_str());
        return kExitValidation;
      }
      if (scheme != RELSIM_SCHEME_EULER) {
        std::fprintf(stderr, "relsim: error: the path-sum oracle covers the euler scheme\n");
        return kExitValidation;
      }
      double max_dev = 0.0;
      for (int32_t x = 0; x < n; ++x)
        for (int32_t y = 0; y < n; ++y) {
          double wr = 0.0, wi = 0.0;
          require_ok(relsim_kernel_path_sum(graph.get(), kernel_mu,
                                            static_cast<int32_t>(kernel_ticks), x, y, &wr, &wi));
          const double dr = wr - re[static_cast<std::size_t>(x) * n + y];
          const double di = wi - im[static_cast<std::size_t>(x) * n + y];
          max_dev = std::max(max_dev, std::sqrt(dr * dr + di * di));
        }
      std::printf("max deviation = %.3e\n", max_dev);
      return kExitOk;
    }

    std::ostringstream csv;
    if (kernel_source >= 0) {
      if (kernel_source >= n) {
        std::fprintf(stderr, "relsim: error: source vertex out of range\n");
        return kExitValidation;
      }
      csv << "vertex,re,im\n";
      for (int32_t x = 0; x < n; ++x)
        csv << x << ',' << format17(re[static_cast<std::size_t>(x) * n + kernel_source]) << ','
            << format17(im[static_cast<std::size_t>(x) * n + kernel_source]) << '\n';
    } else {
      csv << "x,y,re,im\n";
      for (int32_t x = 0; x < n; ++x)
        for (int32_t y = 0; y < n; ++y)
          csv << x << ',' << y << ',' << format17(re[static_cast<std::size_t>(x) * n + y]) << ','
              << format17(im[static_cast<std::size_t>(x) * n + y]) << '\n';
    }
    write_output(kernel_out, csv.str());
    return kExitOk;
  }

  if (distance_cmd->parsed()) {
    GraphPtr graph = load_graph(distance_graph);
    if (distance_metric == "hops") {
      int32_t hops = 0;
      require_ok(relsim_distance_hops(graph.get(), distance_pair[0], distance_pair[1], &hops));
      std::printf("%d\n", hops);
    } else if (distance_metric == "resistance") {
      double r = 0.0;
      require_ok(
          relsim_distance_resistance(graph.get(), distance_pair[0], distance_pair[1], &r));
      std::printf("%.12g\n", r);
    } else {
      std::fprintf(stderr, "relsim: error: unknown metric '%s'\n", distance_metric.c_str());
      return kExitValidation;
    }
    return kExitOk;
  }

  if (shortcut_cmd->parsed()) {
    const std::vector<double> w = parse_doubles(shortcut_w);
    require_ok(relsim_run_shortcut(shortcut_n, w.data(), static_cast<int32_t>(w.size()),
                                   shortcut_out.c_str()));
    return kExitOk;
  }

  if (epr_cmd->parsed()) {
    require_ok(relsim_run_epr(epr_seed, epr_eps, epr_out.c_str()));
    return kExitOk;
  }

  if (ds_cmd->parsed()) {
    std::string config_text = ds_config.empty() ? std::string() : read_file(ds_config);
    for (const std::string& kv : ds_sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::fprintf(stderr, "relsim: error: --set expects key=value, got '%s'\n", kv.c_str());
        return kExitValidation;
      }
      config_text += "\n" + kv.substr(0, eq) + " = " + kv.substr(eq + 1) + "\n";
    }
    require_ok(relsim_run_double_slit(config_text.c_str(), ds_out.c_str()));
    return kExitOk;
  }

  if (disp_cmd->parsed()) {
    require_ok(relsim_run_dispersion(disp_n, disp_mode, disp_mu, disp_ticks,
                                     parse_scheme(disp_scheme), disp_out.c_str()));
    return kExitOk;
  }

  if (check_cmd->parsed()) {
    int32_t failures = 0;
    require_ok(relsim_check(&failures));
    if (failures > 0) {
      std::fprintf(stderr, "relsim: %d check(s) failed\n", failures);
      return kExitValidation;
    }
    std::printf("all checks passed\n");
    return kExitOk;
  }

  return kExitUsage;
}
