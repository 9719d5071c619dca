#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hypercross/approximation.hpp"
#include "hypercross/error.hpp"
#include "hypercross/function_model.hpp"
#include "hypercross/io.hpp"
#include "hypercross/lattice.hpp"
#include "hypercross/parallel.hpp"
#include "hypercross/suites.hpp"

#ifndef HYPERCROSS_VERSION
#define HYPERCROSS_VERSION "0.0.0"
#endif

using namespace hypercross;

namespace {

enum Exit { kOk = 0, kRuntime = 1, kInvalid = 2, kFailed = 3 };

struct Flags {
  std::string command;
  std::string config;
  std::string out;
  std::string csv;
  std::string function;
  std::string omega;
  std::string suite;
  std::optional<double> p;
  std::optional<std::string> theta;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> T;
  std::optional<int> ppu;
  std::optional<double> rtol;
};

struct Artifact {
  std::string path;  // empty: stdout
  std::string text;
};

// A validated run: everything needed to compute, plus the effective config for the echo.
struct Plan {
  Json config;
  std::string hash;
};

void print_error(const char* kind, const std::string& message, std::optional<double> lower_bound = {}) {
  Json err{{"kind", kind}, {"message", message}};
  if (lower_bound) err["lower_bound"] = *lower_bound;
  std::cerr << Json{{"error", err}}.dump() << std::endl;
}

Json load_config(const Flags& flags, bool required) {
  if (flags.config.empty()) {
    if (required) throw ConfigurationError("--config is required for " + flags.command);
    return Json::object();
  }
  Json j = read_json_file(flags.config);
  if (!j.is_object()) throw ConfigurationError("config must be a JSON object");
  return j;
}

// Command-line flags override the config file; the merged object is what gets echoed and hashed.
void apply_overrides(Json& cfg, const Flags& flags) {
  if (flags.seed) cfg["seed"] = *flags.seed;
  if (flags.T || flags.ppu || flags.rtol) {
    Json grid = cfg.contains("grid") ? cfg["grid"] : Json::object();
    if (flags.T) grid["T"] = *flags.T;
    if (flags.ppu) grid["ppu"] = *flags.ppu;
    if (flags.rtol) grid["rtol"] = *flags.rtol;
    cfg["grid"] = grid;
  }
}

std::uint64_t seed_of(const Json& cfg) {
  if (!cfg.contains("seed")) return 1;
  if (!cfg["seed"].is_number_unsigned()) throw ConfigurationError("seed must be a nonnegative integer");
  return cfg["seed"].get<std::uint64_t>();
}

QuadratureGrid grid_of(const Json& cfg) { return cfg.contains("grid") ? grid_from_json(cfg["grid"]) : QuadratureGrid{}; }

int int_field(const Json& cfg, const char* key, int fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg[key].is_number_integer()) throw ConfigurationError(std::string(key) + " must be an integer");
  return cfg[key].get<int>();
}

double num_field(const Json& cfg, const char* key, double fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg[key].is_number()) throw ConfigurationError(std::string(key) + " must be a number");
  return cfg[key].get<double>();
}

double default_alpha(const Majorant& omega) {
  if (omega.kind() != MajorantKind::power_log) throw ConfigurationError("alpha is required for table majorants");
  double r = omega.r().front();
  for (double x : omega.r()) r = std::min(r, x);
  return r - 1.0 / 16;
}

SmoothnessParams params_of(const Json& cfg, const Majorant& omega, bool need_q) {
  SmoothnessParams P;
  P.p = num_field(cfg, "p", std::numeric_limits<double>::quiet_NaN());
  if (!cfg.contains("p")) throw ConfigurationError("missing field \"p\"");
  P.q = need_q ? num_field(cfg, "q", std::numeric_limits<double>::quiet_NaN()) : 2.0 * P.p;
  if (need_q && !cfg.contains("q")) throw ConfigurationError("missing field \"q\"");
  P.theta = cfg.contains("theta") ? theta_from_json(cfg["theta"]) : std::numeric_limits<double>::infinity();
  P.l = int_field(cfg, "l", omega.order());
  P.d = int_field(cfg, "d", omega.dim());
  P.alpha = cfg.contains("alpha") ? num_field(cfg, "alpha", 0.0) : default_alpha(omega);
  if (P.l != omega.order()) throw ConfigurationError("l differs from the order of omega");
  if (P.d != omega.dim()) throw ConfigurationError("d differs from the dimension of omega");
  if (need_q) {
    P.validate();
  } else {
    if (!(P.p > 1.0) || !std::isfinite(P.p)) throw ConfigurationError("require 1 < p < infinity");
    if (!(P.theta >= 1.0)) throw ConfigurationError("require theta >= 1");
  }
  return P;
}

Json load_maybe_path(const Json& v) { return v.is_string() ? read_json_file(v.get<std::string>()) : v; }

std::vector<Artifact> run_indexset(const Flags& flags, Plan& plan) {
  Json cfg = load_config(flags, true);
  apply_overrides(cfg, flags);
  reject_unknown_fields(cfg, {"omega", "p", "q", "theta", "l", "d", "alpha", "N", "seed", "grid"}, "config");
  if (!cfg.contains("omega")) throw ConfigurationError("missing field \"omega\"");
  cfg["omega"] = load_maybe_path(cfg["omega"]);
  const Majorant omega = majorant_from_json(cfg["omega"]);
  const SmoothnessParams P = params_of(cfg, omega, true);
  const double N = num_field(cfg, "N", 0.0);
  if (!(N >= 1.0) || N != std::floor(N)) throw ConfigurationError("N must be a positive integer");
  plan.config = cfg;
  plan.hash = config_hash(Json{{"command", "indexset"}, {"config", cfg}});

  const LevelSetEnumerator sets(omega, P);
  const LevelSetFamily family = sets.family(N);
  Json out{{"config_hash", plan.hash}};
  out.update(level_set_family_to_json(family));
  std::vector<Artifact> artifacts{{flags.out, out.dump(2) + "\n"}};
  if (!flags.csv.empty()) artifacts.push_back({flags.csv, level_set_family_csv(family, plan.hash)});
  return artifacts;
}

std::vector<Artifact> run_norms(const Flags& flags, Plan& plan) {
  Json cfg = load_config(flags, false);
  if (!flags.function.empty()) cfg["function"] = flags.function;
  if (!flags.omega.empty()) cfg["omega"] = flags.omega;
  if (flags.p) cfg["p"] = *flags.p;
  if (flags.theta) {
    try {
      cfg["theta"] = *flags.theta == "inf" ? Json("inf") : Json(std::stod(*flags.theta));
    } catch (const std::logic_error&) {
      throw ConfigurationError("--theta must be a number or inf");
    }
  }
  apply_overrides(cfg, flags);
  reject_unknown_fields(cfg, {"function", "omega", "p", "q", "theta", "l", "d", "alpha", "budgets", "seed", "grid"},
                        "config");
  if (!cfg.contains("function")) throw ConfigurationError("missing function (--function or config field)");
  if (!cfg.contains("omega")) throw ConfigurationError("missing omega (--omega or config field)");
  cfg["function"] = load_maybe_path(cfg["function"]);
  cfg["omega"] = load_maybe_path(cfg["omega"]);
  const BlockFunction f = block_function_from_json(cfg["function"]);
  const Majorant omega = majorant_from_json(cfg["omega"]);
  const SmoothnessParams P = params_of(cfg, omega, false);
  if (f.dim() != P.d) throw ConfigurationError("function dimension differs from omega");
  DefinitionBudgets budgets;
  budgets.grid = grid_of(cfg);
  if (cfg.contains("budgets")) {
    const Json& b = cfg["budgets"];
    reject_unknown_fields(b, {"t_depth", "h_depth", "u_max", "max_cost"}, "budgets");
    budgets.t_depth = int_field(b, "t_depth", budgets.t_depth);
    budgets.h_depth = int_field(b, "h_depth", budgets.h_depth);
    budgets.u_max = num_field(b, "u_max", budgets.u_max);
    budgets.max_cost = num_field(b, "max_cost", budgets.max_cost);
    if (budgets.t_depth < 0 || budgets.t_depth > 16 || budgets.h_depth < 0 || budgets.h_depth > 12 ||
        !(budgets.u_max > 0.0) || !(budgets.max_cost > 0.0))
      throw ConfigurationError("budgets out of range");
  }
  plan.config = cfg;
  plan.hash = config_hash(Json{{"command", "norms"}, {"config", cfg}});

  const DefinitionNorm def = definition_norm_report(f, omega, P, budgets);
  const double dec = decomposition_norm(f, omega, P, budgets.grid);
  Json terms = Json::array();
  for (std::size_t i = 0; i < def.subsets.size(); ++i) {
    Json e = Json::array();
    for (int axis : def.subsets[i]) e.push_back(axis + 1);
    terms.push_back(Json{{"e", e}, {"value", def.subset_terms[i]}});
  }
  Json out{{"config_hash", plan.hash},
           {"definition_norm", def.value},
           {"decomposition_norm", dec},
           {"ratio", dec > 0.0 ? def.value / dec : std::numeric_limits<double>::quiet_NaN()},
           {"lp_norm", def.lp_norm},
           {"subset_terms", terms},
           {"cost", def.cost}};
  return {{flags.out, out.dump(2) + "\n"}};
}

std::vector<Artifact> run_rates(const Flags& flags, Plan& plan, Json& summary) {
  Json cfg = load_config(flags, true);
  apply_overrides(cfg, flags);
  reject_unknown_fields(
      cfg, {"omega", "p", "q", "theta", "l", "d", "alpha", "witness", "N_exponents", "seed", "grid", "depth"}, "config");
  if (!cfg.contains("omega")) throw ConfigurationError("missing field \"omega\"");
  cfg["omega"] = load_maybe_path(cfg["omega"]);
  RateConfig rc;
  rc.omega = majorant_from_json(cfg["omega"]);
  rc.params = params_of(cfg, rc.omega, true);
  if (cfg.contains("witness")) {
    if (!cfg["witness"].is_string()) throw ConfigurationError("witness must be a string");
    rc.witness = parse_witness(cfg["witness"].get<std::string>());
  }
  if (cfg.contains("N_exponents")) {
    const Json& ks = cfg["N_exponents"];
    if (!ks.is_array()) throw ConfigurationError("N_exponents must be an array of integers");
    rc.N_exponents.clear();
    for (const auto& k : ks) {
      if (!k.is_number_integer()) throw ConfigurationError("N_exponents must be an array of integers");
      rc.N_exponents.push_back(k.get<int>());
    }
  }
  rc.seed = seed_of(cfg);
  rc.grid = grid_of(cfg);
  rc.depth = int_field(cfg, "depth", -1);
  if (rc.witness == WitnessKind::f3 && rc.params.theta_infinite()) throw ConfigurationError("f3 needs theta < inf");
  if (rc.N_exponents.empty()) throw ConfigurationError("empty N sweep");
  for (std::size_t i = 0; i < rc.N_exponents.size(); ++i)
    if (rc.N_exponents[i] < 2 || rc.N_exponents[i] > 40 || (i > 0 && rc.N_exponents[i] <= rc.N_exponents[i - 1]))
      throw ConfigurationError("N_exponents must increase strictly within [2, 40]");
  plan.config = cfg;
  plan.hash = config_hash(Json{{"command", "rates"}, {"config", cfg}});

  const RateTable table = rate_experiment(rc);
  summary = Json{{"rows", table.rows.size()},
                 {"failures", table.failures},
                 {"sweep_failed", table.sweep_failed()},
                 {"log_exponent", table.log_exponent},
                 {"c_lp", table.c_lp},
                 {"ratio_min", table.ratio_min},
                 {"ratio_max", table.ratio_max},
                 {"slope", table.slope}};
  return {{flags.out, rate_table_csv(table, plan.hash)}};
}

std::vector<Artifact> run_verify(const Flags& flags, Plan& plan, bool& passed) {
  Json cfg = load_config(flags, false);
  if (!flags.suite.empty()) cfg["suite"] = flags.suite;
  apply_overrides(cfg, flags);
  reject_unknown_fields(cfg, {"suite", "seed", "grid"}, "config");
  if (!cfg.contains("suite") || !cfg["suite"].is_string()) throw ConfigurationError("missing suite (--suite)");
  const std::string suite = cfg["suite"].get<std::string>();
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw ConfigurationError("unknown suite '" + suite + "'");
  const std::uint64_t seed = seed_of(cfg);
  const QuadratureGrid grid = grid_of(cfg);
  plan.config = cfg;
  plan.hash = config_hash(Json{{"command", "verify"}, {"config", cfg}});

  const SuiteReport report = run_suite(suite, seed, grid);
  passed = report.pass();
  Json checks = Json::array();
  for (const auto& c : report.checks)
    checks.push_back(
        Json{{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"bound", c.bound}, {"detail", c.detail}});
  Json out{{"config_hash", plan.hash}, {"suite", suite}, {"pass", passed}, {"checks", checks}};
  return {{flags.out, out.dump(2) + "\n"}};
}

void write_artifact(const Artifact& a) {
  if (a.path.empty()) {
    std::cout << a.text << std::flush;
    return;
  }
  std::ofstream os(a.path, std::ios::binary | std::ios::trunc);
  if (!os || !(os << a.text) || !os.flush()) throw ConfigurationError("cannot write " + a.path);
}

int configure_threads(const Flags& flags) {
  if (flags.threads) {
    if (*flags.threads < 1) throw ConfigurationError("--threads must be positive");
    set_num_threads(*flags.threads);
  } else if (const char* env = std::getenv("HYPERCROSS_THREADS"); env && *env) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) throw ConfigurationError("HYPERCROSS_THREADS must be a positive integer");
    set_num_threads(static_cast<int>(n));
  }
  return num_threads();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic-cross approximation experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", HYPERCROSS_VERSION);

  Flags flags;
  app.add_option("--config", flags.config, "JSON experiment config");
  app.add_option("--out", flags.out, "output file (stdout when omitted)");
  app.add_option("--seed", flags.seed, "random seed");
  app.add_option("--threads", flags.threads, "OpenMP threads (fallback: HYPERCROSS_THREADS)");
  app.add_option("--T", flags.T, "quadrature half-width");
  app.add_option("--ppu", flags.ppu, "quadrature points per unit length");
  app.add_option("--rtol", flags.rtol, "relative tolerance of quadrature brackets");

  auto* indexset = app.add_subcommand("indexset", "enumerate kappa(N) and Theta(N)");
  indexset->add_option("--csv", flags.csv, "also write one index per row as CSV");
  auto* norms = app.add_subcommand("norms", "definition and decomposition norms of a block function");
  norms->add_option("--function", flags.function, "block function JSON file");
  norms->add_option("--omega", flags.omega, "majorant JSON file");
  norms->add_option("--p", flags.p, "integrability exponent");
  norms->add_option("--theta", flags.theta, "summation index (number or inf)");
  app.add_subcommand("rates", "approximation-rate sweep to CSV");
  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("--suite", flags.suite, "dk, lp, lemmaA, lemmaB, thmA or thm1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return kInvalid;
  }
  flags.command = app.get_subcommands().front()->get_name();

  const auto start = std::chrono::steady_clock::now();
  Plan plan;
  Json summary;
  bool passed = true;
  std::vector<Artifact> artifacts;
  int threads = 0;
  try {
    threads = configure_threads(flags);
    if (flags.command == "indexset") artifacts = run_indexset(flags, plan);
    else if (flags.command == "norms") artifacts = run_norms(flags, plan);
    else if (flags.command == "rates") artifacts = run_rates(flags, plan, summary);
    else artifacts = run_verify(flags, plan, passed);
  } catch (const ConfigurationError& e) {
    print_error(e.kind(), e.what());
    return kInvalid;
  } catch (const PartialResultError& e) {
    print_error(e.kind(), e.what(), e.lower_bound());
    return kRuntime;
  } catch (const Error& e) {
    print_error(e.kind(), e.what());
    return kRuntime;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return kRuntime;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    for (const auto& a : artifacts) write_artifact(a);
    if (!flags.out.empty()) {
      Json outputs = Json::array();
      for (const auto& a : artifacts) outputs.push_back(a.path);
      Json manifest{{"tool", "hypercross"},
                    {"version", HYPERCROSS_VERSION},
                    {"command", flags.command},
                    {"config_hash", plan.hash},
                    {"config", plan.config},
                    {"outputs", outputs},
                    {"threads", threads},
                    {"timings", Json{{"compute_seconds", seconds}}}};
      if (!summary.is_null()) manifest["summary"] = summary;
      if (flags.command == "verify") manifest["pass"] = passed;
      write_artifact({flags.out + ".manifest.json", manifest.dump(2) + "\n"});
    }
  } catch (const Error& e) {
    print_error(e.kind(), e.what());
    return kRuntime;
  }

  if (flags.command == "rates" && summary.value("sweep_failed", false)) {
    print_error("sweep_failed", "more than half of the rows failed");
    return kFailed;
  }
  return passed ? kOk : kFailed;
}
