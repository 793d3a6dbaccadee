// slabtest: command line front end for the spike-and-slab testing library.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slabtest/config.hpp"
#include "slabtest/error.hpp"
#include "slabtest/io.hpp"
#include "slabtest/moments.hpp"
#include "slabtest/procedures.hpp"
#include "slabtest/simulation.hpp"
#include "slabtest/thresholds.hpp"
#include "slabtest/weight_mmle.hpp"

namespace {

using namespace slabtest;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t default_workers() {
  if (const char* env = std::getenv("SLABTEST_WORKERS")) {
    std::size_t value = 0;
    std::istringstream in(env);
    if (in >> value && in.eof() && value > 0) return value;
    throw DomainError("SLABTEST_WORKERS must be a positive integer, got '" +
                      std::string(env) + "'");
  }
  return 1;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_file(path, text);
  }
}

struct AnalyzeOptions {
  std::string input;
  std::string prior = "quasi-cauchy";
  std::string procedure = "ebayes-q";
  double t = 0.1;
  std::optional<double> L;
  std::optional<double> w;
  std::string lower = "1/n";
  std::string output;
};

int run_analyze(const AnalyzeOptions& opt) {
  const auto prior = make_prior(opt.prior);
  const ObservationBatch batch(read_observations(opt.input));
  ProcedureSpec spec{parse_procedure_id(opt.procedure), opt.t, opt.L};
  validate(spec);

  WeightEstimate weight;
  if (opt.w) {
    weight.w_hat = *opt.w;
    weight.lower = *opt.w;
  } else if (opt.lower == "zeta") {
    const double lower = zeta_lower_bound(*prior, batch.size());
    weight = lower >= 1.0 ? estimate_weight(*prior, batch, std::nullopt)
                          : estimate_weight(*prior, batch, lower);
  } else {
    weight = estimate_weight(*prior, batch);
  }
  const TestingContext ctx(*prior, batch, weight);
  const TestOutcome outcome = run_procedure(ctx, spec);
  emit(opt.output, outcome_to_json(outcome, prior->id(), weight));
  return 0;
}

std::string metrics_text(const std::vector<CellResult>& results) {
  std::ostringstream out;
  write_metrics_csv(out, results);
  return out.str();
}

struct SimulateOptions {
  std::string config;
  std::string output;
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;
};

int run_simulate(const SimulateOptions& opt) {
  SimulationConfig config = load_config(opt.config);
  if (opt.seed) {
    for (auto& c : config.cells) c.seed = *opt.seed;
  }
  std::size_t workers = config.workers;
  if (std::getenv("SLABTEST_WORKERS")) workers = default_workers();
  if (opt.workers) workers = *opt.workers;
  emit(opt.output, metrics_text(sweep(config.cells, workers)));
  return 0;
}

struct CurvesOptions {
  std::string figure = "1";
  std::string output;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> n;
  std::optional<std::size_t> workers;
  std::uint64_t seed = 0;
};

int run_curves(const CurvesOptions& opt) {
  auto cells = figure_preset(opt.figure);
  for (auto& c : cells) {
    c.seed = opt.seed;
    if (opt.reps) c.reps = *opt.reps;
    if (opt.n) c.n = *opt.n;
  }
  const std::size_t workers = opt.workers.value_or(default_workers());
  emit(opt.output, metrics_text(sweep(cells, workers)));
  return 0;
}

// Value of f(u), or NaN when u lies outside its domain.
template <class F>
double or_nan(F&& f, double u) {
  try {
    return f(u);
  } catch (const DomainError&) {
    return kNaN;
  }
}

int run_diagnose_thresholds(const std::string& prior_id, const std::string& grid,
                            const std::string& output) {
  const auto prior = make_prior(prior_id);
  const ThresholdContext ctx(*prior);
  std::vector<std::vector<double>> rows;
  for (double u : parse_grid(grid)) {
    rows.push_back({u, or_nan([&](double v) { return ctx.xi(v); }, u),
                    or_nan([&](double v) { return ctx.zeta(v); }, u),
                    or_nan([&](double v) { return ctx.chi(v); }, u)});
  }
  std::ostringstream out;
  write_numeric_csv(out, {"u", "xi", "zeta", "chi"}, rows);
  emit(output, out.str());
  return 0;
}

int run_diagnose_moments(const std::string& prior_id, const std::string& w_grid,
                         const std::string& tau_grid, const std::string& output) {
  const auto prior = make_prior(prior_id);
  const MomentContext ctx(*prior);
  const auto taus = parse_grid(tau_grid);
  std::vector<std::vector<double>> rows;
  for (double w : parse_grid(w_grid)) {
    const double mt = ctx.m_tilde(w);
    for (double tau : taus) rows.push_back({w, tau, mt, ctx.m1(tau, w), ctx.m2(tau, w)});
  }
  std::ostringstream out;
  write_numeric_csv(out, {"w", "tau", "m_tilde", "m1", "m2"}, rows);
  emit(output, out.str());
  return 0;
}

int fail(const std::string& kind, const std::string& message) {
  std::string line = message;
  for (char& c : line) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  std::cerr << "slabtest: error[" << kind << "]: " << line << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spike-and-slab empirical Bayes multiple testing"};
  app.set_version_flag("--version", std::string(slabtest::version()));
  app.require_subcommand(1);

  AnalyzeOptions analyze;
  auto* a = app.add_subcommand("analyze", "Test every coordinate of an observation file");
  a->add_option("--input,-i", analyze.input, "Observations, one per line (optional header x)")
      ->required();
  a->add_option("--prior", analyze.prior,
                "Slab prior: quasi-cauchy | laplace:<a> | quadrature:<name>")
      ->capture_default_str();
  a->add_option("--procedure", analyze.procedure,
                "ebayes-l | ebayes-q | ebayes-q0 | ebayes-hybrid | sc | mci | bh | bonferroni")
      ->capture_default_str();
  a->add_option("--t", analyze.t, "Level in (0, 1); (0, 1/2) for mci")->capture_default_str();
  a->add_option("--L", analyze.L, "Scale of the weight floor for ebayes-q0/hybrid (default log log n)");
  a->add_option("--w", analyze.w, "Use this spike weight instead of the MMLE");
  a->add_option("--lower", analyze.lower,
                "Lower end of the MMLE search: 1/n or zeta (inverse of zeta at sqrt(2 log n))")
      ->check(CLI::IsMember({"1/n", "zeta"}))
      ->capture_default_str();
  a->add_option("--output,-o", analyze.output, "JSON output file (default stdout)");

  SimulateOptions simulate;
  auto* s = app.add_subcommand("simulate", "Run the Monte Carlo cells of a JSON configuration");
  s->add_option("--config,-c", simulate.config, "Configuration file")->required();
  s->add_option("--output,-o", simulate.output, "CSV output file (default stdout)");
  s->add_option("--workers", simulate.workers,
                "Worker threads (default SLABTEST_WORKERS, then the config, then 1)")
      ->check(CLI::PositiveNumber);
  s->add_option("--seed", simulate.seed, "Seed applied to every cell");

  CurvesOptions curves;
  auto* c = app.add_subcommand("curves", "Run a preset FDR sweep");
  c->add_option("--figure", curves.figure, "Preset: 1 | 2 | 3 | 4 | sc | sc-table")
      ->capture_default_str();
  c->add_option("--output,-o", curves.output, "CSV output file (default stdout)");
  c->add_option("--reps", curves.reps, "Replications per cell (preset default otherwise)")
      ->check(CLI::PositiveNumber);
  c->add_option("--n", curves.n, "Override the dimension of every cell")
      ->check(CLI::PositiveNumber);
  c->add_option("--workers", curves.workers, "Worker threads (default SLABTEST_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  c->add_option("--seed", curves.seed, "Seed")->capture_default_str();

  auto* d = app.add_subcommand("diagnose", "Tabulate thresholds or score moments");
  d->require_subcommand(1);
  std::string prior = "quasi-cauchy";
  std::string grid;
  std::string w_grid;
  std::string tau_grid = "0";
  std::string diag_output;
  const char* grid_help = "Grid: lin:a:b:k | log:a:b:k | comma separated list";

  auto* dt = d->add_subcommand("thresholds", "CSV of u, xi(u), zeta(u), chi(u)");
  dt->add_option("--prior", prior, "Slab prior")->capture_default_str();
  dt->add_option("--grid", grid, grid_help)->required();
  dt->add_option("--output,-o", diag_output, "CSV output file (default stdout)");

  auto* dm = d->add_subcommand("moments", "CSV of w, tau, m_tilde, m1, m2");
  dm->add_option("--prior", prior, "Slab prior")->capture_default_str();
  dm->add_option("--w-grid", w_grid, grid_help)->required();
  dm->add_option("--tau-grid", tau_grid, grid_help)->capture_default_str();
  dm->add_option("--output,-o", diag_output, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "slabtest: error[usage]: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*a) return run_analyze(analyze);
    if (*s) return run_simulate(simulate);
    if (*c) return run_curves(curves);
    if (*dt) return run_diagnose_thresholds(prior, grid, diag_output);
    if (*dm) return run_diagnose_moments(prior, w_grid, tau_grid, diag_output);
  } catch (const ConfigError& e) {
    return fail("config:" + std::string(to_string(e.code())), e.what());
  } catch (const IoError& e) {
    return fail("io", e.what());
  } catch (const SimulationError& e) {
    return fail("simulation", e.what());
  } catch (const DomainError& e) {
    return fail("domain", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
