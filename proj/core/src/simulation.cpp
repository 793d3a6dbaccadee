#include "slabtest/simulation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <thread>
#include <utility>

#include "slabtest/error.hpp"
#include "slabtest/moments.hpp"
#include "slabtest/rng.hpp"
#include "slabtest/weight_mmle.hpp"

namespace slabtest {
namespace {

// Independent counter streams within one (cell, rep).
enum StreamTag : std::uint64_t {
  kNoise = 0,
  kSignal = 1,
  kSpikeSelect = 2,
  kSlabDraw = 3,
};

constexpr std::array<std::pair<Scenario, std::string_view>, 4> kScenarios{{
    {Scenario::constant, "constant"},
    {Scenario::uniform_random, "uniform-random"},
    {Scenario::large_class, "large-class"},
    {Scenario::bayes, "bayes"},
}};

constexpr std::array<std::pair<WeightPolicy, std::string_view>, 4> kPolicies{{
    {WeightPolicy::mmle, "mmle"},
    {WeightPolicy::mmle_wn, "mmle-wn"},
    {WeightPolicy::fixed, "fixed"},
    {WeightPolicy::wstar, "wstar"},
}};

template <class Table>
auto parse_name(const Table& table, std::string_view name, const char* what) {
  for (const auto& [key, n] : table) {
    if (n == name) return key;
  }
  std::string msg = "unknown " + std::string(what) + " '" + std::string(name) +
                    "'; expected one of:";
  for (const auto& [key, n] : table) msg += " " + std::string(n);
  throw DomainError(msg);
}

std::string real17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool needs_weight(const SimulationCell& cell) {
  return cell.w_policy == WeightPolicy::fixed || cell.scenario == Scenario::bayes;
}

WeightEstimate fixed_estimate(double w) {
  WeightEstimate est;
  est.w_hat = w;
  est.lower = w;
  return est;
}

// Weight estimate for one replication under the cell's policy.
WeightEstimate resolve_weight(const MarginalLikelihood& lik, std::optional<double> cell_w,
                              double mmle_lower) {
  if (cell_w) return fixed_estimate(*cell_w);
  if (mmle_lower >= 1.0) {
    WeightEstimate est;
    est.w_hat = 1.0;
    est.lower = 1.0;
    est.at_upper_boundary = true;
    est.score_at_root = lik.score(1.0);
    return est;
  }
  return lik.estimate(mmle_lower);
}

double mmle_lower_bound(const SimulationCell& cell, const SlabPrior& prior) {
  if (cell.w_policy == WeightPolicy::mmle_wn) return zeta_lower_bound(prior, cell.n);
  return 1.0 / static_cast<double>(cell.n);
}

}  // namespace

std::string_view to_string(Scenario s) {
  for (const auto& [key, name] : kScenarios) {
    if (key == s) return name;
  }
  return "unknown";
}

std::string_view to_string(WeightPolicy p) {
  for (const auto& [key, name] : kPolicies) {
    if (key == p) return name;
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  return parse_name(kScenarios, name, "scenario");
}

WeightPolicy parse_weight_policy(std::string_view name) {
  return parse_name(kPolicies, name, "weight policy");
}

void validate(const SimulationCell& cell) {
  if (cell.n == 0) throw DomainError("cell: n must be at least 1");
  if (cell.s > cell.n) {
    throw DomainError("cell: s=" + std::to_string(cell.s) + " exceeds n=" +
                      std::to_string(cell.n));
  }
  if (!(std::isfinite(cell.mu) && cell.mu >= 0.0)) {
    throw DomainError("cell: mu must be a finite nonnegative number");
  }
  if (cell.reps == 0) throw DomainError("cell: reps must be at least 1");
  if (cell.scenario == Scenario::large_class && cell.s == 0 && cell.mu > 0.0) {
    throw DomainError("cell: the large-class scenario needs s >= 1");
  }
  if (needs_weight(cell)) {
    if (!cell.w) {
      throw DomainError(std::string("cell: w is required for ") +
                        (cell.scenario == Scenario::bayes ? "the bayes scenario"
                                                          : "the fixed weight policy"));
    }
    if (!(*cell.w > 0.0 && *cell.w < 1.0)) {
      throw DomainError("cell: w must lie in (0, 1), got " + std::to_string(*cell.w));
    }
  }
  if (cell.w_policy == WeightPolicy::wstar &&
      (cell.s == 0 || cell.s >= cell.n)) {
    throw DomainError("cell: the wstar policy needs 1 <= s < n");
  }
  if (cell.w_policy == WeightPolicy::mmle_wn && cell.n < 2) {
    throw DomainError("cell: the mmle-wn policy needs n >= 2");
  }
  for (const auto& p : cell.procedures) validate(p);
}

std::string describe(const SimulationCell& cell) {
  std::string out = "n=" + std::to_string(cell.n) + " s=" + std::to_string(cell.s) +
                    " mu=" + real17(cell.mu) + " scenario=" +
                    std::string(to_string(cell.scenario)) + " prior=" + cell.prior +
                    " w_policy=" + std::string(to_string(cell.w_policy));
  if (cell.w) out += " w=" + real17(*cell.w);
  return out;
}

std::uint64_t data_hash(const SimulationCell& cell) {
  std::string key = std::to_string(cell.n) + "|" + std::to_string(cell.s) + "|" +
                    real17(cell.mu) + "|" + std::string(to_string(cell.scenario));
  if (cell.scenario == Scenario::bayes) {
    key += "|" + cell.prior + "|" + (cell.w ? real17(*cell.w) : std::string("-"));
  }
  return rng::fnv1a(key);
}

ObservationBatch generate(const SimulationCell& cell, std::size_t rep) {
  const auto prior = make_prior(cell.prior);
  return generate(cell, *prior, rep);
}

ObservationBatch generate(const SimulationCell& cell, const SlabPrior& prior,
                          std::size_t rep) {
  const std::size_t n = cell.n;
  const rng::Key key{rng::mix64(cell.seed), data_hash(cell)};
  const auto stream = [&](StreamTag tag) { return rng::Stream(key, tag, rep); };

  std::vector<double> theta(n, 0.0);
  switch (cell.scenario) {
    case Scenario::constant:
      std::fill_n(theta.begin(), cell.s, cell.mu);
      break;
    case Scenario::uniform_random: {
      stream(kSignal).uniforms(0, theta.data(), cell.s);
      for (std::size_t i = 0; i < cell.s; ++i) theta[i] *= 2.0 * cell.mu;
      break;
    }
    case Scenario::large_class: {
      if (cell.s > 0) {
        const double level =
            cell.mu * std::sqrt(2.0 * std::log(static_cast<double>(n) /
                                               static_cast<double>(cell.s)));
        std::fill_n(theta.begin(), cell.s, level);
      }
      break;
    }
    case Scenario::bayes: {
      const double w = cell.w.value_or(0.0);
      const auto select = stream(kSpikeSelect);
      const auto slab = stream(kSlabDraw);
      for (std::size_t i = 0; i < n; ++i) {
        if (select.uniform(i) < w) {
          theta[i] = prior.sample(slab.uniform(2 * i), slab.uniform(2 * i + 1));
        }
      }
      break;
    }
  }

  std::vector<double> x(n);
  stream(kNoise).normals(0, x.data(), n);
  for (std::size_t i = 0; i < n; ++i) x[i] += theta[i];
  return ObservationBatch(std::move(x), std::move(theta));
}

std::optional<double> cell_weight(const SimulationCell& cell, const SlabPrior& prior) {
  switch (cell.w_policy) {
    case WeightPolicy::fixed:
      return cell.w;
    case WeightPolicy::wstar:
      return MomentContext(prior).solve_wstar(cell.n, cell.s).w;
    case WeightPolicy::mmle:
    case WeightPolicy::mmle_wn:
      break;
  }
  return std::nullopt;
}

CellResult run_cell(const SimulationCell& cell, std::size_t workers) {
  validate(cell);
  const auto prior = make_prior(cell.prior);
  const std::optional<double> cell_w = cell_weight(cell, *prior);
  const double lower = cell_w ? 0.0 : mmle_lower_bound(cell, *prior);
  const std::size_t procs = cell.procedures.size();

  CellResult result;
  result.cell = cell;
  if (procs == 0) return result;

  // records[rep * procs + k]
  std::vector<MetricsRecord> records(cell.reps * procs);
  std::vector<std::exception_ptr> errors(cell.reps);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  const auto work = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t rep = next.fetch_add(1);
      if (rep >= cell.reps) return;
      try {
        const ObservationBatch batch = generate(cell, *prior, rep);
        MarginalLikelihood lik(*prior, batch.x());
        const WeightEstimate weight = resolve_weight(lik, cell_w, lower);
        const TestingContext ctx(*prior, batch, std::move(lik), weight);
        for (std::size_t k = 0; k < procs; ++k) {
          const TestOutcome out = run_procedure(ctx, cell.procedures[k]);
          records[rep * procs + k] = fdp_fnp(out, batch.truth());
        }
      } catch (...) {
        errors[rep] = std::current_exception();
        failed.store(true);
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(workers, 1, cell.reps);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(work);
  }

  // Every rep below a failing one was claimed before it, so the lowest
  // failing rep does not depend on scheduling.
  for (std::size_t rep = 0; rep < cell.reps; ++rep) {
    if (!errors[rep]) continue;
    std::string what;
    try {
      std::rethrow_exception(errors[rep]);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
      what = "unknown error";
    }
    throw SimulationError(describe(cell) + " rep=" + std::to_string(rep) + ": " + what,
                          describe(cell), rep);
  }

  std::vector<MetricsRecord> column(cell.reps);
  result.metrics.reserve(procs);
  for (std::size_t k = 0; k < procs; ++k) {
    for (std::size_t rep = 0; rep < cell.reps; ++rep) {
      column[rep] = records[rep * procs + k];
    }
    result.metrics.push_back(aggregate(column));
  }
  return result;
}

std::vector<CellResult> sweep(const std::vector<SimulationCell>& cells,
                              std::size_t workers) {
  if (cells.empty()) throw DomainError("sweep: no cells");
  for (const auto& c : cells) validate(c);
  std::vector<CellResult> out;
  out.reserve(cells.size());
  for (const auto& c : cells) out.push_back(run_cell(c, workers));
  return out;
}

std::vector<double> mu_grid() {
  std::vector<double> grid{0.01, 0.5};
  for (int m = 1; m <= 10; ++m) grid.push_back(m);
  return grid;
}

std::vector<std::string> known_figures() { return {"1", "2", "3", "4", "sc", "sc-table"}; }

std::vector<SimulationCell> figure_preset(std::string_view name) {
  const auto at_levels = [](std::initializer_list<ProcedureId> ids) {
    std::vector<ProcedureSpec> specs;
    for (ProcedureId id : ids) {
      for (double t : {0.05, 0.1, 0.2}) specs.push_back({id, t, std::nullopt});
    }
    return specs;
  };

  std::vector<SimulationCell> cells;
  if (name == "sc-table") {
    for (std::size_t s : {10000, 1000, 100, 10, 5}) {
      SimulationCell c;
      c.n = 10'000'000;
      c.s = s;
      c.mu = 15.0;
      c.reps = 10;
      c.w_policy = WeightPolicy::wstar;
      c.procedures = {{ProcedureId::sc, 0.2, std::nullopt}};
      cells.push_back(c);
    }
    return cells;
  }

  Scenario scenario = Scenario::constant;
  std::vector<ProcedureSpec> procedures;
  if (name == "1" || name == "3") {
    procedures = at_levels({ProcedureId::ebayes_l, ProcedureId::ebayes_q});
    scenario = name == "1" ? Scenario::constant : Scenario::uniform_random;
  } else if (name == "2" || name == "4") {
    procedures = at_levels({ProcedureId::ebayes_q0, ProcedureId::ebayes_hybrid});
    scenario = name == "2" ? Scenario::constant : Scenario::uniform_random;
  } else if (name == "sc") {
    procedures = at_levels({ProcedureId::sc});
  } else {
    std::string msg = "unknown figure '" + std::string(name) + "'; expected one of:";
    for (const auto& f : known_figures()) msg += " " + f;
    throw DomainError(msg);
  }

  for (const char* prior : {"quasi-cauchy", "laplace:0.5"}) {
    for (std::size_t s : {10, 100, 1000}) {
      for (double mu : mu_grid()) {
        SimulationCell c;
        c.n = 10000;
        c.s = s;
        c.mu = mu;
        c.scenario = scenario;
        c.prior = prior;
        c.procedures = procedures;
        cells.push_back(c);
      }
    }
  }
  return cells;
}

}  // namespace slabtest
