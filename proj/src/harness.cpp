#include "maoeda/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <thread>

namespace maoeda {

namespace {

constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

std::string variant_label(const Ablations& a) {
  if (a.no_diversity_repair && a.no_dimension_reduction) return "no-repair+no-reduction";
  if (a.no_diversity_repair) return "no-repair";
  if (a.no_dimension_reduction) return "no-reduction";
  return "maoeda-ir";
}

const Matrix* find_or_null(const std::map<std::pair<std::string, std::size_t>, Matrix>& fronts, const std::string& name,
                           std::size_t m) {
  auto it = fronts.find({name, m});
  return it == fronts.end() ? nullptr : &it->second;
}

}  // namespace

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::Standard:
      return "standard";
    case Mode::AblateRepair:
      return "ablate_repair";
    case Mode::AblateReduction:
      return "ablate_reduction";
    case Mode::NeighborSweep:
      return "neighbor_sweep";
    case Mode::GenerationsToBaseline:
      return "generations_to_baseline";
  }
  return "standard";
}

std::optional<Mode> parse_mode(std::string_view text) {
  for (Mode m : {Mode::Standard, Mode::AblateRepair, Mode::AblateReduction, Mode::NeighborSweep,
                 Mode::GenerationsToBaseline}) {
    if (mode_name(m) == text) return m;
  }
  return std::nullopt;
}

std::optional<Budget> table_budget(std::size_t objectives) {
  switch (objectives) {
    case 3:
      return Budget{72000, 15000, 57000};
    case 5:
      return Budget{130000, 25000, 100000};
    case 8:
      return Budget{250000, 40000, 210000};
    case 10:
      return Budget{220000, 50000, 170000};
    case 15:
      return Budget{410000, 75000, 330000};
    default:
      return std::nullopt;
  }
}

std::size_t default_pcsea_population(std::size_t objectives) { return objectives > 10 ? 200 : 100; }

PcseaSettings pcsea_settings(std::size_t objectives, std::size_t pcsea_share, std::optional<std::size_t> population,
                             std::optional<std::size_t> generations) {
  PcseaSettings s;
  s.population = population.value_or(default_pcsea_population(objectives));
  if (s.population < 2) throw std::invalid_argument("corner search population must be at least 2");
  if (generations) {
    s.generations = *generations;
  } else if (pcsea_share >= 2 * s.population) {
    s.generations = pcsea_share / s.population - 1;
  } else {
    s.generations = 50;
  }
  return s;
}

Budget resolve_budget(std::size_t objectives, std::optional<std::size_t> total) {
  const auto row = table_budget(objectives);
  if (!total) {
    if (!row) {
      throw std::invalid_argument("no default evaluation budget for M = " + std::to_string(objectives) +
                                  "; pass a total budget");
    }
    return *row;
  }
  const std::size_t share = row ? row->pcsea : default_pcsea_population(objectives) * 51;
  if (*total <= share) {
    throw std::invalid_argument("total budget " + std::to_string(*total) + " does not exceed the corner search share " +
                                std::to_string(share));
  }
  return Budget{*total, share, *total - share};
}

std::vector<Variant> ExperimentPlan::variants() const {
  Variant primary{variant_label(ablations), ablations, neighbors};
  switch (mode) {
    case Mode::Standard:
    case Mode::GenerationsToBaseline:
      return {primary};
    case Mode::AblateRepair: {
      Variant v = primary;
      v.ablations.no_diversity_repair = true;
      v.label = variant_label(v.ablations);
      return {primary, v};
    }
    case Mode::AblateReduction: {
      Variant v = primary;
      v.ablations.no_dimension_reduction = true;
      v.label = variant_label(v.ablations);
      return {primary, v};
    }
    case Mode::NeighborSweep: {
      std::vector<Variant> out;
      for (std::size_t t : t_values) {
        Variant v = primary;
        v.neighbors = t;
        v.label = primary.label + "/T=" + std::to_string(t);
        out.push_back(v);
      }
      return out;
    }
  }
  return {primary};
}

void ExperimentPlan::validate() const {
  if (problems.empty()) throw std::invalid_argument("plan: no problems");
  if (objectives.empty()) throw std::invalid_argument("plan: no objective counts");
  if (runs == 0) throw std::invalid_argument("plan: runs must be positive");
  if (neighbors < 2) throw std::invalid_argument("plan: T must be at least 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("plan: alpha must lie in (0, 1]");
  if (!(column_tolerance >= 0.0 && column_tolerance < 1.0))
    throw std::invalid_argument("plan: column tolerance must lie in [0, 1)");
  if (pcsea_population && *pcsea_population < 2) throw std::invalid_argument("plan: corner search population below 2");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("plan: beta must lie in (0, 1]");
  if (!(gamma >= 0.0)) throw std::invalid_argument("plan: gamma must be non-negative");
  if (jobs == 0) throw std::invalid_argument("plan: jobs must be positive");
  if (mc_samples == 0) throw std::invalid_argument("plan: Monte Carlo sample count must be positive");
  if (!(hv_reference > 0.0)) throw std::invalid_argument("plan: HV reference must be positive");
  if (mode == Mode::AblateRepair && ablations.no_diversity_repair)
    throw std::invalid_argument("plan: repair ablation requested on a variant without repair");
  if (mode == Mode::AblateReduction && ablations.no_dimension_reduction)
    throw std::invalid_argument("plan: reduction ablation requested on a variant without reduction");
  if (mode == Mode::NeighborSweep) {
    if (t_values.empty()) throw std::invalid_argument("plan: neighbour sweep needs at least one T value");
    for (std::size_t t : t_values)
      if (t < 2) throw std::invalid_argument("plan: every swept T must be at least 2");
  }
  if (mode == Mode::GenerationsToBaseline) {
    if (!(baseline > 0.0)) throw std::invalid_argument("plan: baseline HV must be positive");
    if (generation_cap == 0) throw std::invalid_argument("plan: generation cap must be positive");
  }
  for (std::size_t m : objectives) {
    if (m < 2) throw std::invalid_argument("plan: objective counts must be at least 2");
    if (mode != Mode::GenerationsToBaseline || budget_total) resolve_budget(m, budget_total);
  }
}

std::size_t ExperimentResult::failures() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const RunRecord& r) { return !r.ok; }));
}

Spread spread(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("spread of an empty sample");
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return Spread{quantile(0.5), 0.5 * (quantile(0.75) - quantile(0.25))};
}

std::string format_cell(const Spread& s) {
  char head[64];
  char tail[64];
  std::snprintf(head, sizeof head, "%.3f", s.median);
  std::snprintf(tail, sizeof tail, "%.1E", s.iqr_half);
  // Drop the exponent's padding: 1.2E-03 -> 1.2E-3.
  std::string disp = tail;
  const auto e = disp.find('E');
  if (e != std::string::npos && e + 2 < disp.size()) {
    std::string sign = disp.substr(e + 1, 1);
    std::string digits = disp.substr(e + 2);
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
    disp = disp.substr(0, e + 1) + sign + digits;
  }
  return std::string(head) + "(" + disp + ")";
}

RunRecord run_single(const ExperimentPlan& plan, ProblemId problem, std::size_t objectives, const Variant& variant,
                     std::size_t run_index, const Matrix* igd_front) {
  RunRecord rec;
  rec.problem = problem_name(problem);
  rec.objectives = objectives;
  rec.variant = variant.label;
  rec.neighbors = variant.neighbors;
  rec.run_index = run_index;
  rec.seed = plan.base_seed + run_index;

  const auto start = std::chrono::steady_clock::now();
  try {
    const ProblemSpec spec = make_problem(problem, objectives);
    const bool baseline_mode = plan.mode == Mode::GenerationsToBaseline;
    if (baseline_mode && !plan.budget_total) {
      rec.budget = Budget{0, 0, 0};
    } else {
      rec.budget = resolve_budget(objectives, plan.budget_total);
    }

    RunConfig config;
    config.spec = spec;
    config.neighbors = variant.neighbors;
    config.alpha = plan.alpha;
    config.beta = plan.beta;
    config.gamma = plan.gamma;
    config.noise = plan.noise;
    std::size_t share = rec.budget.pcsea;
    if (share == 0) {
      if (auto row = table_budget(objectives)) share = row->pcsea;
    }
    config.pcsea = pcsea_settings(objectives, share, plan.pcsea_population, plan.pcsea_generations);
    config.column_tolerance = plan.column_tolerance;
    config.seed = rec.seed;
    config.ablations = variant.ablations;
    config.eval_budget = rec.budget.total == 0 ? kUnlimited : rec.budget.main;
    if (plan.max_generations) config.max_generations = *plan.max_generations;
    if (baseline_mode) config.max_generations = std::min(config.max_generations, plan.generation_cap);

    const Bounds bounds = true_bounds(spec);
    const Vector ref(objectives, plan.hv_reference);
    Rng mc_rng = make_stream(rec.seed, "mc-hv");

    GenerationObserver observer;
    if (baseline_mode) {
      observer = [&](const GenerationView& view) {
        Matrix f;
        f.reserve(view.population.size());
        for (const auto& s : view.population) f.push_back(s.f);
        Matrix chosen;
        for (std::size_t idx : final_selection(f, view.vectors.mapped)) chosen.push_back(f[idx]);
        const auto hv = hypervolume(normalize(chosen, bounds.ideal, bounds.nadir), ref, plan.mc_samples, mc_rng);
        const double ratio = hv_ratio(hv.value, ref);
        rec.hv_history.push_back(ratio);
        if (std::abs(ratio - plan.baseline) / plan.baseline <= plan.baseline_tolerance) {
          rec.generations_to_baseline = view.generation;
          rec.baseline_reached = true;
          return false;
        }
        return true;
      };
    }

    RunResult result = run(config, observer);

    Matrix final_f;
    for (const auto& s : result.final_solutions) final_f.push_back(s.f);
    const Matrix normalized = normalize(final_f, bounds.ideal, bounds.nadir);
    const IndicatorResult hv = hypervolume(normalized, ref, plan.mc_samples, mc_rng);
    rec.hv = hv.value;
    rec.hv_ratio = hv_ratio(hv.value, ref);
    rec.hv_method = hv.method;
    rec.hv_excluded = hv.excluded;
    if (igd_front) rec.igd = igd(normalized, *igd_front);

    if (baseline_mode && !rec.baseline_reached) rec.generations_to_baseline = result.generations;
    rec.generations = result.generations;
    rec.pcsea_evaluations = result.pcsea_evaluations;
    rec.main_evaluations = result.main_evaluations;
    rec.reduced_dimension = result.reduction.reduced_dimension();
    rec.diagnostics = std::move(result.diagnostics);
    if (rec.hv_excluded > 0) {
      rec.diagnostics.push_back(std::to_string(rec.hv_excluded) + " of " + std::to_string(normalized.size()) +
                                " final points lie beyond the HV reference point");
    }
    if (plan.keep_traces || baseline_mode) rec.trace = std::move(result.trace);
    rec.final_objectives = std::move(final_f);
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  ExperimentResult out;
  out.plan = plan;
  const auto variants = plan.variants();

  // Normalized IGD reference fronts, one per (problem, M).
  std::map<std::pair<std::string, std::size_t>, Matrix> fronts;
  std::vector<FrontFile> fixtures;
  for (const auto& path : plan.front_files) fixtures.push_back(read_front_file(path));
  for (ProblemId id : plan.problems) {
    for (std::size_t m : plan.objectives) {
      const ProblemSpec spec = make_problem(id, m);
      const Bounds b = true_bounds(spec);
      const std::string name = problem_name(id);
      const FrontFile* fixture = nullptr;
      for (const auto& f : fixtures) {
        auto parsed = parse_problem_id(f.problem);
        if (parsed && *parsed == id && f.objectives == m) fixture = &f;
      }
      if (fixture) {
        fronts[{name, m}] = normalize(fixture->points, b.ideal, b.nadir);
      } else if (!spec.is_minus() && plan.igd_points > 0) {
        Rng rng = make_stream(plan.base_seed, "front");
        fronts[{name, m}] = normalize(sample_front(spec, plan.igd_points, rng), b.ideal, b.nadir);
      }
    }
  }

  struct Task {
    ProblemId problem;
    std::size_t m;
    std::size_t variant;
    std::size_t run;
  };
  std::vector<Task> tasks;
  for (ProblemId id : plan.problems)
    for (std::size_t m : plan.objectives)
      for (std::size_t v = 0; v < variants.size(); ++v)
        for (std::size_t r = 0; r < plan.runs; ++r) tasks.push_back({id, m, v, r});

  out.records.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      out.records[i] = run_single(plan, t.problem, t.m, variants[t.variant], t.run,
                                  find_or_null(fronts, problem_name(t.problem), t.m));
    }
  };
  const std::size_t workers = std::min(plan.jobs, tasks.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Summary rows follow the task order: problem, M, variant.
  std::size_t i = 0;
  while (i < out.records.size()) {
    std::size_t j = i;
    while (j < out.records.size() && out.records[j].problem == out.records[i].problem &&
           out.records[j].objectives == out.records[i].objectives && out.records[j].variant == out.records[i].variant)
      ++j;
    SummaryRow row;
    row.problem = out.records[i].problem;
    row.objectives = out.records[i].objectives;
    row.variant = out.records[i].variant;
    row.neighbors = out.records[i].neighbors;
    std::vector<double> hv, ig, gens;
    for (std::size_t k = i; k < j; ++k) {
      const RunRecord& r = out.records[k];
      if (!r.ok) {
        ++row.runs_failed;
        continue;
      }
      ++row.runs_ok;
      hv.push_back(r.hv_ratio);
      if (r.igd) ig.push_back(*r.igd);
      if (r.generations_to_baseline) gens.push_back(static_cast<double>(*r.generations_to_baseline));
    }
    if (!hv.empty()) row.hv = spread(hv);
    if (!ig.empty() && ig.size() == row.runs_ok) row.igd = spread(ig);
    if (!gens.empty()) row.generations_to_baseline = spread(gens);
    out.summary.push_back(std::move(row));
    i = j;
  }

  // Rank-sum symbols: primary variant against every other variant of the cell.
  auto values = [&](const SummaryRow& row, bool use_igd) {
    std::vector<double> v;
    for (const auto& r : out.records) {
      if (!r.ok || r.problem != row.problem || r.objectives != row.objectives || r.variant != row.variant) continue;
      if (use_igd) {
        if (r.igd) v.push_back(*r.igd);
      } else {
        v.push_back(r.hv_ratio);
      }
    }
    return v;
  };
  for (auto& row : out.summary) {
    if (row.variant == variants.front().label) continue;
    const auto primary = std::find_if(out.summary.begin(), out.summary.end(), [&](const SummaryRow& p) {
      return p.problem == row.problem && p.objectives == row.objectives && p.variant == variants.front().label;
    });
    if (primary == out.summary.end()) continue;
    const auto a_hv = values(*primary, false);
    const auto b_hv = values(row, false);
    if (a_hv.size() >= 3 && b_hv.size() >= 3) row.hv_vs_primary = rank_sum_test(a_hv, b_hv, 0.05, true).outcome;
    const auto a_igd = values(*primary, true);
    const auto b_igd = values(row, true);
    if (a_igd.size() >= 3 && b_igd.size() >= 3)
      row.igd_vs_primary = rank_sum_test(a_igd, b_igd, 0.05, false).outcome;
  }
  return out;
}

std::vector<SweepRow> neighbor_sweep(const ExperimentPlan& plan, const std::vector<std::size_t>& t_values,
                                     ExperimentResult* detail) {
  if (t_values.empty()) throw std::invalid_argument("neighbor_sweep needs at least one T value");
  ExperimentPlan p = plan;
  p.mode = Mode::NeighborSweep;
  p.t_values = t_values;
  ExperimentResult result = run_experiment(p);
  std::vector<SweepRow> rows;
  for (const auto& s : result.summary) rows.push_back(SweepRow{s.problem, s.objectives, s.neighbors, s.igd, s.hv});
  if (detail) *detail = std::move(result);
  return rows;
}

ExperimentResult generations_to_baseline(const ExperimentPlan& plan, double baseline) {
  if (!(baseline > 0.0)) throw std::invalid_argument("generations_to_baseline: baseline must be positive");
  ExperimentPlan p = plan;
  p.mode = Mode::GenerationsToBaseline;
  p.baseline = baseline;
  return run_experiment(p);
}

}  // namespace maoeda
