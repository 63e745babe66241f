// maoeda: command-line front end for experiments.
//
//   maoeda run --problem dtlz2 --objectives 3 --runs 30 --seed 42 --out results/
//   maoeda sweep-t --values 5:50:5 --problem dtlz1 --objectives 10
//   maoeda gens-to-baseline --baseline 0.99 --problem dtlz1 --objectives 8
//
// Any option may also come from a key=value file passed with --config;
// command-line flags win.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maoeda/harness.hpp"

namespace {

std::vector<std::size_t> parse_values(const std::string& text) {
  std::vector<std::size_t> out;
  const auto colon = std::count(text.begin(), text.end(), ':');
  if (colon == 2) {
    std::size_t lo = 0, hi = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> lo >> c1 >> hi >> c2 >> step) || step == 0 || lo > hi)
      throw std::invalid_argument("bad range '" + text + "', expected lo:hi:step");
    for (std::size_t v = lo; v <= hi; v += step) out.push_back(v);
    return out;
  }
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const unsigned long v = std::stoul(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("no T values given");
  return out;
}

void print_summary(const maoeda::ExperimentResult& result) {
  std::printf("%-8s %3s %-26s %4s %5s  %-18s %-18s %s\n", "problem", "M", "variant", "T", "runs", "HV", "IGD",
              "vs primary");
  for (const auto& s : result.summary) {
    const std::string hv = s.hv ? maoeda::format_cell(*s.hv) : "-";
    const std::string ig = s.igd ? maoeda::format_cell(*s.igd) : "NA";
    std::string sym;
    if (s.hv_vs_primary) sym = "HV " + maoeda::comparison_symbol(*s.hv_vs_primary);
    if (s.igd_vs_primary) sym += " IGD " + maoeda::comparison_symbol(*s.igd_vs_primary);
    std::printf("%-8s %3zu %-26s %4zu %2zu/%-2zu  %-18s %-18s %s\n", s.problem.c_str(), s.objectives,
                s.variant.c_str(), s.neighbors, s.runs_ok, s.runs_ok + s.runs_failed, hv.c_str(), ig.c_str(),
                sym.c_str());
    if (s.generations_to_baseline)
      std::printf("%46s generations to baseline: %s\n", "", maoeda::format_cell(*s.generations_to_baseline).c_str());
  }
  for (const auto& r : result.records)
    if (!r.ok) std::fprintf(stderr, "run failed: %s M=%zu %s seed %llu: %s\n", r.problem.c_str(), r.objectives,
                            r.variant.c_str(), static_cast<unsigned long long>(r.seed), r.error.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularity-model EDA for many-objective DTLZ benchmarks"};
  app.set_config("--config", "", "key=value configuration file");
  app.require_subcommand(1);

  std::vector<std::string> problems{"dtlz2"};
  std::vector<std::size_t> objectives{3};
  maoeda::ExperimentPlan plan;
  std::size_t budget_total = 0;
  std::size_t max_generations = 0;
  std::string ablate;
  std::string noise = "exclude";
  std::string out_dir = "results";
  std::vector<std::string> front_files;

  app.add_option("--problem", problems, "dtlz1..dtlz4, dtlz1m..dtlz4m (comma separated)")->delimiter(',');
  app.add_option("--objectives", objectives, "objective counts (comma separated)")->delimiter(',');
  app.add_option("--runs", plan.runs, "independent runs per cell")->capture_default_str();
  app.add_option("--seed", plan.base_seed, "base seed; run i uses seed + i")->capture_default_str();
  app.add_option("--t", plan.neighbors, "neighbour size T")->capture_default_str();
  app.add_option("--alpha", plan.alpha, "variance share kept by dimension reduction")->capture_default_str();
  app.add_option("--beta", plan.beta, "variance share kept by each sub-model")->capture_default_str();
  app.add_option("--gamma", plan.gamma, "sampling interval extension")->capture_default_str();
  app.add_flag("--no-diversity-repair", plan.ablations.no_diversity_repair, "disable diversity repair");
  app.add_flag("--no-dimension-reduction", plan.ablations.no_dimension_reduction,
               "skip corner search and decision-space reduction");
  app.add_option("--ablate", ablate, "also run the variant without: repair | reduction")
      ->check(CLI::IsMember({"repair", "reduction"}));
  app.add_option("--budget-total", budget_total, "total evaluations per run (default: per-M table)");
  app.add_option("--max-generations", max_generations, "generation cap for the main loop");
  app.add_option("--noise", noise, "sub-model noise convention: exclude | include")
      ->check(CLI::IsMember({"exclude", "include"}))
      ->capture_default_str();
  std::size_t pcsea_population = 0;
  std::size_t pcsea_generations = 0;
  app.add_option("--pcsea-population", pcsea_population, "corner search population (default 100, 200 for M > 10)");
  app.add_option("--pcsea-generations", pcsea_generations, "corner search generations (default: fill the budget share)");
  app.add_option("--column-tolerance", plan.column_tolerance, "relative floor of the zero-column test")
      ->capture_default_str();
  app.add_option("--igd-points", plan.igd_points, "sampled front size for IGD (0 disables)")->capture_default_str();
  app.add_option("--mc-samples", plan.mc_samples, "Monte Carlo HV samples (M >= 10)")->capture_default_str();
  app.add_option("--front-file", front_files, "front fixture for IGD (repeatable)");
  app.add_option("--jobs", plan.jobs, "concurrent runs")->capture_default_str();
  app.add_flag("--traces", plan.keep_traces, "write per-generation traces");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();

  auto* run_cmd = app.add_subcommand("run", "run an experiment grid");
  auto* sweep_cmd = app.add_subcommand("sweep-t", "IGD against neighbour size T");
  std::string values = "5:50:5";
  sweep_cmd->add_option("--values", values, "lo:hi:step or a comma list")->capture_default_str();
  auto* gtb_cmd = app.add_subcommand("gens-to-baseline", "generations until the HV ratio reaches a baseline");
  double baseline = 0.0;
  gtb_cmd->add_option("--baseline", baseline, "target HV ratio")->required();
  gtb_cmd->add_option("--cap", plan.generation_cap, "generation cap")->capture_default_str();
  for (auto* sub : {run_cmd, sweep_cmd, gtb_cmd}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    plan.problems.clear();
    for (const auto& p : problems) {
      auto id = maoeda::parse_problem_id(p);
      if (!id) throw std::invalid_argument("unknown problem '" + p + "'");
      plan.problems.push_back(*id);
    }
    plan.objectives = objectives;
    if (budget_total > 0) plan.budget_total = budget_total;
    if (max_generations > 0) plan.max_generations = max_generations;
    if (pcsea_population > 0) plan.pcsea_population = pcsea_population;
    if (pcsea_generations > 0) plan.pcsea_generations = pcsea_generations;
    plan.noise = noise == "include" ? maoeda::NoiseConvention::IncludeLastPrincipal
                                    : maoeda::NoiseConvention::ExcludePrincipal;
    for (const auto& f : front_files) plan.front_files.emplace_back(f);

    maoeda::ExperimentResult result;
    if (*sweep_cmd) {
      maoeda::neighbor_sweep(plan, parse_values(values), &result);
    } else if (*gtb_cmd) {
      result = maoeda::generations_to_baseline(plan, baseline);
    } else {
      if (ablate == "repair") plan.mode = maoeda::Mode::AblateRepair;
      if (ablate == "reduction") plan.mode = maoeda::Mode::AblateReduction;
      result = maoeda::run_experiment(plan);
    }
    maoeda::write_reports(result, out_dir);
    print_summary(result);
    std::printf("reports written to %s\n", out_dir.c_str());
    return result.failures() == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
