#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "maoeda/harness.hpp"

namespace maoeda {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string method_name(IndicatorMethod m) {
  switch (m) {
    case IndicatorMethod::HvExact:
      return "exact";
    case IndicatorMethod::HvMonteCarlo:
      return "monte-carlo";
    case IndicatorMethod::Igd:
      break;
  }
  return "igd";
}

std::string opt_symbol(const std::optional<Comparison>& c) { return c ? comparison_symbol(*c) : ""; }

void spread_columns(std::ostringstream& os, const std::optional<Spread>& s, bool with_cell) {
  if (s) {
    os << ',' << num(s->median) << ',' << num(s->iqr_half);
    if (with_cell) os << ',' << format_cell(*s);
  } else {
    os << ",,";
    if (with_cell) os << ',';
  }
}

nlohmann::json spread_json(const std::optional<Spread>& s) {
  if (!s) return nullptr;
  return {{"median", s->median}, {"iqr_half", s->iqr_half}, {"cell", format_cell(*s)}};
}

}  // namespace

std::string results_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << "problem,objectives,variant,T,run,seed,status,hv,hv_ratio,hv_method,hv_excluded,igd,generations,"
        "reduced_dimension,pcsea_evaluations,main_evaluations,budget_total,budget_pcsea,budget_main,"
        "gens_to_baseline,baseline_reached,error\n";
  for (const auto& r : result.records) {
    os << r.problem << ',' << r.objectives << ',' << r.variant << ',' << r.neighbors << ',' << r.run_index << ','
       << r.seed << ',' << (r.ok ? "ok" : "failed") << ',';
    if (r.ok) {
      os << num(r.hv) << ',' << num(r.hv_ratio) << ',' << method_name(r.hv_method) << ',' << r.hv_excluded << ','
         << (r.igd ? num(*r.igd) : "NA") << ',' << r.generations << ',' << r.reduced_dimension << ','
         << r.pcsea_evaluations << ',' << r.main_evaluations;
    } else {
      os << ",,,,,,,,";
    }
    os << ',';
    if (r.budget.total > 0) os << r.budget.total << ',' << r.budget.pcsea << ',' << r.budget.main;
    else os << ",,";
    os << ',' << (r.generations_to_baseline ? std::to_string(*r.generations_to_baseline) : "") << ','
       << (r.generations_to_baseline ? (r.baseline_reached ? "reached" : "capped") : "") << ','
       << csv_text(r.error) << '\n';
  }
  return os.str();
}

std::string summary_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << "problem,objectives,variant,T,runs_ok,runs_failed,hv_median,hv_iqr_half,hv_cell,hv_vs_primary,"
        "igd_median,igd_iqr_half,igd_cell,igd_vs_primary,gens_to_baseline_median,gens_to_baseline_iqr_half\n";
  for (const auto& s : result.summary) {
    os << s.problem << ',' << s.objectives << ',' << s.variant << ',' << s.neighbors << ',' << s.runs_ok << ','
       << s.runs_failed;
    spread_columns(os, s.hv, true);
    os << ',' << opt_symbol(s.hv_vs_primary);
    spread_columns(os, s.igd, true);
    os << ',' << opt_symbol(s.igd_vs_primary);
    spread_columns(os, s.generations_to_baseline, false);
    os << '\n';
  }
  return os.str();
}

std::string traces_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << "problem,objectives,variant,T,seed,generation,evaluations,repaired,offspring,unassigned,front_size,hv_ratio\n";
  for (const auto& r : result.records) {
    for (std::size_t g = 0; g < r.trace.size(); ++g) {
      const auto& t = r.trace[g];
      os << r.problem << ',' << r.objectives << ',' << r.variant << ',' << r.neighbors << ',' << r.seed << ','
         << t.generation << ',' << t.evaluations << ',' << t.repaired << ',' << t.offspring << ',' << t.unassigned
         << ',' << t.front_size << ',';
      if (t.generation < r.hv_history.size()) os << num(r.hv_history[t.generation]);
      os << '\n';
    }
  }
  return os.str();
}

std::string results_json(const ExperimentResult& result) {
  using nlohmann::json;
  const ExperimentPlan& p = result.plan;
  json plan = {
      {"mode", mode_name(p.mode)},
      {"runs", p.runs},
      {"base_seed", p.base_seed},
      {"T", p.neighbors},
      {"alpha", p.alpha},
      {"column_tolerance", p.column_tolerance},
      {"pcsea_population", p.pcsea_population ? json(*p.pcsea_population) : json(nullptr)},
      {"pcsea_generations", p.pcsea_generations ? json(*p.pcsea_generations) : json(nullptr)},
      {"beta", p.beta},
      {"gamma", p.gamma},
      {"no_diversity_repair", p.ablations.no_diversity_repair},
      {"no_dimension_reduction", p.ablations.no_dimension_reduction},
      {"budget_total", p.budget_total ? json(*p.budget_total) : json(nullptr)},
      {"max_generations", p.max_generations ? json(*p.max_generations) : json(nullptr)},
      {"igd_points", p.igd_points},
      {"mc_samples", p.mc_samples},
      {"hv_reference", p.hv_reference},
      {"dispersion", "iqr/2"},
  };
  json problems = json::array();
  for (ProblemId id : p.problems) problems.push_back(problem_name(id));
  plan["problems"] = problems;
  plan["objectives"] = p.objectives;
  if (p.mode == Mode::NeighborSweep) plan["t_values"] = p.t_values;
  if (p.mode == Mode::GenerationsToBaseline) {
    plan["baseline"] = p.baseline;
    plan["generation_cap"] = p.generation_cap;
  }

  json records = json::array();
  for (const auto& r : result.records) {
    json j = {{"problem", r.problem},
              {"objectives", r.objectives},
              {"variant", r.variant},
              {"T", r.neighbors},
              {"run", r.run_index},
              {"seed", r.seed},
              {"ok", r.ok},
              {"wall_seconds", r.wall_seconds}};
    if (!r.ok) {
      j["error"] = r.error;
    } else {
      j["hv"] = r.hv;
      j["hv_ratio"] = r.hv_ratio;
      j["hv_method"] = method_name(r.hv_method);
      j["hv_excluded"] = r.hv_excluded;
      j["igd"] = r.igd ? json(*r.igd) : json(nullptr);
      j["generations"] = r.generations;
      j["reduced_dimension"] = r.reduced_dimension;
      j["evaluations"] = {{"pcsea", r.pcsea_evaluations}, {"main", r.main_evaluations}, {"total", r.evaluations()}};
      j["diagnostics"] = r.diagnostics;
      j["final_objectives"] = r.final_objectives;
    }
    if (r.budget.total > 0)
      j["budget"] = {{"total", r.budget.total}, {"pcsea", r.budget.pcsea}, {"main", r.budget.main}};
    if (r.generations_to_baseline) {
      j["gens_to_baseline"] = *r.generations_to_baseline;
      j["baseline_reached"] = r.baseline_reached;
      j["hv_history"] = r.hv_history;
    }
    records.push_back(std::move(j));
  }

  json summary = json::array();
  for (const auto& s : result.summary) {
    summary.push_back({{"problem", s.problem},
                       {"objectives", s.objectives},
                       {"variant", s.variant},
                       {"T", s.neighbors},
                       {"runs_ok", s.runs_ok},
                       {"runs_failed", s.runs_failed},
                       {"hv", spread_json(s.hv)},
                       {"igd", spread_json(s.igd)},
                       {"gens_to_baseline", spread_json(s.generations_to_baseline)},
                       {"hv_vs_primary", s.hv_vs_primary ? json(opt_symbol(s.hv_vs_primary)) : json(nullptr)},
                       {"igd_vs_primary", s.igd_vs_primary ? json(opt_symbol(s.igd_vs_primary)) : json(nullptr)}});
  }
  return json{{"plan", plan}, {"records", records}, {"summary", summary}}.dump(2) + "\n";
}

void write_reports(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << text;
  };
  put("results.csv", results_csv(result));
  put("summary.csv", summary_csv(result));
  put("results.json", results_json(result));
  bool any_trace = false;
  for (const auto& r : result.records) any_trace = any_trace || !r.trace.empty();
  if (any_trace) put("traces.csv", traces_csv(result));
}

}  // namespace maoeda
