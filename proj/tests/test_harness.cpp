#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "maoeda/harness.hpp"

using namespace maoeda;

namespace {

// 120 vectors x T=5 -> 600 initial evaluations; a few generations on top.
ExperimentPlan quick_plan(std::size_t runs) {
  ExperimentPlan plan;
  plan.problems = {ProblemId::DTLZ2};
  plan.objectives = {3};
  plan.runs = runs;
  plan.base_seed = 7;
  plan.neighbors = 5;
  plan.budget_total = 15000 + 2400;
  plan.igd_points = 2000;
  plan.mc_samples = 2000;
  return plan;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Rows of a CSV keyed by header name.
std::vector<std::map<std::string, std::string>> parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  const auto header = split(line);
  std::vector<std::map<std::string, std::string>> rows;
  while (std::getline(is, line)) {
    const auto cells = split(line);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) row[header[i]] = cells[i];
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("default budgets and explicit totals") {
  const std::size_t m[] = {3, 5, 8, 10, 15};
  const std::size_t total[] = {72000, 130000, 250000, 220000, 410000};
  const std::size_t pcsea[] = {15000, 25000, 40000, 50000, 75000};
  // Rows as tabulated; for M = 5 and 15 the two shares sum to 5000 less than the total.
  const std::size_t main[] = {57000, 100000, 210000, 170000, 330000};
  for (int i = 0; i < 5; ++i) {
    auto b = resolve_budget(m[i], std::nullopt);
    CHECK(b.total == total[i]);
    CHECK(b.pcsea == pcsea[i]);
    CHECK(b.main == main[i]);
    CHECK(b.pcsea + b.main <= b.total);
  }
  auto b = resolve_budget(3, 20000);
  CHECK(b.pcsea == 15000);
  CHECK(b.main == 5000);
  auto b4 = resolve_budget(4, 20000);
  CHECK(b4.pcsea == 5100);
  CHECK(b4.main == 14900);
  CHECK_FALSE(table_budget(4));
  CHECK_THROWS_AS(resolve_budget(4, std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS(resolve_budget(3, 15000), std::invalid_argument);
}

TEST_CASE("corner search settings follow the budget share") {
  auto s = pcsea_settings(3, 15000);
  CHECK(s.population == 100);
  CHECK(s.generations == 149);
  CHECK(s.population * (s.generations + 1) <= 15000);
  CHECK(pcsea_settings(15, 75000).population == 200);
  CHECK(pcsea_settings(15, 75000).generations == 374);
  CHECK(pcsea_settings(3, 0).generations == 50);
  CHECK(pcsea_settings(3, 15000, 50, 7).generations == 7);
  CHECK(pcsea_settings(3, 15000, 50, std::nullopt).generations == 299);
}

TEST_CASE("spread and cell formatting") {
  auto one = spread({0.42});
  CHECK(one.median == 0.42);
  CHECK(one.iqr_half == 0.0);
  auto s = spread({5, 1, 3, 2, 4});
  CHECK(s.median == 3.0);
  CHECK(s.iqr_half == doctest::Approx(1.0));
  auto even = spread({1, 2, 3, 4});
  CHECK(even.median == 2.5);
  CHECK(even.iqr_half == doctest::Approx(0.75));
  CHECK(format_cell({0.5331, 0.0012}) == "0.533(1.2E-3)");
  CHECK(format_cell({0.838, 0.021}) == "0.838(2.1E-2)");
  CHECK(format_cell({1.0, 0.0}) == "1.000(0.0E+0)");
  CHECK_THROWS_AS(spread({}), std::invalid_argument);
}

TEST_CASE("modes and plan validation") {
  for (Mode m : {Mode::Standard, Mode::AblateRepair, Mode::AblateReduction, Mode::NeighborSweep,
                 Mode::GenerationsToBaseline})
    CHECK(parse_mode(mode_name(m)) == m);
  CHECK_FALSE(parse_mode("bogus"));

  auto plan = quick_plan(1);
  CHECK_NOTHROW(plan.validate());
  plan.runs = 0;
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
  plan = quick_plan(1);
  plan.mode = Mode::NeighborSweep;
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
  plan.t_values = {5, 10};
  CHECK(plan.variants().size() == 2);
  CHECK(plan.variants()[1].label == "maoeda-ir/T=10");
  plan = quick_plan(1);
  plan.alpha = 0.0;
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
  plan = quick_plan(1);
  plan.mode = Mode::AblateReduction;
  CHECK(plan.variants()[1].label == "no-reduction");
}

TEST_CASE("standard plan: one record per run and a median summary") {
  auto result = run_experiment(quick_plan(5));
  REQUIRE(result.records.size() == 5);
  CHECK(result.failures() == 0);
  REQUIRE(result.summary.size() == 1);
  const auto& row = result.summary.front();
  CHECK(row.runs_ok == 5);
  CHECK(row.variant == "maoeda-ir");
  std::vector<double> hv;
  for (const auto& r : result.records) {
    CHECK(r.ok);
    CHECK(r.final_objectives.size() == 120);
    CHECK(r.evaluations() <= r.budget.total);
    CHECK(r.budget.pcsea == 15000);
    CHECK(r.pcsea_evaluations <= r.budget.pcsea);
    CHECK(r.main_evaluations <= r.budget.main);
    CHECK(r.igd.has_value());
    CHECK(r.hv_method == IndicatorMethod::HvExact);
    hv.push_back(r.hv_ratio);
  }
  std::sort(hv.begin(), hv.end());
  REQUIRE(row.hv);
  CHECK(row.hv->median == hv[2]);
  CHECK_FALSE(row.hv_vs_primary);
  for (std::size_t i = 0; i < 5; ++i) CHECK(result.records[i].seed == 7 + i);
}

TEST_CASE("single run: the median is that run") {
  auto result = run_experiment(quick_plan(1));
  REQUIRE(result.summary.size() == 1);
  REQUIRE(result.summary[0].hv);
  CHECK(result.summary[0].hv->median == result.records[0].hv_ratio);
  CHECK(result.summary[0].hv->iqr_half == 0.0);
  CHECK(result.summary[0].igd->median == *result.records[0].igd);
}

TEST_CASE("default budget rows are used without an explicit total") {
  auto plan = quick_plan(1);
  plan.budget_total.reset();
  plan.max_generations = 2;
  auto result = run_experiment(plan);
  REQUIRE(result.records[0].ok);
  CHECK(result.records[0].budget.total == 72000);
  CHECK(result.records[0].budget.pcsea == 15000);
  CHECK(result.records[0].budget.main == 57000);
  CHECK(result.records[0].generations == 2);
  CHECK(result.records[0].evaluations() <= 72000);
}

TEST_CASE("repair ablation carries rank-sum symbols against the primary") {
  auto plan = quick_plan(5);
  plan.mode = Mode::AblateRepair;
  auto result = run_experiment(plan);
  REQUIRE(result.summary.size() == 2);
  CHECK(result.summary[0].variant == "maoeda-ir");
  CHECK(result.summary[1].variant == "no-repair");
  CHECK_FALSE(result.summary[0].hv_vs_primary);
  REQUIRE(result.summary[1].hv_vs_primary);
  REQUIRE(result.summary[1].igd_vs_primary);

  std::vector<double> a, b, ia, ib;
  for (const auto& r : result.records) {
    (r.variant == "maoeda-ir" ? a : b).push_back(r.hv_ratio);
    (r.variant == "maoeda-ir" ? ia : ib).push_back(*r.igd);
  }
  CHECK(*result.summary[1].hv_vs_primary == rank_sum_test(a, b, 0.05, true).outcome);
  CHECK(*result.summary[1].igd_vs_primary == rank_sum_test(ia, ib, 0.05, false).outcome);
  const std::string csv = summary_csv(result);
  const auto rows = parse_csv(csv);
  CHECK(rows[0].at("hv_vs_primary").empty());
  CHECK(rows[1].at("hv_vs_primary") == comparison_symbol(*result.summary[1].hv_vs_primary));
}

TEST_CASE("reduction ablation skips the corner search") {
  auto plan = quick_plan(1);
  plan.mode = Mode::AblateReduction;
  auto result = run_experiment(plan);
  REQUIRE(result.records.size() == 2);
  CHECK(result.records[1].variant == "no-reduction");
  CHECK(result.records[1].pcsea_evaluations == 0);
  CHECK(result.records[1].reduced_dimension == 12);
  CHECK(result.records[0].pcsea_evaluations > 0);
}

TEST_CASE("neighbour sweep tables") {
  auto plan = quick_plan(3);
  plan.problems = {ProblemId::DTLZ1};
  plan.budget_total = 15000 + 3000;
  auto rows = neighbor_sweep(plan, {5, 10});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].neighbors == 5);
  CHECK(rows[1].neighbors == 10);
  for (const auto& r : rows) {
    CHECK(r.problem == "dtlz1");
    CHECK(r.igd.has_value());
  }
  ExperimentResult detail;
  auto one = neighbor_sweep(plan, {5}, &detail);
  CHECK(one.size() == 1);
  CHECK(detail.records.size() == 3);
  CHECK_THROWS_AS(neighbor_sweep(plan, {}), std::invalid_argument);
}

TEST_CASE("generations to baseline: immediate, capped and rejected") {
  auto plan = quick_plan(1);
  plan.budget_total.reset();
  plan.generation_cap = 500;

  // Above the largest possible ratio, so the cap decides.
  auto capped = generations_to_baseline(plan, 2.0);
  REQUIRE(capped.records[0].ok);
  CHECK(capped.records[0].generations_to_baseline == 500);
  CHECK_FALSE(capped.records[0].baseline_reached);
  CHECK(capped.records[0].hv_history.size() == 501);
  const double first = capped.records[0].hv_history.front();
  REQUIRE(first > 0.0);

  auto immediate = generations_to_baseline(plan, first);
  REQUIRE(immediate.records[0].ok);
  CHECK(immediate.records[0].generations_to_baseline == 0);
  CHECK(immediate.records[0].baseline_reached);
  REQUIRE(immediate.summary[0].generations_to_baseline);
  CHECK(immediate.summary[0].generations_to_baseline->median == 0.0);

  CHECK_THROWS_AS(generations_to_baseline(plan, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(generations_to_baseline(plan, -0.5), std::invalid_argument);

  const auto rows = parse_csv(results_csv(capped));
  CHECK(rows[0].at("baseline_reached") == "capped");
  CHECK(rows[0].at("gens_to_baseline") == "500");
}

TEST_CASE("failed runs are recorded and the grid continues") {
  auto plan = quick_plan(2);
  plan.neighbors = 7;
  plan.budget_total = 41000;  // M = 8: 1000 main evaluations < 7 x 156 initial points
  plan.max_generations = 1;
  plan.objectives = {8, 3};
  auto result = run_experiment(plan);
  REQUIRE(result.records.size() == 4);
  CHECK(result.failures() == 2);
  CHECK_FALSE(result.records[0].ok);
  CHECK(result.records[0].error.find("budget") != std::string::npos);
  CHECK(result.records[2].ok);
  CHECK(result.summary[0].runs_failed == 2);
  CHECK_FALSE(result.summary[0].hv);
  CHECK(result.summary[1].runs_ok == 2);
  const auto rows = parse_csv(results_csv(result));
  CHECK(rows[0].at("status") == "failed");
  CHECK(rows[2].at("status") == "ok");
}

TEST_CASE("plans without a usable budget are rejected before running") {
  auto plan = quick_plan(1);
  plan.budget_total.reset();
  plan.objectives = {4};
  CHECK_THROWS_AS(run_experiment(plan), std::invalid_argument);
  plan.budget_total = 20000;
  plan.objectives = {8};  // below the default corner search share
  CHECK_THROWS_AS(run_experiment(plan), std::invalid_argument);
}

TEST_CASE("identical plans give byte-identical CSV, whatever the job count") {
  auto plan = quick_plan(3);
  plan.mode = Mode::AblateRepair;
  plan.keep_traces = true;
  auto a = run_experiment(plan);
  plan.jobs = 3;
  auto b = run_experiment(plan);
  CHECK(results_csv(a) == results_csv(b));
  CHECK(summary_csv(a) == summary_csv(b));
  CHECK(traces_csv(a) == traces_csv(b));
}

TEST_CASE("summary medians match a recomputation from the results CSV") {
  auto plan = quick_plan(4);
  plan.mode = Mode::AblateRepair;
  auto result = run_experiment(plan);
  std::map<std::string, std::vector<double>> hv, ig;
  for (const auto& row : parse_csv(results_csv(result))) {
    hv[row.at("variant")].push_back(std::stod(row.at("hv_ratio")));
    ig[row.at("variant")].push_back(std::stod(row.at("igd")));
  }
  for (const auto& row : parse_csv(summary_csv(result))) {
    auto h = hv.at(row.at("variant"));
    auto g = ig.at(row.at("variant"));
    std::sort(h.begin(), h.end());
    std::sort(g.begin(), g.end());
    CHECK(std::stod(row.at("hv_median")) == doctest::Approx(0.5 * (h[1] + h[2])).epsilon(1e-9));
    CHECK(std::stod(row.at("igd_median")) == doctest::Approx(0.5 * (g[1] + g[2])).epsilon(1e-9));
  }
}

TEST_CASE("reports on disk") {
  auto plan = quick_plan(1);
  plan.keep_traces = true;
  auto result = run_experiment(plan);
  const auto dir = std::filesystem::temp_directory_path() / "maoeda_report_test";
  std::filesystem::remove_all(dir);
  write_reports(result, dir);
  for (const char* f : {"results.csv", "summary.csv", "results.json", "traces.csv"})
    CHECK(std::filesystem::exists(dir / f));

  std::ifstream in(dir / "results.json");
  auto j = nlohmann::json::parse(in);
  CHECK(j["plan"]["dispersion"] == "iqr/2");
  CHECK(j["records"].size() == 1);
  CHECK(j["records"][0]["hv_ratio"].get<double>() == doctest::Approx(result.records[0].hv_ratio));
  CHECK(j["records"][0]["final_objectives"].size() == 120);
  CHECK(j["summary"][0]["hv"]["cell"] == format_cell(*result.summary[0].hv));

  const auto traces = parse_csv(traces_csv(result));
  CHECK(traces.size() == result.records[0].trace.size());

  plan.keep_traces = false;
  std::filesystem::remove_all(dir);
  write_reports(run_experiment(plan), dir);
  CHECK_FALSE(std::filesystem::exists(dir / "traces.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("minus variants have no IGD and report excluded points") {
  auto plan = quick_plan(1);
  plan.problems = {ProblemId::DTLZ2m};
  auto result = run_experiment(plan);
  REQUIRE(result.records[0].ok);
  CHECK_FALSE(result.records[0].igd);
  CHECK_FALSE(result.summary[0].igd);
  CHECK(parse_csv(results_csv(result))[0].at("igd") == "NA");
}
