#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "maoeda/evolution.hpp"

using namespace maoeda;

namespace {

// O(n^2 M) peeling oracle.
std::vector<std::vector<std::size_t>> brute_fronts(const Matrix& pts) {
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<bool> done(pts.size(), false);
  std::size_t left = pts.size();
  while (left > 0) {
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (done[i]) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
        if (!done[j] && j != i && dominates(pts[j], pts[i])) dominated = true;
      if (!dominated) front.push_back(i);
    }
    for (std::size_t i : front) done[i] = true;
    left -= front.size();
    fronts.push_back(front);
  }
  return fronts;
}

Matrix random_points(std::mt19937_64& rng, std::size_t n, std::size_t m, bool grid) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> g(0, 4);
  Matrix pts(n, Vector(m));
  for (auto& p : pts)
    for (double& v : p) v = grid ? g(rng) : u(rng);
  return pts;
}

Vector on_circle(double degrees) {
  const double r = degrees * M_PI / 180.0;
  return {std::cos(r), std::sin(r)};
}

std::vector<Solution> as_solutions(const Matrix& f, std::size_t dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  std::vector<Solution> out;
  for (const auto& v : f) {
    Solution s;
    s.x.resize(dim);
    for (double& c : s.x) c = u(rng);
    s.f = v;
    s.evaluated = true;
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("chain domination gives one point per front") {
  auto fronts = nondominated_sort({{1, 1}, {1, 2}, {2, 2}});
  REQUIRE(fronts.size() == 3);
  CHECK(fronts[0] == std::vector<std::size_t>{0});
  CHECK(fronts[1] == std::vector<std::size_t>{1});
  CHECK(fronts[2] == std::vector<std::size_t>{2});
}

TEST_CASE("mutually non-dominated set is one front; duplicates share it") {
  auto fronts = nondominated_sort({{0, 3}, {1, 2}, {2, 1}, {3, 0}, {1, 2}});
  REQUIRE(fronts.size() == 1);
  CHECK(fronts[0].size() == 5);
  CHECK(nondominated_indices({}).empty());
}

TEST_CASE("non-dominated sorting matches the pairwise oracle") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> size(1, 120);
  std::uniform_int_distribution<std::size_t> dims(2, 15);
  for (int t = 0; t < 80; ++t) {
    const bool grid = t % 2 == 0;  // integer grid produces ties and duplicates
    auto pts = random_points(rng, size(rng), dims(rng), grid);
    auto want = brute_fronts(pts);
    CHECK(nondominated_sort(pts) == want);
    CHECK(nondominated_indices(pts) == want.front());
  }
}

TEST_CASE("environmental selection keeps a balanced population unchanged") {
  Matrix vectors = {{1, 0}, {1, 1}, {0, 1}};
  Matrix cands = {on_circle(2), on_circle(5), on_circle(43), on_circle(47), on_circle(85), on_circle(88)};
  auto picked = environmental_selection(cands, vectors, 2);
  CHECK(picked == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("crowded vector drops the two farthest of its front") {
  Matrix vectors = {{1, 1}};
  Matrix cands = {{0.5, 0.5}, {0.45, 0.55}, {0.55, 0.45}, {0.3, 0.7}, {0.8, 0.2}};
  auto picked = environmental_selection(cands, vectors, 3);
  std::set<std::size_t> got(picked.begin(), picked.end());
  CHECK(got == std::set<std::size_t>{0, 1, 2});
}

TEST_CASE("crowded vector keeps earlier fronts first") {
  Matrix vectors = {{1, 1}};
  // Index 3 lies on the vector but is dominated by index 0.
  Matrix cands = {{0.4, 0.4}, {0.2, 0.7}, {0.7, 0.2}, {0.45, 0.45}, {0.9, 0.9}};
  auto picked = environmental_selection(cands, vectors, 3);
  std::set<std::size_t> got(picked.begin(), picked.end());
  CHECK(got == std::set<std::size_t>{0, 1, 2});
}

TEST_CASE("empty vector takes its nearest pool members") {
  Matrix vectors = {{1, 0}, {0, 1}};
  Matrix cands = {{1.0, 0.0}, {0.9, 0.1}, {2.0, 0.5}, {0.95, 1.5}, {3.0, 3.0}};
  auto picked = environmental_selection(cands, vectors, 2);
  REQUIRE(picked.size() == 4);
  std::set<std::size_t> first(picked.begin(), picked.begin() + 2);
  CHECK(first == std::set<std::size_t>{0, 1});
  CHECK(picked[2] == 3);
  CHECK(picked[3] == 2);
}

TEST_CASE("environmental selection size and uniqueness on random pools") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    Matrix vectors = das_dennis(3, 4);
    const std::size_t T = 2 + t % 4;
    std::uniform_int_distribution<std::size_t> extra(0, 40);
    auto pts = random_points(rng, T * vectors.size() + extra(rng), 3, t % 3 == 0);
    auto picked = environmental_selection(pts, vectors, T);
    CHECK(picked.size() == T * vectors.size());
    std::set<std::size_t> unique(picked.begin(), picked.end());
    CHECK(unique.size() == picked.size());
    for (std::size_t i : picked) CHECK(i < pts.size());
  }
  CHECK_THROWS_AS(environmental_selection({{1, 1}}, {{1, 0}, {0, 1}}, 1), std::invalid_argument);
}

TEST_CASE("final selection") {
  Matrix vectors = {{1, 0}, {1, 1}, {0, 1}};
  Matrix pool = {on_circle(1), on_circle(30), on_circle(44), on_circle(60), on_circle(89), {2, 2}};
  auto picked = final_selection(pool, vectors);
  std::set<std::size_t> got(picked.begin(), picked.end());
  CHECK(got == std::set<std::size_t>{0, 2, 4});

  Matrix copies(12, Vector{0.4, 0.6});
  auto dup = final_selection(copies, vectors);
  CHECK(dup.size() == 3);
  CHECK(std::set<std::size_t>(dup.begin(), dup.end()).size() == 3);
}

TEST_CASE("repair samples T points for each uncovered vector only") {
  std::mt19937_64 rng(5);
  Matrix vectors = {{1, 0}, {1, 1}, {0, 1}};
  ModelSettings settings;
  settings.neighbors = 4;
  Rng r = make_stream(1, "repair");

  // Non-dominated members cover every vector.
  auto covered = as_solutions({on_circle(1), on_circle(45), on_circle(89), {2, 2}, {1.5, 1.5}}, 3, rng);
  auto none = repair_diversity(covered, vectors, settings, r);
  CHECK(none.samples.empty());
  CHECK(none.unassigned == 0);

  // Nothing non-dominated near (0, 1).
  auto gap = as_solutions({on_circle(1), on_circle(10), on_circle(45), {2, 2}, {1.5, 1.6}, {1.2, 3.0}}, 3, rng);
  auto one = repair_diversity(gap, vectors, settings, r);
  CHECK(one.unassigned == 1);
  CHECK(one.samples.size() == 4);
  for (const auto& s : one.samples) CHECK(s.size() == 3);
}

TEST_CASE("offspring: T per vector, degenerate single parent") {
  std::mt19937_64 rng(6);
  ModelSettings settings;
  settings.neighbors = 3;
  Rng r = make_stream(2, "offspring");
  auto front = as_solutions({on_circle(10), on_circle(30), on_circle(60), on_circle(80)}, 2, rng);
  auto q = generate_offspring(front, {{1, 0}, {0, 1}}, settings, r);
  CHECK(q.size() == 6);

  auto single = as_solutions({{0.5, 0.5}}, 2, rng);
  auto copies = generate_offspring(single, {{1, 0}, {0, 1}}, settings, r);
  REQUIRE(copies.size() == 6);
  for (const auto& c : copies) CHECK(c == single[0].x);
  CHECK_THROWS_AS(generate_offspring({}, {{1, 0}}, settings, r), std::invalid_argument);
}

TEST_CASE("offspring of a collinear front stay in the enlarged segment") {
  std::vector<Solution> front;
  for (int i = 0; i < 3; ++i) {
    Solution s;
    s.x = {0.1 * i, 0.1 * i};
    s.f = on_circle(20.0 * i + 20.0);
    front.push_back(s);
  }
  ModelSettings settings;
  settings.neighbors = 3;
  settings.gamma = 0.5;
  Rng r = make_stream(3, "offspring");
  // Segment from (0,0) to (0.2,0.2): projections in [-0.1414, 0.1414] on the
  // unit diagonal, enlarged by half the length on both sides.
  const double half = 0.1 * std::sqrt(2.0);
  for (const auto& x : generate_offspring(front, {{1, 0}, {1, 1}}, settings, r)) {
    CHECK(std::abs(x[0] - x[1]) < 1e-6);
    const double tau = ((x[0] - 0.1) + (x[1] - 0.1)) / std::sqrt(2.0);
    CHECK(std::abs(tau) <= 2.0 * half + 1e-12);
  }
}

TEST_CASE("default divisions reproduce the vector counts") {
  const std::pair<std::size_t, std::size_t> want[] = {{3, 120}, {5, 126}, {8, 156}, {10, 110}, {15, 135}};
  for (auto [m, n] : want) {
    auto [h1, h2] = default_divisions(m);
    CHECK(two_layer(m, h1, h2).vectors.size() == n);
  }
}

namespace {

RunConfig small_config(std::uint64_t seed) {
  RunConfig c;
  c.spec = make_problem(ProblemId::DTLZ2, 3);
  c.reference_vectors = das_dennis(3, 4);
  c.neighbors = 5;
  c.seed = seed;
  c.pcsea.generations = 20;
  c.max_generations = 8;
  return c;
}

}  // namespace

TEST_CASE("run returns one solution per vector and respects the budget") {
  auto config = small_config(1);
  config.eval_budget = 75 * 6 + 13;
  auto result = run(config);
  CHECK(result.final_solutions.size() == 15);
  CHECK(result.population.size() == 75);
  CHECK(result.main_evaluations <= config.eval_budget);
  CHECK(result.pcsea_evaluations == 100 * 21);
  for (const auto& s : result.final_solutions) {
    CHECK(s.x.size() == config.spec.variables);
    for (double v : s.x) CHECK((v >= 0.0 && v <= 1.0));
    CHECK(evaluate(config.spec, s.x) == s.f);
  }
  std::size_t prev = 75;
  for (const auto& t : result.trace) {
    CHECK(t.evaluations >= prev);
    prev = t.evaluations;
  }
}

TEST_CASE("final solutions sit on distinct vectors when the front is large enough") {
  auto result = run(small_config(2));
  Matrix f;
  for (const auto& s : result.final_solutions) f.push_back(s.f);
  Matrix pool_f;
  for (const auto& s : result.population) pool_f.push_back(s.f);
  if (nondominated_indices(pool_f).size() >= result.vectors.size()) {
    auto assoc = associate(f, result.vectors.mapped);
    CHECK(std::set<std::size_t>(assoc.begin(), assoc.end()).size() == f.size());
  }
}

TEST_CASE("zero generations selects straight from the initial population") {
  auto config = small_config(3);
  config.max_generations = 0;
  auto result = run(config);
  CHECK(result.generations == 0);
  CHECK(result.trace.empty());
  CHECK(result.main_evaluations == 75);
  CHECK(result.final_solutions.size() == 15);
}

TEST_CASE("ablations") {
  auto config = small_config(4);
  config.ablations.no_dimension_reduction = true;
  auto plain = run(config);
  CHECK(plain.reduction.removed.empty());
  CHECK(plain.reduction.reduced_dimension() == config.spec.variables);
  CHECK(plain.pcsea_evaluations == 0);
  CHECK_FALSE(plain.archive);

  config = small_config(4);
  config.ablations.no_diversity_repair = true;
  auto norepair = run(config);
  for (const auto& t : norepair.trace) CHECK(t.repaired == 0);
}

TEST_CASE("repair ablation leaves the corner search and initial population untouched") {
  std::vector<Matrix> initial;
  for (bool ablate : {false, true}) {
    auto config = small_config(5);
    config.ablations.no_diversity_repair = ablate;
    Matrix f0;
    run(config, [&](const GenerationView& view) {
      if (view.generation == 0)
        for (const auto& s : view.population) f0.push_back(s.f);
      return true;
    });
    initial.push_back(f0);
  }
  CHECK(initial[0] == initial[1]);
}

TEST_CASE("runs are deterministic and observers can stop them") {
  auto a = run(small_config(6));
  auto b = run(small_config(6));
  REQUIRE(a.final_solutions.size() == b.final_solutions.size());
  for (std::size_t i = 0; i < a.final_solutions.size(); ++i) CHECK(a.final_solutions[i].f == b.final_solutions[i].f);

  auto stopped = run(small_config(6), [](const GenerationView& v) { return v.generation < 2; });
  CHECK(stopped.generations == 2);
  CHECK(stopped.stopped_by_observer);
}

TEST_CASE("run rejects impossible configurations") {
  auto config = small_config(7);
  config.neighbors = 1;
  CHECK_THROWS_AS(run(config), std::invalid_argument);
  config = small_config(7);
  config.eval_budget = 10;
  CHECK_THROWS_AS(run(config), std::invalid_argument);
}
