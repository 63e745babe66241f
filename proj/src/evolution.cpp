#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "maoeda/evolution.hpp"

namespace maoeda {

namespace {

Matrix objectives_of(const std::vector<Solution>& sols) {
  Matrix f;
  f.reserve(sols.size());
  for (const auto& s : sols) f.push_back(s.f);
  return f;
}

/// Row-major |points| x |vectors| perpendicular distances.
struct DistanceTable {
  std::size_t columns = 0;
  std::vector<double> values;

  DistanceTable(const std::vector<Solution>& sols, const Matrix& vectors) : columns(vectors.size()) {
    values.resize(sols.size() * columns);
    for (std::size_t p = 0; p < sols.size(); ++p)
      for (std::size_t i = 0; i < columns; ++i) values[p * columns + i] = perpendicular_distance(sols[p].f, vectors[i]);
  }
  [[nodiscard]] double at(std::size_t point, std::size_t vec) const { return values[point * columns + vec]; }
};

/// Indices of the `count` rows nearest to vector `vec` (ties by index).
std::vector<std::size_t> nearest_rows(const DistanceTable& table, std::size_t rows, std::size_t vec,
                                      std::size_t count) {
  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(rows);
  for (std::size_t p = 0; p < rows; ++p) ranked.emplace_back(table.at(p, vec), p);
  count = std::min(count, rows);
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(count), ranked.end());
  std::vector<std::size_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = ranked[i].second;
  return out;
}

RegularityModel point_model(const Vector& x, double gamma) {
  RegularityModel model;
  model.mean = x;
  model.gamma = gamma;
  model.degenerate = true;
  return model;
}

}  // namespace

RepairOutcome repair_diversity(const std::vector<Solution>& population, const Matrix& vectors,
                               const ModelSettings& settings, Rng& rng) {
  RepairOutcome out;
  if (population.empty() || vectors.empty()) return out;

  std::vector<Solution> front;
  for (std::size_t idx : nondominated_indices(objectives_of(population))) front.push_back(population[idx]);

  const DistanceTable pop_dist(population, vectors);
  const DistanceTable front_dist(front, vectors);

  std::vector<bool> assigned(vectors.size(), false);
  for (std::size_t s = 0; s < front.size(); ++s) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < vectors.size(); ++i)
      if (front_dist.at(s, i) < front_dist.at(s, best)) best = i;
    assigned[best] = true;
  }

  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (assigned[i]) continue;
    ++out.unassigned;
    Matrix neighbours;
    for (std::size_t p : nearest_rows(pop_dist, population.size(), i, settings.neighbors))
      neighbours.push_back(population[p].x);
    const auto nd = nearest_rows(front_dist, front.size(), i, 1);
    if (!nd.empty()) neighbours.push_back(front[nd.front()].x);
    if (neighbours.size() < 2) {
      ++out.skipped;
      continue;
    }
    const auto model = build_submodel(neighbours, settings.beta, settings.gamma, settings.noise);
    for (auto& x : sample_model(model, settings.neighbors, rng, settings.box)) out.samples.push_back(std::move(x));
  }
  return out;
}

Matrix generate_offspring(const std::vector<Solution>& nondominated, const Matrix& vectors,
                          const ModelSettings& settings, Rng& rng) {
  if (nondominated.empty()) throw std::invalid_argument("generate_offspring: empty non-dominated set");
  Matrix out;
  out.reserve(settings.neighbors * vectors.size());
  const DistanceTable table(nondominated, vectors);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    RegularityModel model;
    if (nondominated.size() < 2) {
      model = point_model(nondominated.front().x, settings.gamma);
    } else {
      Matrix neighbours;
      const auto near = nearest_rows(table, nondominated.size(), i, settings.neighbors);
      for (std::size_t p : near) neighbours.push_back(nondominated[p].x);
      // The single nearest member is added again on purpose: T or T+1 rows.
      neighbours.push_back(nondominated[near.front()].x);
      model = build_submodel(neighbours, settings.beta, settings.gamma, settings.noise);
    }
    for (auto& x : sample_model(model, settings.neighbors, rng, settings.box)) out.push_back(std::move(x));
  }
  return out;
}

std::pair<std::size_t, std::size_t> default_divisions(std::size_t objectives) {
  switch (objectives) {
    case 2: return {99, 0};
    case 3: return {14, 0};
    case 5: return {5, 0};
    case 8: return {3, 2};
    case 10: return {2, 2};
    case 15: return {2, 1};
    default: break;
  }
  // Other M: single layer of at least ~100 vectors while H >= M, else two layers.
  std::size_t h = 1;
  while (simplex_lattice_size(objectives, h) < 100) ++h;
  if (h < objectives) return {2, 1};
  return {h, 0};
}

namespace {

class Evaluator {
 public:
  Evaluator(const ProblemSpec& spec, const ReductionMap& map, std::size_t budget)
      : spec_(spec), map_(map), budget_(budget) {}

  [[nodiscard]] std::size_t used() const { return used_; }
  [[nodiscard]] bool exhausted() const { return used_ >= budget_; }

  /// Evaluates samples in order until the budget runs out; the rest are dropped.
  std::vector<Solution> operator()(const Matrix& reduced) {
    std::vector<Solution> out;
    out.reserve(reduced.size());
    for (const auto& x : reduced) {
      if (exhausted()) break;
      Solution s;
      const Vector full = to_full_space(x, map_);
      s.x = to_reduced_space(full, map_);
      s.f = evaluate(spec_, full);
      s.evaluated = true;
      ++used_;
      out.push_back(std::move(s));
    }
    return out;
  }

 private:
  const ProblemSpec& spec_;
  const ReductionMap& map_;
  std::size_t budget_;
  std::size_t used_ = 0;
};

void append(std::vector<Solution>& to, std::vector<Solution> from) {
  to.insert(to.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end()));
}

}  // namespace

RunResult run(const RunConfig& config, const GenerationObserver& observer) {
  const ProblemSpec& spec = config.spec;
  const std::size_t m = spec.objectives;
  if (config.neighbors < 2) throw std::invalid_argument("run: neighbour size T must be at least 2");

  Matrix simplex = config.reference_vectors;
  if (simplex.empty()) {
    const auto [h1, h2] = default_divisions(m);
    simplex = two_layer(m, h1, h2).vectors;
  }
  const std::size_t n_vec = simplex.size();
  const std::size_t pop_size = config.neighbors * n_vec;
  if (config.eval_budget < pop_size) {
    throw std::invalid_argument("run: evaluation budget " + std::to_string(config.eval_budget) +
                                " cannot cover the initial population of " + std::to_string(pop_size));
  }

  RunResult result;

  // Dimension reduction from corner-search training data.
  Matrix evidence;
  if (config.ablations.no_dimension_reduction) {
    result.reduction = ReductionMap::identity(spec.variables);
  } else {
    Rng pcsea_rng = make_stream(config.seed, "pcsea");
    result.archive = pcsea_search(spec, config.pcsea, pcsea_rng);
    result.pcsea_evaluations = result.archive->evaluations_used;
    if (result.archive->solutions.size() >= 2) {
      result.reduction = reduce_dimensions(result.archive->decisions(), config.alpha, kZeroColumnTolerance,
                                           config.column_tolerance);
    } else {
      result.reduction = ReductionMap::identity(spec.variables);
      result.diagnostics.push_back("corner archive too small for reduction; using full space");
    }
    if (result.reduction.degenerate) result.diagnostics.push_back("training data is a single point; k = 0");
    evidence = result.archive->objectives();
  }
  const ReductionMap& map = result.reduction;
  const std::size_t k = map.reduced_dimension();

  ModelSettings model;
  model.neighbors = config.neighbors;
  model.beta = config.beta;
  model.gamma = config.gamma;
  model.noise = config.noise;
  SampleBox box{Vector(k), Vector(k)};
  for (std::size_t l = 0; l < k; ++l) {
    box.lower[l] = -map.mean[map.retained[l]];
    box.upper[l] = 1.0 - map.mean[map.retained[l]];
  }
  model.box = box;

  Evaluator evaluate_all(spec, map, config.eval_budget);

  // Initial population, uniform over the feasible part of the reduced space.
  Rng init_rng = make_stream(config.seed, "init");
  Matrix initial(pop_size, Vector(k));
  for (auto& x : initial)
    for (std::size_t l = 0; l < k; ++l) x[l] = std::uniform_real_distribution<double>(box.lower[l], box.upper[l])(init_rng);
  std::vector<Solution> population = evaluate_all(initial);

  if (evidence.empty()) {
    const Matrix f = objectives_of(population);
    for (std::size_t idx : nondominated_indices(f)) evidence.push_back(f[idx]);
  }
  ReferenceVectorSet vectors = map_vectors(simplex, evidence);
  bool keep_going = true;
  if (observer) keep_going = observer(GenerationView{0, evaluate_all.used(), population, vectors});

  Rng repair_rng = make_stream(config.seed, "repair");
  Rng offspring_rng = make_stream(config.seed, "offspring");

  std::size_t generation = 0;
  while (keep_going && generation < config.max_generations && !evaluate_all.exhausted()) {
    GenerationTrace trace;
    std::vector<Solution> pool = population;

    if (!config.ablations.no_diversity_repair) {
      auto repair = repair_diversity(population, vectors.mapped, model, repair_rng);
      trace.unassigned = repair.unassigned;
      if (repair.skipped > 0) {
        result.diagnostics.push_back("generation " + std::to_string(generation + 1) + ": " +
                                     std::to_string(repair.skipped) + " vectors skipped in repair");
      }
      auto repaired = evaluate_all(repair.samples);
      trace.repaired = repaired.size();
      append(pool, std::move(repaired));
    } else {
      // Still report coverage so ablated traces stay comparable.
      const Matrix f = objectives_of(population);
      std::vector<bool> assigned(n_vec, false);
      Matrix front;
      for (std::size_t idx : nondominated_indices(f)) front.push_back(f[idx]);
      for (std::size_t i : associate(front, vectors.mapped)) assigned[i] = true;
      trace.unassigned = static_cast<std::size_t>(std::count(assigned.begin(), assigned.end(), false));
    }

    {
      const Matrix f = objectives_of(pool);
      std::vector<Solution> front;
      Matrix front_f;
      for (std::size_t idx : nondominated_indices(f)) {
        front.push_back(pool[idx]);
        front_f.push_back(f[idx]);
      }
      vectors = map_vectors(simplex, front_f);
      if (!evaluate_all.exhausted()) {
        auto offspring = evaluate_all(generate_offspring(front, vectors.mapped, model, offspring_rng));
        trace.offspring = offspring.size();
        append(pool, std::move(offspring));
      }
    }

    const Matrix pool_f = objectives_of(pool);
    Matrix front_f;
    for (std::size_t idx : nondominated_indices(pool_f)) front_f.push_back(pool_f[idx]);
    trace.front_size = front_f.size();
    vectors = map_vectors(simplex, front_f);

    std::vector<Solution> next;
    next.reserve(pop_size);
    for (std::size_t idx : environmental_selection(pool_f, vectors.mapped, config.neighbors))
      next.push_back(std::move(pool[idx]));
    population = std::move(next);

    ++generation;
    trace.generation = generation;
    trace.evaluations = evaluate_all.used();
    result.trace.push_back(trace);
    if (observer) keep_going = observer(GenerationView{generation, evaluate_all.used(), population, vectors});
  }

  for (std::size_t idx : final_selection(objectives_of(population), vectors.mapped)) {
    Solution s = population[idx];
    s.x = to_full_space(s.x, map);
    result.final_solutions.push_back(std::move(s));
  }
  result.population = std::move(population);
  result.vectors = std::move(vectors);
  result.generations = generation;
  result.stopped_by_observer = !keep_going;
  result.main_evaluations = evaluate_all.used();
  return result;
}

}  // namespace maoeda
