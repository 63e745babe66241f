#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <stdexcept>

#include "maoeda/evolution.hpp"
#include "maoeda/reduction.hpp"

namespace maoeda {

double exclusive_l2(std::span<const double> f, std::size_t i) {
  if (i >= f.size()) {
    throw std::out_of_range("exclusive_l2: objective index " + std::to_string(i) + " out of range for M=" +
                            std::to_string(f.size()));
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    if (j != i) sum += f[j] * f[j];
  return sum;
}

Matrix CornerArchive::decisions() const {
  Matrix out;
  out.reserve(solutions.size());
  for (const auto& s : solutions) out.push_back(s.x);
  return out;
}

Matrix CornerArchive::objectives() const {
  Matrix out;
  out.reserve(solutions.size());
  for (const auto& s : solutions) out.push_back(s.f);
  return out;
}

std::vector<std::size_t> corner_ranks(const Matrix& objectives) {
  const std::size_t count = objectives.size();
  std::vector<std::size_t> best(count, count);
  if (count == 0) return best;
  const std::size_t m = objectives.front().size();
  std::vector<double> key(count);
  std::vector<double> norm(count);
  for (std::size_t p = 0; p < count; ++p)
    norm[p] = std::inner_product(objectives[p].begin(), objectives[p].end(), objectives[p].begin(), 0.0);
  std::vector<std::size_t> order(count);
  for (std::size_t list = 0; list < 2 * m; ++list) {
    for (std::size_t p = 0; p < count; ++p) {
      key[p] = list < m ? objectives[p][list] : exclusive_l2(objectives[p], list - m);
    }
    std::iota(order.begin(), order.end(), 0);
    // Equal keys (exact zeros on a boundary face are common) fall back to the
    // full squared norm, then to index order.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (key[a] != key[b]) return key[a] < key[b];
      return norm[a] < norm[b];
    });
    for (std::size_t pos = 0; pos < count; ++pos) best[order[pos]] = std::min(best[order[pos]], pos);
  }
  return best;
}

namespace {

void sbx(Vector& a, Vector& b, double eta, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (unit(rng) > 0.5) continue;
    double y1 = std::min(a[i], b[i]);
    double y2 = std::max(a[i], b[i]);
    if (y2 - y1 < 1e-14) continue;
    const double r = unit(rng);
    auto child = [&](double beta) {
      const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
      const double betaq = r <= 1.0 / alpha ? std::pow(r * alpha, 1.0 / (eta + 1.0))
                                            : std::pow(1.0 / (2.0 - r * alpha), 1.0 / (eta + 1.0));
      return betaq;
    };
    const double bq1 = child(1.0 + 2.0 * y1 / (y2 - y1));
    const double c1 = 0.5 * ((y1 + y2) - bq1 * (y2 - y1));
    const double bq2 = child(1.0 + 2.0 * (1.0 - y2) / (y2 - y1));
    const double c2 = 0.5 * ((y1 + y2) + bq2 * (y2 - y1));
    double lo = std::clamp(c1, 0.0, 1.0);
    double hi = std::clamp(c2, 0.0, 1.0);
    if (unit(rng) <= 0.5) std::swap(lo, hi);
    a[i] = lo;
    b[i] = hi;
  }
}

void polynomial_mutation(Vector& x, double probability, double eta, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double& xi : x) {
    if (unit(rng) >= probability) continue;
    const double d1 = xi;
    const double d2 = 1.0 - xi;
    const double r = unit(rng);
    const double power = 1.0 / (eta + 1.0);
    double dq = 0.0;
    if (r < 0.5) {
      const double v = 2.0 * r + (1.0 - 2.0 * r) * std::pow(1.0 - d1, eta + 1.0);
      dq = std::pow(v, power) - 1.0;
    } else {
      const double v = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * std::pow(1.0 - d2, eta + 1.0);
      dq = 1.0 - std::pow(v, power);
    }
    xi = std::clamp(xi + dq, 0.0, 1.0);
  }
}

}  // namespace

CornerArchive pcsea_search(const ProblemSpec& spec, const PcseaSettings& settings, Rng& rng) {
  const std::size_t pop = settings.population;
  if (pop < 2) throw std::invalid_argument("pcsea_search needs a population of at least 2");
  const std::size_t n = spec.variables;
  const double pm = settings.mutation_probability > 0.0 ? settings.mutation_probability
                                                         : 1.0 / static_cast<double>(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, pop - 1);

  CornerArchive archive;
  std::vector<Solution> population(pop);
  for (auto& s : population) {
    s.x.resize(n);
    for (double& v : s.x) v = unit(rng);
    s.f = evaluate(spec, s.x);
    s.evaluated = true;
  }
  archive.evaluations_used = pop;

  auto ranks_of = [](const std::vector<Solution>& sols) {
    Matrix f;
    f.reserve(sols.size());
    for (const auto& s : sols) f.push_back(s.f);
    return corner_ranks(f);
  };

  std::vector<std::size_t> fitness = ranks_of(population);
  for (std::size_t gen = 0; gen < settings.generations; ++gen) {
    auto tournament = [&]() {
      const std::size_t a = pick(rng);
      const std::size_t b = pick(rng);
      return fitness[b] < fitness[a] ? b : a;
    };
    std::vector<Solution> merged = population;
    merged.reserve(2 * pop);
    while (merged.size() < 2 * pop) {
      Vector c1 = population[tournament()].x;
      Vector c2 = population[tournament()].x;
      if (unit(rng) < settings.crossover_probability) sbx(c1, c2, settings.crossover_eta, rng);
      for (Vector* c : {&c1, &c2}) {
        if (merged.size() >= 2 * pop) break;
        polynomial_mutation(*c, pm, settings.mutation_eta, rng);
        Solution s;
        s.x = std::move(*c);
        s.f = evaluate(spec, s.x);
        s.evaluated = true;
        merged.push_back(std::move(s));
        ++archive.evaluations_used;
      }
    }
    const auto merged_rank = ranks_of(merged);
    std::vector<std::size_t> order(merged.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return merged_rank[a] < merged_rank[b]; });
    std::vector<Solution> next;
    next.reserve(pop);
    for (std::size_t i = 0; i < pop; ++i) next.push_back(std::move(merged[order[i]]));
    population = std::move(next);
    fitness = ranks_of(population);
    archive.generations_used = gen + 1;
  }

  Matrix f;
  f.reserve(pop);
  for (const auto& s : population) f.push_back(s.f);
  for (std::size_t idx : nondominated_indices(f)) archive.solutions.push_back(population[idx]);
  return archive;
}

void write_archive_csv(const std::filesystem::path& path, const CornerArchive& archive) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  if (archive.solutions.empty()) return;
  const std::size_t n = archive.solutions.front().x.size();
  const std::size_t m = archive.solutions.front().f.size();
  for (std::size_t j = 0; j < n; ++j) os << (j ? "," : "") << 'x' << (j + 1);
  for (std::size_t j = 0; j < m; ++j) os << ",f" << (j + 1);
  os << '\n' << std::setprecision(17);
  for (const auto& s : archive.solutions) {
    for (std::size_t j = 0; j < n; ++j) os << (j ? "," : "") << s.x[j];
    for (double v : s.f) os << ',' << v;
    os << '\n';
  }
}

}  // namespace maoeda
