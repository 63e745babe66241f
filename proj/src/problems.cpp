#include "maoeda/problems.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "maoeda/refvecs.hpp"

namespace maoeda {

namespace {

double multimodal_g(std::span<const double> tail) {
  double sum = 0.0;
  for (double xi : tail) {
    const double d = xi - 0.5;
    sum += d * d - std::cos(20.0 * std::numbers::pi * d);
  }
  return 100.0 * (static_cast<double>(tail.size()) + sum);
}

double sphere_g(std::span<const double> tail) {
  double sum = 0.0;
  for (double xi : tail) sum += (xi - 0.5) * (xi - 0.5);
  return sum;
}

Vector linear_front(std::span<const double> x, std::size_t m, double g) {
  Vector f(m, 0.5 * (1.0 + g));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j + i + 1 < m; ++j) f[i] *= x[j];
    if (i > 0) f[i] *= 1.0 - x[m - i - 1];
  }
  return f;
}

Vector spherical_front(std::span<const double> x, std::size_t m, double g, double bias) {
  Vector f(m, 1.0 + g);
  const double half_pi = 0.5 * std::numbers::pi;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j + i + 1 < m; ++j) f[i] *= std::cos(std::pow(x[j], bias) * half_pi);
    if (i > 0) f[i] *= std::sin(std::pow(x[m - i - 1], bias) * half_pi);
  }
  return f;
}

}  // namespace

bool ProblemSpec::is_minus() const {
  return id == ProblemId::DTLZ1m || id == ProblemId::DTLZ2m || id == ProblemId::DTLZ3m ||
         id == ProblemId::DTLZ4m;
}

ProblemId ProblemSpec::base() const {
  switch (id) {
    case ProblemId::DTLZ1m: return ProblemId::DTLZ1;
    case ProblemId::DTLZ2m: return ProblemId::DTLZ2;
    case ProblemId::DTLZ3m: return ProblemId::DTLZ3;
    case ProblemId::DTLZ4m: return ProblemId::DTLZ4;
    default: return id;
  }
}

std::string ProblemSpec::name() const { return problem_name(id); }

std::string problem_name(ProblemId id) {
  switch (id) {
    case ProblemId::DTLZ1: return "dtlz1";
    case ProblemId::DTLZ2: return "dtlz2";
    case ProblemId::DTLZ3: return "dtlz3";
    case ProblemId::DTLZ4: return "dtlz4";
    case ProblemId::DTLZ1m: return "dtlz1m";
    case ProblemId::DTLZ2m: return "dtlz2m";
    case ProblemId::DTLZ3m: return "dtlz3m";
    case ProblemId::DTLZ4m: return "dtlz4m";
  }
  return "unknown";
}

std::optional<ProblemId> parse_problem_id(std::string_view text) {
  std::string s;
  for (char c : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (const char* suffix : {"_minus", "-minus", "-", "_m"}) {
    const std::string_view sv(suffix);
    if (s.size() > sv.size() && s.ends_with(sv)) {
      s = s.substr(0, s.size() - sv.size()) + "m";
      break;
    }
  }
  for (auto id : {ProblemId::DTLZ1, ProblemId::DTLZ2, ProblemId::DTLZ3, ProblemId::DTLZ4,
                  ProblemId::DTLZ1m, ProblemId::DTLZ2m, ProblemId::DTLZ3m, ProblemId::DTLZ4m}) {
    if (s == problem_name(id)) return id;
  }
  return std::nullopt;
}

ProblemSpec make_problem(ProblemId id, std::size_t objectives) {
  if (objectives < 2) {
    throw std::invalid_argument("DTLZ problems need at least 2 objectives, got " +
                                std::to_string(objectives));
  }
  ProblemSpec spec;
  spec.id = id;
  spec.objectives = objectives;
  spec.distance = spec.base() == ProblemId::DTLZ1 ? 5 : 10;
  spec.variables = objectives + spec.distance - 1;
  return spec;
}

Vector evaluate(const ProblemSpec& spec, std::span<const double> x) {
  if (x.size() != spec.variables) {
    throw std::invalid_argument("decision vector has length " + std::to_string(x.size()) + ", " +
                                spec.name() + " with M=" + std::to_string(spec.objectives) +
                                " expects " + std::to_string(spec.variables));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i])) throw std::invalid_argument("decision variable " + std::to_string(i) + " is NaN");
    if (x[i] < 0.0 || x[i] > 1.0) {
      throw std::invalid_argument("decision variable " + std::to_string(i) + " outside [0,1]");
    }
  }
  const std::size_t m = spec.objectives;
  const auto tail = x.subspan(m - 1);
  Vector f;
  switch (spec.base()) {
    case ProblemId::DTLZ1: f = linear_front(x, m, multimodal_g(tail)); break;
    case ProblemId::DTLZ2: f = spherical_front(x, m, sphere_g(tail), 1.0); break;
    case ProblemId::DTLZ3: f = spherical_front(x, m, multimodal_g(tail), 1.0); break;
    case ProblemId::DTLZ4: f = spherical_front(x, m, sphere_g(tail), kDtlz4Alpha); break;
    default: throw std::logic_error("unreachable problem id");
  }
  if (spec.is_minus()) {
    for (double& v : f) v = -v;
  }
  return f;
}

Bounds true_bounds(const ProblemSpec& spec) {
  const double extent = spec.base() == ProblemId::DTLZ1 ? 0.5 : 1.0;
  Bounds b{Vector(spec.objectives, 0.0), Vector(spec.objectives, extent)};
  if (spec.is_minus()) {
    b = Bounds{Vector(spec.objectives, -extent), Vector(spec.objectives, 0.0)};
  }
  return b;
}

Matrix sample_front(const ProblemSpec& spec, std::size_t count, Rng& rng) {
  if (count == 0) throw std::invalid_argument("sample_front needs count >= 1");
  if (spec.is_minus()) {
    throw std::invalid_argument("no analytic reference front for " + spec.name() +
                                "; supply an empirical front file");
  }
  const std::size_t m = spec.objectives;
  Matrix out;
  out.reserve(count);
  if (spec.base() == ProblemId::DTLZ1) {
    // Lattice first, then uniform simplex draws for the remainder.
    std::size_t h = 0;
    while (simplex_lattice_size(m, h + 1) <= count) ++h;
    if (h > 0) {
      for (auto& w : das_dennis(m, h)) {
        for (double& v : w) v *= 0.5;
        out.push_back(std::move(w));
      }
    }
    std::exponential_distribution<double> expo(1.0);
    while (out.size() < count) {
      Vector p(m);
      double sum = 0.0;
      for (double& v : p) {
        v = expo(rng);
        sum += v;
      }
      for (double& v : p) v = 0.5 * v / sum;
      out.push_back(std::move(p));
    }
  } else {
    std::normal_distribution<double> normal(0.0, 1.0);
    while (out.size() < count) {
      Vector p(m);
      double norm2 = 0.0;
      for (double& v : p) {
        v = std::abs(normal(rng));
        norm2 += v * v;
      }
      if (norm2 <= 0.0) continue;
      const double inv = 1.0 / std::sqrt(norm2);
      for (double& v : p) v *= inv;
      out.push_back(std::move(p));
    }
  }
  return out;
}

void write_front_file(const std::filesystem::path& path, const FrontFile& front) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << "# " << front.problem << ' ' << front.objectives << ' ' << front.points.size() << ' '
     << front.seed << '\n';
  os << std::setprecision(17);
  for (const auto& p : front.points) {
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << p[i];
    os << '\n';
  }
}

FrontFile read_front_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open front file " + path.string());
  FrontFile front;
  std::string line;
  if (!std::getline(is, line) || line.empty() || line[0] != '#') {
    throw std::runtime_error(path.string() + ": missing '# problem M count seed' header");
  }
  std::size_t count = 0;
  {
    std::istringstream hs(line.substr(1));
    if (!(hs >> front.problem >> front.objectives >> count >> front.seed)) {
      throw std::runtime_error(path.string() + ": malformed header");
    }
  }
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Vector p;
    double v = 0.0;
    while (ls >> v) p.push_back(v);
    if (p.size() != front.objectives) {
      throw std::runtime_error(path.string() + ": row has " + std::to_string(p.size()) +
                               " values, header says " + std::to_string(front.objectives));
    }
    front.points.push_back(std::move(p));
  }
  if (front.points.size() != count) {
    throw std::runtime_error(path.string() + ": header count " + std::to_string(count) +
                             " but file holds " + std::to_string(front.points.size()));
  }
  return front;
}

}  // namespace maoeda
