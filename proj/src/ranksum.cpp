#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "maoeda/metrics.hpp"

namespace maoeda {

namespace {

struct Ranked {
  std::vector<double> ranks;  // midranks of the combined sample, a first then b
  double tie_term = 0.0;      // sum of t^3 - t over tie groups
};

Ranked midranks(std::span<const double> a, std::span<const double> b) {
  std::vector<double> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return all[x] < all[y]; });
  Ranked r;
  r.ranks.resize(all.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && all[order[j + 1]] == all[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r.ranks[order[k]] = mid;
    const double t = static_cast<double>(j - i + 1);
    r.tie_term += t * t * t - t;
    i = j + 1;
  }
  return r;
}

double median(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  return n % 2 == 1 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

// Permutation distribution of the doubled rank sum of `na` items drawn from
// the combined doubled midranks. Counts are stored as doubles (C(20,10) fits).
double exact_p_value(const std::vector<double>& ranks, std::size_t na, double w) {
  std::vector<long> doubled(ranks.size());
  long max_sum = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    doubled[i] = std::lround(2.0 * ranks[i]);
    max_sum += doubled[i];
  }
  std::vector<std::vector<double>> dp(na + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
  dp[0][0] = 1.0;
  for (long r : doubled) {
    for (std::size_t k = na; k >= 1; --k) {
      for (long s = max_sum; s >= r; --s) dp[k][s] += dp[k - 1][s - r];
    }
  }
  const std::vector<double>& dist = dp[na];
  double total = 0.0;
  double mean2 = 0.0;
  for (long s = 0; s <= max_sum; ++s) {
    total += dist[s];
    mean2 += dist[s] * static_cast<double>(s);
  }
  mean2 /= total;
  const double observed = std::abs(2.0 * w - mean2);
  double extreme = 0.0;
  for (long s = 0; s <= max_sum; ++s) {
    if (dist[s] > 0.0 && std::abs(static_cast<double>(s) - mean2) >= observed - 1e-9) extreme += dist[s];
  }
  return std::min(1.0, extreme / total);
}

}  // namespace

RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b, double level,
                            bool higher_is_better) {
  if (a.size() < 3 || b.size() < 3) throw std::invalid_argument("rank_sum_test needs at least 3 values per sample");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("rank_sum_test: level must lie in (0, 1)");
  for (double v : a)
    if (std::isnan(v)) throw std::invalid_argument("rank_sum_test: NaN in sample");
  for (double v : b)
    if (std::isnan(v)) throw std::invalid_argument("rank_sum_test: NaN in sample");

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;
  const Ranked ranked = midranks(a, b);

  RankSumResult result;
  for (std::size_t i = 0; i < a.size(); ++i) result.rank_sum += ranked.ranks[i];
  const double mean_w = na * (n + 1.0) / 2.0;

  if (a.size() + b.size() <= kExactRankSumLimit) {
    result.exact = true;
    result.p_value = exact_p_value(ranked.ranks, a.size(), result.rank_sum);
  } else {
    const double var = na * nb / 12.0 * ((n + 1.0) - ranked.tie_term / (n * (n - 1.0)));
    if (var <= 0.0) {
      result.p_value = 1.0;
    } else {
      const double diff = std::max(0.0, std::abs(result.rank_sum - mean_w) - 0.5);
      const double z = diff / std::sqrt(var);
      result.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    }
  }

  if (result.p_value < level) {
    const double ma = median(a);
    const double mb = median(b);
    bool a_larger;
    if (ma != mb)
      a_larger = ma > mb;
    else
      a_larger = result.rank_sum > mean_w;
    result.outcome = (a_larger == higher_is_better) ? Comparison::Better : Comparison::Worse;
  }
  return result;
}

}  // namespace maoeda
