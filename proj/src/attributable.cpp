#include "qshift/attributable.hpp"

#include <algorithm>
#include <string>

#include "qshift/errors.hpp"

namespace qshift {

double MannWhitneyDist::upper_tail(std::int64_t v) const {
  if (v <= 0) return 1.0;
  const auto total = static_cast<std::int64_t>(pmf.size());
  double tail = 0.0;
  for (std::int64_t u = total - 1; u >= v; --u) tail += pmf[static_cast<std::size_t>(u)];
  return std::min(1.0, tail);
}

MannWhitneyDist mw_null_distribution(int n, int m, std::int64_t budget) {
  if (n < 1 || m < 1) throw InputError("Mann-Whitney distribution needs n, m >= 1");
  // The law is symmetric in (n, m); recurse over the larger, store the smaller.
  const int outer = std::max(n, m);
  const int inner = std::min(n, m);
  const std::int64_t work = std::int64_t(outer) * inner * inner / 2;
  if (work > budget) {
    throw BudgetError("exact Mann-Whitney recursion needs ~" + std::to_string(work) +
                      " stored entries (budget " + std::to_string(budget) + ")");
  }

  // row[j] = law of V for (i, j), i the current outer count.
  // Largest of the i + j values is outer-group with prob i/(i+j), adding j.
  std::vector<std::vector<double>> prev(inner + 1, std::vector<double>{1.0});
  for (int i = 1; i <= outer; ++i) {
    std::vector<std::vector<double>> cur(inner + 1);
    cur[0] = {1.0};
    for (int j = 1; j <= inner; ++j) {
      std::vector<double>& out = cur[j];
      out.assign(static_cast<std::size_t>(i) * j + 1, 0.0);
      const double p_outer = double(i) / (i + j);
      const double p_inner = double(j) / (i + j);
      const auto& from_outer = prev[j];   // (i-1, j), shifted by j
      const auto& from_inner = cur[j - 1];  // (i, j-1)
      for (std::size_t v = 0; v < from_outer.size(); ++v) out[v + j] += p_outer * from_outer[v];
      for (std::size_t v = 0; v < from_inner.size(); ++v) out[v] += p_inner * from_inner[v];
    }
    prev = std::move(cur);
  }
  MannWhitneyDist dist;
  dist.n = n;
  dist.m = m;
  dist.pmf = std::move(prev[inner]);
  return dist;
}

AttributableResult attributable_bound(std::int64_t v_observed, const MannWhitneyDist& dist,
                                      double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  AttributableResult r;
  r.v_observed = v_observed;
  r.total_pairs = std::int64_t(dist.n) * dist.m;

  // Smallest v with Pr(V >= v) <= alpha, scanning tails from the top.
  double tail = 0.0;
  std::int64_t critical = -1;
  for (std::int64_t v = r.total_pairs; v >= 0; --v) {
    tail += dist.pmf[static_cast<std::size_t>(v)];
    if (tail > alpha * (1.0 + 1e-12)) break;
    critical = v;
  }
  if (critical < 0) {
    r.unattainable = true;
    r.critical_value = r.total_pairs + 1;
    r.attained_confidence = 0.0;
    r.lower_bound = 0;
    return r;
  }
  r.critical_value = critical;
  r.attained_confidence = 1.0 - dist.upper_tail(critical);
  r.lower_bound = std::max<std::int64_t>(0, v_observed - critical + 1);
  return r;
}

AttributableResult attributable_bound(const TwoSample& data, double alpha) {
  return attributable_bound(mann_whitney_count(data), mw_null_distribution(data.n(), data.m()),
                            alpha);
}

}  // namespace qshift
