#pragma once

// Slow, independent reference implementations used only by tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "qshift/hypergeom.hpp"
#include "qshift/linalg4.hpp"
#include "qshift/shift_table.hpp"

namespace oracle {

using qshift::CellCounts;
using qshift::Interval;
using qshift::TwoSample;
using qshift::Vec4;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Pools x and y - delta, sorts with treated before control on exact ties,
// and counts treated among pooled ranks 1..q1, q1+1..q2, q2+1..q3, rest.
inline CellCounts pooled_sort_table(const std::vector<double>& x, const std::vector<double>& y,
                                    double delta) {
  struct Obs {
    double v;
    int treated;
  };
  std::vector<Obs> pool;
  for (double v : x) pool.push_back({v, 0});
  for (double v : y) pool.push_back({v - delta, 1});
  std::sort(pool.begin(), pool.end(), [](const Obs& a, const Obs& b) {
    if (a.v != b.v) return a.v < b.v;
    return a.treated > b.treated;
  });
  const int N = static_cast<int>(pool.size());
  int q[3];
  for (int i = 1; i <= 3; ++i) q[i - 1] = (i * N + 3) / 4;
  CellCounts a;
  for (int r = 1; r <= N; ++r) {
    if (!pool[r - 1].treated) continue;
    const int cell = r <= q[0] ? 0 : r <= q[1] ? 1 : r <= q[2] ? 2 : 3;
    ++a[cell];
  }
  return a;
}

// Sorted distinct differences y_j - x_i (exact comparison).
inline std::vector<double> raw_breakpoints(const std::vector<double>& x,
                                           const std::vector<double>& y) {
  std::vector<double> d;
  for (double yj : y)
    for (double xi : x) d.push_back(yj - xi);
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

// One probe inside each open segment: left of the first breakpoint, the
// midpoints between neighbours, right of the last.
struct Probe {
  double at;
  Interval segment;
};

inline std::vector<Probe> probes(const std::vector<double>& b) {
  std::vector<Probe> out;
  const double span = 1.0 + std::abs(b.front()) + std::abs(b.back());
  out.push_back({b.front() - span, {-kInf, b.front()}});
  for (std::size_t i = 0; i + 1 < b.size(); ++i) out.push_back({0.5 * (b[i] + b[i + 1]), {b[i], b[i + 1]}});
  out.push_back({b.back() + span, {b.back(), kInf}});
  return out;
}

// Hodges-Lehmann rules applied on a dense probe grid. Empty when equality
// holds on an unbounded range.
inline std::optional<double> hl_estimate(const std::vector<double>& x, const std::vector<double>& y,
                                         const Vec4& w, const Vec4& E) {
  const auto ps = probes(raw_breakpoints(x, y));
  const double target = qshift::dot(w, E);
  const double tol = 1e-9 * (1.0 + std::abs(target));
  std::vector<double> t;
  for (const auto& p : ps) t.push_back(qshift::dot(w, pooled_sort_table(x, y, p.at).as_vec()));
  int first_eq = -1, last_eq = -1;
  for (int i = 0; i < static_cast<int>(t.size()); ++i) {
    if (std::abs(t[i] - target) <= tol) {
      if (first_eq < 0) first_eq = i;
      last_eq = i;
    }
  }
  if (first_eq >= 0) {
    const double lo = ps[first_eq].segment.lo, hi = ps[last_eq].segment.hi;
    if (!std::isfinite(lo) || !std::isfinite(hi)) return std::nullopt;
    return 0.5 * (lo + hi);
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < target) return ps[i].segment.lo;
  }
  return std::nullopt;
}

struct GmmOracle {
  bool feasible = false;
  double estimate = 0.0;
  double min_g2 = 0.0;
  std::vector<Interval> runs;
};

// Minimum of G² over the probe grid, runs of adjacent minimizing segments,
// longest bounded run with ties to the leftmost, midpoint.
inline GmmOracle gmm_estimate(const std::vector<double>& x, const std::vector<double>& y,
                              const qshift::HypergeomModel& model) {
  const auto ps = probes(raw_breakpoints(x, y));
  std::vector<double> g2;
  for (const auto& p : ps) g2.push_back(qshift::g2_statistic(model, pooled_sort_table(x, y, p.at).as_vec()));
  GmmOracle out;
  out.min_g2 = *std::min_element(g2.begin(), g2.end());
  const double tol = 1e-9 * (1.0 + out.min_g2);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (g2[i] > out.min_g2 + tol) continue;
    if (!out.runs.empty() && out.runs.back().hi == ps[i].segment.lo) {
      out.runs.back().hi = ps[i].segment.hi;
    } else {
      out.runs.push_back(ps[i].segment);
    }
  }
  const Interval* best = nullptr;
  for (const auto& r : out.runs) {
    if (!r.bounded()) continue;
    if (!best || r.length() > best->length()) best = &r;
  }
  if (best) {
    out.feasible = true;
    out.estimate = best->midpoint();
  }
  return out;
}

// Pr(V >= v) by enumerating every assignment of n treated among N = n + m
// distinct pooled ranks.
inline std::vector<double> permutation_mw_pmf(int n, int m) {
  const int N = n + m;
  std::vector<double> count(static_cast<std::size_t>(n) * m + 1, 0.0);
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
    if (std::popcount(mask) != n) continue;
    // V = sum over treated of the number of controls ranked below.
    int v = 0, controls = 0;
    for (int r = 0; r < N; ++r) {
      if (mask & (1u << r)) {
        v += controls;
      } else {
        ++controls;
      }
    }
    count[v] += 1.0;
    total += 1.0;
  }
  for (double& c : count) c /= total;
  return count;
}

struct AttributableOracle {
  std::int64_t v = 0;
  std::int64_t critical = -1;
  std::int64_t lower_bound = 0;
};

inline AttributableOracle attributable(const std::vector<double>& x, const std::vector<double>& y,
                                       double alpha) {
  const int n = static_cast<int>(y.size()), m = static_cast<int>(x.size());
  const auto pmf = permutation_mw_pmf(n, m);
  AttributableOracle out;
  for (double yj : y)
    for (double xi : x) out.v += yj > xi;
  for (std::int64_t c = 0; c <= std::int64_t(n) * m; ++c) {
    double tail = 0.0;
    for (std::int64_t v = c; v <= std::int64_t(n) * m; ++v) tail += pmf[v];
    if (tail <= alpha * (1.0 + 1e-12)) {
      out.critical = c;
      break;
    }
  }
  if (out.critical >= 0) out.lower_bound = std::max<std::int64_t>(0, out.v - out.critical + 1);
  return out;
}

// Number of admissible tables by brute force over all four cells.
inline int support_count(const qshift::QuartileDesign& d) {
  int count = 0;
  for (int a1 = 0; a1 <= d.k[0]; ++a1)
    for (int a2 = 0; a2 <= d.k[1]; ++a2)
      for (int a3 = 0; a3 <= d.k[2]; ++a3)
        for (int a4 = 0; a4 <= d.k[3]; ++a4)
          if (a1 + a2 + a3 + a4 == d.n && d.m - (a1 + a2 + a3 + a4 - d.n) >= 0 &&
              d.k[0] - a1 + d.k[1] - a2 + d.k[2] - a3 + d.k[3] - a4 == d.m)
            ++count;
  return count;
}

// Central-difference -f'/f at x.
template <class F>
double numeric_score(F&& f, double x, double h = 1e-5) {
  return -(f(x + h) - f(x - h)) / (2.0 * h) / f(x);
}

// Random two-sample data: integer-valued (ties likely) or continuous.
inline TwoSample random_data(std::mt19937_64& rng, int max_size, bool integer_valued) {
  std::uniform_int_distribution<int> size(1, max_size);
  int n = size(rng), m = size(rng);
  while (n + m < 4) {
    n = size(rng);
    m = size(rng);
  }
  std::vector<double> x(m), y(n);
  if (integer_valued) {
    std::uniform_int_distribution<int> v(0, 20);
    for (double& e : x) e = v(rng);
    for (double& e : y) e = v(rng);
  } else {
    std::normal_distribution<double> v(0.0, 3.0);
    for (double& e : x) e = v(rng);
    for (double& e : y) e = v(rng) + 1.0;
  }
  return TwoSample(std::move(x), std::move(y));
}

}  // namespace oracle
