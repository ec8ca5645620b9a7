#include "qshift/hypergeom.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qshift/errors.hpp"

namespace qshift {

namespace {

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

Mat4 zero_first_ginv(const Mat4& m) {
  // b is the lower-right 3x3 block of m.
  auto b = [&](int i, int j) { return m[i + 1][j + 1]; };
  const double c00 = b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1);
  const double c01 = b(1, 2) * b(2, 0) - b(1, 0) * b(2, 2);
  const double c02 = b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0);
  const double det = b(0, 0) * c00 + b(0, 1) * c01 + b(0, 2) * c02;

  double scale = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(b(i, j)));
  if (!(std::abs(det) >= 1e-14 * scale * scale * scale) || scale == 0.0) {
    throw InputError("covariance block is singular; every quartile cell needs k_j >= 1");
  }

  // Inverse = adjugate / det; the adjugate is the transposed cofactor matrix.
  std::array<std::array<double, 3>, 3> cof{};
  cof[0] = {c00, c01, c02};
  cof[1] = {b(0, 2) * b(2, 1) - b(0, 1) * b(2, 2), b(0, 0) * b(2, 2) - b(0, 2) * b(2, 0),
            b(0, 1) * b(2, 0) - b(0, 0) * b(2, 1)};
  cof[2] = {b(0, 1) * b(1, 2) - b(0, 2) * b(1, 1), b(0, 2) * b(1, 0) - b(0, 0) * b(1, 2),
            b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0)};

  Mat4 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i + 1][j + 1] = cof[j][i] / det;
  return out;
}

QuartileDesign make_design(int N, int n) {
  if (N < 4) {
    throw InputError("design needs N >= 4 so that every quartile cell is nonempty (got N=" +
                     std::to_string(N) + ")");
  }
  if (n < 1 || n > N - 1) {
    throw InputError("treated count n must lie in [1, N-1] (got n=" + std::to_string(n) +
                     ", N=" + std::to_string(N) + ")");
  }
  QuartileDesign d;
  d.N = N;
  d.n = n;
  d.m = N - n;
  for (int i = 1; i <= 3; ++i) d.q[i - 1] = (i * N + 3) / 4;  // ceil(iN/4)
  d.k = {d.q[0], d.q[1] - d.q[0], d.q[2] - d.q[1], N - d.q[2]};
  return d;
}

HypergeomModel moments(const QuartileDesign& design) {
  HypergeomModel model;
  model.design = design;
  const double N = design.N;
  const double n = design.n;
  const double m = design.m;
  const double denom = N * N * (N - 1.0);
  for (int i = 0; i < 4; ++i) {
    const double ki = design.k[i];
    model.E[i] = n * ki / N;
    for (int j = 0; j < 4; ++j) {
      const double kj = design.k[j];
      model.V[i][j] = (i == j) ? n * m * ki * (N - ki) / denom : -n * m * ki * kj / denom;
    }
  }
  model.Vginv = zero_first_ginv(model.V);
  return model;
}

void check_counts(const QuartileDesign& design, const CellCounts& a) {
  int total = 0;
  for (int j = 0; j < 4; ++j) {
    if (a[j] < 0 || a[j] > design.k[j]) {
      throw InputError("cell count a" + std::to_string(j + 1) + "=" + std::to_string(a[j]) +
                       " outside [0, " + std::to_string(design.k[j]) + "]");
    }
    total += a[j];
  }
  if (total != design.n) {
    throw InputError("cell counts sum to " + std::to_string(total) + ", expected n=" +
                     std::to_string(design.n));
  }
}

double log_pmf(const QuartileDesign& design, const CellCounts& a) {
  check_counts(design, a);
  double lp = -log_choose(design.N, design.n);
  for (int j = 0; j < 4; ++j) lp += log_choose(design.k[j], a[j]);
  return lp;
}

double pmf(const QuartileDesign& design, const CellCounts& a) {
  return std::exp(log_pmf(design, a));
}

std::int64_t support_box_size(const QuartileDesign& design) {
  return std::int64_t(design.k[0] + 1) * (design.k[1] + 1) * (design.k[2] + 1);
}

bool enumerable(const QuartileDesign& design, std::int64_t budget) {
  return support_box_size(design) <= budget;
}

void for_each_support_point(const QuartileDesign& design,
                            const std::function<void(const SupportPoint&)>& visit,
                            std::int64_t budget) {
  if (!enumerable(design, budget)) {
    throw BudgetError("exact enumeration of the 4x2 table needs " +
                      std::to_string(support_box_size(design)) + " steps (budget " +
                      std::to_string(budget) + "); use the asymptotic mode");
  }
  const auto& k = design.k;
  const int n = design.n;
  // log C(k_j, a) tables, one per cell.
  std::array<std::vector<double>, 4> lc;
  for (int j = 0; j < 4; ++j) {
    lc[j].resize(k[j] + 1);
    for (int a = 0; a <= k[j]; ++a) lc[j][a] = log_choose(k[j], a);
  }
  const double lnorm = log_choose(design.N, design.n);

  SupportPoint pt;
  for (int a1 = 0; a1 <= k[0] && a1 <= n; ++a1) {
    for (int a2 = 0; a2 <= k[1] && a1 + a2 <= n; ++a2) {
      // a4 = n - a1 - a2 - a3 must lie in [0, k4].
      const int rest = n - a1 - a2;
      const int lo = std::max(0, rest - k[3]);
      const int hi = std::min(k[2], rest);
      for (int a3 = lo; a3 <= hi; ++a3) {
        const int a4 = rest - a3;
        pt.counts.a = {a1, a2, a3, a4};
        pt.probability = std::exp(lc[0][a1] + lc[1][a2] + lc[2][a3] + lc[3][a4] - lnorm);
        visit(pt);
      }
    }
  }
}

std::vector<SupportPoint> enumerate_support(const QuartileDesign& design, std::int64_t budget) {
  std::vector<SupportPoint> out;
  for_each_support_point(design, [&](const SupportPoint& p) { out.push_back(p); }, budget);
  return out;
}

double g2_statistic(const HypergeomModel& model, const Vec4& a) {
  Vec4 d{};
  for (int j = 0; j < 4; ++j) d[j] = a[j] - model.E[j];
  return quad_form(model.Vginv, d);
}

}  // namespace qshift
