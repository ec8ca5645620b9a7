#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "qshift/linalg4.hpp"

namespace qshift {

// Fixed margins of the pooled-quartile 4x2 table.
struct QuartileDesign {
  int N = 0;  // total
  int n = 0;  // treated
  int m = 0;  // control
  std::array<int, 3> q{};  // quartile order-statistic indices ceil(iN/4)
  std::array<int, 4> k{};  // cell totals

  friend bool operator==(const QuartileDesign&, const QuartileDesign&) = default;
};

// Treated counts per quartile cell.
struct CellCounts {
  std::array<int, 4> a{};

  int operator[](std::size_t j) const { return a[j]; }
  int& operator[](std::size_t j) { return a[j]; }
  Vec4 as_vec() const { return {double(a[0]), double(a[1]), double(a[2]), double(a[3])}; }

  friend bool operator==(const CellCounts&, const CellCounts&) = default;
};

// Null moments of the table: expectation, covariance and the generalized
// inverse with zero first row/column.
struct HypergeomModel {
  QuartileDesign design;
  Vec4 E{};
  Mat4 V{};
  Mat4 Vginv{};
};

// Exact enumeration is refused when (k1+1)(k2+1)(k3+1) exceeds this.
inline constexpr std::int64_t kDefaultExactBudget = 1'000'000;

QuartileDesign make_design(int N, int n);

HypergeomModel moments(const QuartileDesign& design);

// Throws InputError unless 0 <= a_j <= k_j and sum a_j = n.
void check_counts(const QuartileDesign& design, const CellCounts& a);

double log_pmf(const QuartileDesign& design, const CellCounts& a);
double pmf(const QuartileDesign& design, const CellCounts& a);

// Size of the box the enumeration walks, (k1+1)(k2+1)(k3+1).
std::int64_t support_box_size(const QuartileDesign& design);
bool enumerable(const QuartileDesign& design, std::int64_t budget = kDefaultExactBudget);

struct SupportPoint {
  CellCounts counts;
  double probability = 0.0;
};

// Calls visit once per admissible table. Throws BudgetError if the design is
// too large for exact enumeration.
void for_each_support_point(const QuartileDesign& design,
                            const std::function<void(const SupportPoint&)>& visit,
                            std::int64_t budget = kDefaultExactBudget);

std::vector<SupportPoint> enumerate_support(const QuartileDesign& design,
                                            std::int64_t budget = kDefaultExactBudget);

// (a - E)ᵀ V⁻ (a - E); accepts fractional tables.
double g2_statistic(const HypergeomModel& model, const Vec4& a);

}  // namespace qshift
