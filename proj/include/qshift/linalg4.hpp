#pragma once

#include <array>
#include <cstddef>

namespace qshift {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<Vec4, 4>;

inline double dot(const Vec4& a, const Vec4& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += a[i] * b[i];
  return s;
}

inline Vec4 mul(const Mat4& m, const Vec4& v) {
  Vec4 out{};
  for (std::size_t i = 0; i < 4; ++i) out[i] = dot(m[i], v);
  return out;
}

inline Mat4 mul(const Mat4& a, const Mat4& b) {
  Mat4 out{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

// vᵀ M v
inline double quad_form(const Mat4& m, const Vec4& v) { return dot(v, mul(m, v)); }

// Generalized inverse with zero first row and column whose lower-right 3x3
// block is the inverse of m's lower-right 3x3 block. The block is inverted by
// cofactor expansion; throws InputError when |det| < 1e-14 * scale³.
Mat4 zero_first_ginv(const Mat4& m);

}  // namespace qshift
