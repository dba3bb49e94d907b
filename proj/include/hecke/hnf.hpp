#ifndef HECKE_HNF_HPP
#define HECKE_HNF_HPP

#include <tuple>
#include <vector>

#include "hecke/group.hpp"
#include "hecke/rational.hpp"

namespace hecke {

/// Returns (g, u, v) with u a + v b = g = gcd(a, b) >= 0.
inline std::tuple<BigInt, BigInt, BigInt> extended_gcd(const BigInt& a, const BigInt& b) {
  BigInt old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

struct IntMatrix {
  std::size_t dim = 0;
  std::vector<BigInt> entries;  // row-major
  BigInt& at(std::size_t r, std::size_t c) { return entries[r * dim + c]; }
  const BigInt& at(std::size_t r, std::size_t c) const { return entries[r * dim + c]; }
};

struct HermiteResult {
  IntMatrix form;   // lower triangular, positive diagonal, row i reduced left of the pivot
  int det_sign = 1; // det of the unimodular U with form = M U
};

/// Column Hermite normal form of a nonsingular integer matrix under right
/// multiplication by GL_n(Z).
inline HermiteResult column_hermite(IntMatrix m) {
  const std::size_t n = m.dim;
  int sign = 1;
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    for (std::size_t r = 0; r < n; ++r) std::swap(m.at(r, a), m.at(r, b));
    sign = -sign;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m.at(i, j) == 0) continue;
      if (m.at(i, i) == 0) {
        swap_cols(i, j);
        continue;
      }
      BigInt p = m.at(i, i), q = m.at(i, j);
      auto [g, u, v] = extended_gcd(p, q);
      BigInt pg = p / g, qg = q / g;
      for (std::size_t r = i; r < n; ++r) {
        BigInt ci = m.at(r, i), cj = m.at(r, j);
        m.at(r, i) = u * ci + v * cj;
        m.at(r, j) = -qg * ci + pg * cj;
      }
    }
    if (m.at(i, i) == 0) throw Error(ErrorCode::SingularMatrix, "singular matrix in Hermite reduction");
    if (m.at(i, i) < 0) {
      for (std::size_t r = i; r < n; ++r) m.at(r, i) = -m.at(r, i);
      sign = -sign;
    }
    for (std::size_t j = 0; j < i; ++j) {
      BigInt k = floor_div(m.at(i, j), m.at(i, i));
      if (k == 0) continue;
      for (std::size_t r = i; r < n; ++r) m.at(r, j) -= k * m.at(r, i);
    }
  }
  return {std::move(m), sign};
}

/// Canonical representative of the left coset g SL_n(Z): Hermite form of the
/// scaled matrix, with the last column negated when the transforming matrix has
/// determinant -1.
inline RatMatrix sl_integer_coset_rep(const RatMatrix& g) {
  const std::size_t n = g.dim;
  BigInt scale = 1;
  for (const auto& q : g.entries) scale = boost::multiprecision::lcm(scale, denominator_of(q));
  IntMatrix m{n, std::vector<BigInt>(n * n)};
  for (std::size_t i = 0; i < n * n; ++i) m.entries[i] = numerator_of(g.entries[i] * scale);
  auto [form, sign] = column_hermite(std::move(m));
  if (sign < 0)
    for (std::size_t r = 0; r < n; ++r) form.at(r, n - 1) = -form.at(r, n - 1);
  RatMatrix out{n, std::vector<Rat>(n * n)};
  for (std::size_t i = 0; i < n * n; ++i) out.entries[i] = Rat(form.entries[i], scale);
  return out;
}

}  // namespace hecke

#endif  // HECKE_HNF_HPP
