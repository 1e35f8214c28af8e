#ifndef LCY_LINALG_HPP
#define LCY_LINALG_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "lcy/poly.hpp"

namespace lcy {

template <class K>
using MatT = std::vector<std::vector<K>>;

using MatQ = MatT<Rat>;
using MatZ = std::vector<std::vector<long>>;

// Row-reduce in place to reduced row echelon form; returns pivot columns.
// Pivot choice is the first nonzero column left-to-right, so bases derived
// from this are deterministic.
template <class K>
std::vector<size_t> rref(MatT<K>& m) {
  std::vector<size_t> pivots;
  if (m.empty()) return pivots;
  size_t rows = m.size(), cols = m[0].size(), r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t sel = r;
    while (sel < rows && lcy::is_zero(m[sel][c])) ++sel;
    if (sel == rows) continue;
    std::swap(m[r], m[sel]);
    K inv = K(1) / m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || lcy::is_zero(m[i][c])) continue;
      K f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Basis of the right nullspace of m (columns = unknowns).
template <class K>
std::vector<std::vector<K>> nullspace(MatT<K> m) {
  if (m.empty()) return {};
  size_t cols = m[0].size();
  auto pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<K>> basis;
  for (size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<K> v(cols, K(0));
    v[fc] = K(1);
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][fc];
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class K>
size_t rank(MatT<K> m) {
  return rref(m).size();
}

template <class K>
K det(MatT<K> m) {
  size_t n = m.size();
  K d(1);
  for (size_t c = 0; c < n; ++c) {
    size_t sel = c;
    while (sel < n && lcy::is_zero(m[sel][c])) ++sel;
    if (sel == n) return K(0);
    if (sel != c) {
      std::swap(m[c], m[sel]);
      d = -d;
    }
    d *= m[c][c];
    K inv = K(1) / m[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (lcy::is_zero(m[i][c])) continue;
      K f = m[i][c] * inv;
      for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return d;
}

// Solve m x = b; nullopt when inconsistent. Free variables are set to zero.
template <class K>
std::optional<std::vector<K>> solve(MatT<K> m, std::vector<K> b) {
  size_t rows = m.size();
  if (rows == 0) return std::vector<K>{};
  size_t cols = m[0].size();
  for (size_t i = 0; i < rows; ++i) m[i].push_back(b[i]);
  auto pivots = rref(m);
  std::vector<K> x(cols, K(0));
  for (size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == cols) return std::nullopt;  // pivot in the constant column
    x[pivots[r]] = m[r][cols];
  }
  return x;
}

inline MatZ mat_mul(const MatZ& a, const MatZ& b) {
  size_t n = a.size(), m = b[0].size(), k = b.size();
  MatZ c(n, std::vector<long>(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j)
      for (size_t l = 0; l < k; ++l) c[i][j] += a[i][l] * b[l][j];
  return c;
}

inline bool is_identity(const MatZ& m) {
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[i].size(); ++j)
      if (m[i][j] != (i == j ? 1 : 0)) return false;
  return true;
}

inline std::vector<long> mat_vec(const MatZ& m, const std::vector<long>& v) {
  std::vector<long> out(m.size(), 0);
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

inline MatZ transpose(const MatZ& m) {
  MatZ t(m[0].size(), std::vector<long>(m.size()));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

}  // namespace lcy

#endif
