#include "towerforge/gfl.hpp"

#include <algorithm>
#include <utility>

namespace towerforge {

namespace {

void check_field(unsigned ell) {
  if (ell != 2 && ell != 3 && ell != 5)
    throw Error("gfl: field must be one of F_2, F_3, F_5");
}

unsigned inv_mod_ell(unsigned x, unsigned ell) {
  for (unsigned y = 1; y < ell; ++y)
    if (x * y % ell == 1) return y;
  throw Error("gfl: inverse of zero");
}

}  // namespace

GFMat GFMat::zero(unsigned ell, size_t rows, size_t cols) {
  check_field(ell);
  GFMat m;
  m.ell = ell;
  m.rows = rows;
  m.cols = cols;
  if (m.packed()) {
    m.words = (cols + 63) / 64;
    if (m.words == 0) m.words = 1;
    m.bits.assign(rows * m.words, 0);
  } else {
    m.a.assign(rows * cols, 0);
  }
  return m;
}

GFMat GFMat::identity(unsigned ell, size_t n) {
  GFMat m = zero(ell, n, n);
  for (size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

unsigned GFMat::get(size_t i, size_t j) const {
  if (i >= rows || j >= cols) throw Error("gfl: index out of range");
  if (packed()) return (bits[i * words + j / 64] >> (j % 64)) & 1;
  return a[i * cols + j];
}

void GFMat::set(size_t i, size_t j, unsigned v) {
  if (i >= rows || j >= cols) throw Error("gfl: index out of range");
  v %= ell;
  if (packed()) {
    uint64_t mask = uint64_t(1) << (j % 64);
    if (v)
      bits[i * words + j / 64] |= mask;
    else
      bits[i * words + j / 64] &= ~mask;
  } else {
    a[i * cols + j] = uint8_t(v);
  }
}

GFMat gf_from_rows(unsigned ell, size_t cols,
                   const std::vector<std::vector<unsigned>>& rows) {
  GFMat m = GFMat::zero(ell, rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error("gfl: ragged rows");
    for (size_t j = 0; j < cols; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

GFMat gf_vstack(const GFMat& a, const GFMat& b) {
  if (a.ell != b.ell || a.cols != b.cols) throw Error("gfl: vstack mismatch");
  GFMat m = GFMat::zero(a.ell, a.rows + b.rows, a.cols);
  if (m.packed()) {
    std::copy(a.bits.begin(), a.bits.end(), m.bits.begin());
    std::copy(b.bits.begin(), b.bits.end(),
              m.bits.begin() + a.rows * m.words);
  } else {
    std::copy(a.a.begin(), a.a.end(), m.a.begin());
    std::copy(b.a.begin(), b.a.end(), m.a.begin() + a.rows * a.cols);
  }
  return m;
}

GFMat gf_hstack(const GFMat& a, const GFMat& b) {
  if (a.ell != b.ell || a.rows != b.rows) throw Error("gfl: hstack mismatch");
  GFMat m = GFMat::zero(a.ell, a.rows, a.cols + b.cols);
  for (size_t i = 0; i < a.rows; ++i) {
    for (size_t j = 0; j < a.cols; ++j) m.set(i, j, a.get(i, j));
    for (size_t j = 0; j < b.cols; ++j) m.set(i, a.cols + j, b.get(i, j));
  }
  return m;
}

GFMat gf_mul(const GFMat& x, const GFMat& y) {
  if (x.ell != y.ell || x.cols != y.rows) throw Error("gfl: mul mismatch");
  GFMat m = GFMat::zero(x.ell, x.rows, y.cols);
  if (m.packed()) {
    // row_i(XY) = xor of rows of Y selected by bits of row_i(X).
    for (size_t i = 0; i < x.rows; ++i)
      for (size_t k = 0; k < x.cols; ++k)
        if (x.get(i, k))
          for (size_t w = 0; w < m.words; ++w)
            m.bits[i * m.words + w] ^= y.bits[k * y.words + w];
  } else {
    for (size_t i = 0; i < x.rows; ++i)
      for (size_t k = 0; k < x.cols; ++k) {
        unsigned xv = x.get(i, k);
        if (!xv) continue;
        for (size_t j = 0; j < y.cols; ++j) {
          unsigned cur = m.get(i, j);
          m.set(i, j, (cur + xv * y.get(k, j)) % m.ell);
        }
      }
  }
  return m;
}

GFMat gf_transpose(const GFMat& m) {
  GFMat t = GFMat::zero(m.ell, m.cols, m.rows);
  for (size_t i = 0; i < m.rows; ++i)
    for (size_t j = 0; j < m.cols; ++j) t.set(j, i, m.get(i, j));
  return t;
}

std::vector<size_t> gf_rref(GFMat& m) {
  std::vector<size_t> pivots;
  size_t row = 0;
  for (size_t col = 0; col < m.cols && row < m.rows; ++col) {
    // Lowest-index pivot row for determinism.
    size_t sel = m.rows;
    for (size_t i = row; i < m.rows; ++i)
      if (m.get(i, col) != 0) {
        sel = i;
        break;
      }
    if (sel == m.rows) continue;
    // Swap rows sel and row.
    if (sel != row) {
      if (m.packed()) {
        for (size_t w = 0; w < m.words; ++w)
          std::swap(m.bits[sel * m.words + w], m.bits[row * m.words + w]);
      } else {
        for (size_t j = 0; j < m.cols; ++j) {
          unsigned t = m.get(sel, j);
          m.set(sel, j, m.get(row, j));
          m.set(row, j, t);
        }
      }
    }
    // Normalize pivot to 1.
    unsigned pv = m.get(row, col);
    if (pv != 1) {
      unsigned inv = inv_mod_ell(pv, m.ell);
      for (size_t j = 0; j < m.cols; ++j)
        m.set(row, j, m.get(row, j) * inv % m.ell);
    }
    // Clear the column everywhere else.
    for (size_t i = 0; i < m.rows; ++i) {
      if (i == row) continue;
      unsigned f = m.get(i, col);
      if (f == 0) continue;
      if (m.packed()) {
        for (size_t w = 0; w < m.words; ++w)
          m.bits[i * m.words + w] ^= m.bits[row * m.words + w];
      } else {
        for (size_t j = 0; j < m.cols; ++j) {
          unsigned v =
              (m.get(i, j) + (m.ell - f) * m.get(row, j)) % m.ell;
          m.set(i, j, v);
        }
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

size_t gf_rank(GFMat m) { return gf_rref(m).size(); }

GFMat gf_kernel(const GFMat& m0) {
  GFMat m = m0;
  std::vector<size_t> pivots = gf_rref(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (size_t c : pivots) is_pivot[c] = true;
  size_t nfree = m.cols - pivots.size();
  GFMat ker = GFMat::zero(m.ell, nfree, m.cols);
  size_t r = 0;
  for (size_t f = 0; f < m.cols; ++f) {
    if (is_pivot[f]) continue;
    ker.set(r, f, 1);
    for (size_t i = 0; i < pivots.size(); ++i) {
      unsigned coef = m.get(i, f);
      if (coef) ker.set(r, pivots[i], (m.ell - coef) % m.ell);
    }
    ++r;
  }
  return ker;
}

GFMat gf_row_basis(const GFMat& m0) {
  GFMat m = m0;
  size_t rk = gf_rref(m).size();
  GFMat b = GFMat::zero(m.ell, rk, m.cols);
  for (size_t i = 0; i < rk; ++i)
    for (size_t j = 0; j < m.cols; ++j) b.set(i, j, m.get(i, j));
  return b;
}

bool gf_rowspace_contains(const GFMat& m, const GFMat& row_vectors) {
  if (m.cols != row_vectors.cols) throw Error("gfl: containment mismatch");
  return gf_rank(m) == gf_rank(gf_vstack(m, row_vectors));
}

bool gf_same_rowspace(const GFMat& a, const GFMat& b) {
  size_t ra = gf_rank(a), rb = gf_rank(b);
  return ra == rb && gf_rank(gf_vstack(a, b)) == ra;
}

size_t gf_intersection_dim(const GFMat& a, const GFMat& b) {
  return gf_rank(a) + gf_rank(b) - gf_rank(gf_vstack(a, b));
}

bool gf_is_zero(const GFMat& m) {
  for (size_t i = 0; i < m.rows; ++i)
    for (size_t j = 0; j < m.cols; ++j)
      if (m.get(i, j)) return false;
  return true;
}

}  // namespace towerforge
