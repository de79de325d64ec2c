#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "towerforge/bigint.hpp"

namespace towerforge {

// Dense matrix over F_ell, ell in {2, 3, 5}; rows are bit-packed words for
// ell = 2 and byte entries otherwise.  Row/column indices are 0-based.
struct GFMat {
  unsigned ell = 2;
  size_t rows = 0, cols = 0;
  size_t words = 0;            // 64-bit words per row when packed
  std::vector<uint64_t> bits;  // ell == 2
  std::vector<uint8_t> a;      // ell > 2

  static GFMat zero(unsigned ell, size_t rows, size_t cols);
  static GFMat identity(unsigned ell, size_t n);
  bool packed() const { return ell == 2; }
  unsigned get(size_t i, size_t j) const;
  void set(size_t i, size_t j, unsigned v);
};

GFMat gf_from_rows(unsigned ell, size_t cols,
                   const std::vector<std::vector<unsigned>>& rows);
GFMat gf_vstack(const GFMat& a, const GFMat& b);
GFMat gf_hstack(const GFMat& a, const GFMat& b);
GFMat gf_mul(const GFMat& a, const GFMat& b);
GFMat gf_transpose(const GFMat& m);

// In-place reduced row echelon form with lowest-index pivoting; returns the
// pivot columns in order.
std::vector<size_t> gf_rref(GFMat& m);
size_t gf_rank(GFMat m);

// Rows span the right kernel {x : m x = 0}.
GFMat gf_kernel(const GFMat& m);

// Nonzero rref rows: a canonical basis of the row space.
GFMat gf_row_basis(const GFMat& m);

bool gf_rowspace_contains(const GFMat& m, const GFMat& row_vectors);
bool gf_same_rowspace(const GFMat& a, const GFMat& b);
size_t gf_intersection_dim(const GFMat& a, const GFMat& b);
bool gf_is_zero(const GFMat& m);

}  // namespace towerforge
