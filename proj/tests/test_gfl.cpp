#include <cstdlib>

#include "doctest.h"
#include "towerforge/gfl.hpp"

using namespace towerforge;

namespace {

// deterministic fill for property loops
GFMat random_mat(unsigned ell, size_t r, size_t c, uint64_t seed) {
  GFMat m = GFMat::zero(ell, r, c);
  uint64_t s = seed * 0x9e3779b97f4a7c15ull + 1;
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) {
      s ^= s << 13;
      s ^= s >> 7;
      s ^= s << 17;
      m.set(i, j, unsigned(s % ell));
    }
  return m;
}

}  // namespace

TEST_CASE("construction and element access") {
  for (unsigned ell : {2u, 3u, 5u}) {
    GFMat id = GFMat::identity(ell, 4);
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 4; ++j) CHECK(id.get(i, j) == (i == j ? 1 : 0));
    GFMat z = GFMat::zero(ell, 3, 70);  // cross the word boundary when packed
    z.set(1, 65, ell - 1);
    CHECK(z.get(1, 65) == ell - 1);
    CHECK(z.get(1, 64) == 0);
    CHECK(z.get(2, 65) == 0);
  }
}

TEST_CASE("rref pivots and rank anchors") {
  // rank-2 matrix over F_2 with a dependent third row
  GFMat m = gf_from_rows(2, 4, {{1, 0, 1, 1}, {0, 1, 1, 0}, {1, 1, 0, 1}});
  CHECK(gf_rank(m) == 2);
  GFMat c = m;
  std::vector<size_t> piv = gf_rref(c);
  REQUIRE(piv.size() == 2);
  CHECK(piv[0] == 0);
  CHECK(piv[1] == 1);

  // nonsingular over F_3: determinant 10 = 1
  GFMat t = gf_from_rows(3, 3, {{1, 2, 0}, {0, 1, 2}, {2, 0, 2}});
  CHECK(gf_rank(t) == 3);

  // singular F_5 example: row3 = row1 + 2 row2
  GFMat f = gf_from_rows(5, 3, {{1, 2, 3}, {4, 0, 1}, {4, 2, 0}});
  CHECK(gf_rank(f) == 2);
}

TEST_CASE("kernel rows annihilate and have complementary dimension") {
  for (unsigned ell : {2u, 3u, 5u}) {
    for (uint64_t seed = 0; seed < 6; ++seed) {
      GFMat m = random_mat(ell, 5, 8, seed * 3 + ell);
      GFMat k = gf_kernel(m);
      CHECK(k.cols == m.cols);
      CHECK(gf_rank(m) + k.rows == m.cols);
      if (k.rows > 0) {
        GFMat prod = gf_mul(m, gf_transpose(k));
        CHECK(gf_is_zero(prod));
      }
      // kernel rows are independent
      CHECK(gf_rank(k) == k.rows);
    }
  }
}

TEST_CASE("stacking and multiplication shapes") {
  GFMat a = gf_from_rows(3, 2, {{1, 2}, {0, 1}});
  GFMat b = gf_from_rows(3, 2, {{2, 2}});
  GFMat v = gf_vstack(a, b);
  CHECK(v.rows == 3);
  CHECK(v.get(2, 0) == 2);

  GFMat h = gf_hstack(a, gf_from_rows(3, 1, {{1}, {2}}));
  CHECK(h.cols == 3);
  CHECK(h.get(1, 2) == 2);

  // [[1,2],[0,1]] * [[2],[1]] = [[4],[1]] = [[1],[1]] mod 3
  GFMat p = gf_mul(a, gf_from_rows(3, 1, {{2}, {1}}));
  CHECK(p.rows == 2);
  CHECK(p.cols == 1);
  CHECK(p.get(0, 0) == 1);
  CHECK(p.get(1, 0) == 1);

  // identity is neutral
  GFMat m = random_mat(5, 4, 4, 11);
  GFMat im = gf_mul(GFMat::identity(5, 4), m);
  CHECK(gf_same_rowspace(im, m));
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) CHECK(im.get(i, j) == m.get(i, j));
}

TEST_CASE("row spaces, containment, intersection") {
  GFMat a = gf_from_rows(2, 4, {{1, 0, 0, 1}, {0, 1, 1, 0}});
  GFMat b = gf_from_rows(2, 4, {{1, 1, 1, 1}, {1, 0, 0, 1}});
  // same span written differently
  CHECK(gf_same_rowspace(a, b));
  CHECK(gf_rowspace_contains(a, gf_from_rows(2, 4, {{1, 1, 1, 1}})));
  CHECK_FALSE(gf_rowspace_contains(a, gf_from_rows(2, 4, {{1, 1, 0, 0}})));

  GFMat c = gf_from_rows(2, 4, {{1, 0, 0, 1}, {0, 0, 1, 1}});
  CHECK_FALSE(gf_same_rowspace(a, c));
  CHECK(gf_intersection_dim(a, c) == 1);
  CHECK(gf_intersection_dim(a, a) == 2);
  CHECK(gf_intersection_dim(a, gf_from_rows(2, 4, {{0, 0, 0, 0}})) == 0);

  // dim(U) + dim(W) = dim(U + W) + dim(U cap W) across random samples
  for (uint64_t seed = 0; seed < 8; ++seed) {
    for (unsigned ell : {2u, 3u, 5u}) {
      GFMat u = random_mat(ell, 3, 6, seed + 17 * ell);
      GFMat w = random_mat(ell, 3, 6, seed + 31 * ell + 1);
      size_t du = gf_rank(u), dw = gf_rank(w);
      size_t dsum = gf_rank(gf_vstack(u, w));
      CHECK(du + dw == dsum + gf_intersection_dim(u, w));
    }
  }
}

TEST_CASE("row basis is canonical") {
  GFMat a = gf_from_rows(3, 3, {{2, 1, 0}, {1, 2, 0}, {0, 0, 0}});
  GFMat ba = gf_row_basis(a);
  CHECK(ba.rows == gf_rank(a));
  // scaling rows leaves the canonical basis unchanged
  GFMat b = gf_from_rows(3, 3, {{1, 2, 0}, {2, 4 % 3, 0}});
  GFMat bb = gf_row_basis(b);
  CHECK(gf_same_rowspace(ba, bb));
  CHECK(bb.rows == 1);
}
