#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "g1s/linalg.hpp"

using namespace g1s;

namespace {

// Dense Gaussian elimination used as an independent rank oracle.
int dense_rank(std::vector<std::vector<Rational>> a) {
  int rank = 0;
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int i = rank; i < rows; ++i) {
      if (sgn(a[i][c]) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(a[piv], a[rank]);
    for (int i = 0; i < rows; ++i) {
      if (i == rank || sgn(a[i][c]) == 0) continue;
      const Rational f = a[i][c] / a[rank][c];
      for (int j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST_CASE("rank, nullspace and solve agree with a dense oracle") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> c(-2, 2);
  for (int trial = 0; trial < 60; ++trial) {
    const int rows = 1 + rng() % 7, cols = 1 + rng() % 7;
    std::vector<std::vector<Rational>> dense(rows, std::vector<Rational>(cols));
    std::vector<SparseRow> sparse;
    for (auto& row : dense) {
      for (auto& v : row) v = (rng() % 3 == 0) ? 0 : c(rng);
      sparse.push_back(make_sparse(row));
    }
    const int rk = dense_rank(dense);
    CHECK(rank(sparse, cols) == rk);
    const auto ns = nullspace(sparse, cols);
    CHECK(static_cast<int>(ns.size()) == cols - rk);
    for (const auto& v : ns) {
      for (const auto& row : sparse) CHECK(sgn(dot(row, v)) == 0);
    }
    // A consistent right-hand side built from a known vector is solvable.
    std::vector<Rational> x(cols);
    for (auto& v : x) v = c(rng);
    std::vector<Rational> rhs;
    for (const auto& row : sparse) rhs.push_back(dot(row, x));
    const auto sol = solve(sparse, rhs, cols);
    REQUIRE(sol.has_value());
    for (int i = 0; i < rows; ++i) CHECK(dot(sparse[i], *sol) == rhs[i]);
  }
}

TEST_CASE("inconsistent systems have no solution") {
  std::vector<SparseRow> rows{{{0, Rational(1)}}, {{0, Rational(2)}}};
  CHECK_FALSE(solve(rows, {Rational(1), Rational(3)}, 1).has_value());
}

TEST_CASE("row echelon membership") {
  RowEchelon e(3);
  CHECK(e.add({{0, Rational(1)}, {1, Rational(1)}}));
  CHECK_FALSE(e.add({{0, Rational(2)}, {1, Rational(2)}}));
  CHECK(e.contains({{0, Rational(-3)}, {1, Rational(-3)}}));
  CHECK_FALSE(e.contains({{2, Rational(1)}}));
  CHECK(e.rank() == 1);
}
