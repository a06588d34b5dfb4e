#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "g1s/rational.hpp"

namespace g1s {

// Sparse vector: (column, value) pairs sorted by column, no explicit zeros.
using SparseRow = std::vector<std::pair<int, Rational>>;

SparseRow make_sparse(const std::vector<Rational>& dense);
std::vector<Rational> make_dense(const SparseRow& row, int ncols);
// a - s*b
SparseRow axpy(const SparseRow& a, const Rational& s, const SparseRow& b);
Rational dot(const SparseRow& a, const SparseRow& b);
Rational dot(const SparseRow& a, const std::vector<Rational>& dense);

// Incremental exact row echelon form over Q. In reduced mode every pivot
// column is cleared from all other rows (reduced row echelon form), which
// is required for nullspace and solve; rank-only mode is cheaper.
class RowEchelon {
 public:
  explicit RowEchelon(int ncols, bool reduced = true);

  int ncols() const { return ncols_; }
  int rank() const { return static_cast<int>(rows_.size()); }

  // Inserts a row; returns true when it increases the rank.
  bool add(SparseRow row);
  // Remainder of row after reduction by the current pivots.
  SparseRow reduce(SparseRow row) const;
  bool contains(const SparseRow& row) const { return reduce(row).empty(); }

  const std::vector<SparseRow>& rows() const { return rows_; }
  const std::vector<int>& pivot_columns() const { return pivots_; }
  bool is_pivot(int col) const { return pivot_row_[col] >= 0; }

  // Basis of the right nullspace, one vector per free column in increasing
  // column order (reduced mode only).
  std::vector<SparseRow> nullspace() const;

 private:
  SparseRow reduce_lead(SparseRow row) const;

  int ncols_;
  bool reduced_;
  std::vector<SparseRow> rows_;
  std::vector<int> pivots_;
  std::vector<int> pivot_row_;
};

int rank(const std::vector<SparseRow>& rows, int ncols);
std::vector<SparseRow> nullspace(const std::vector<SparseRow>& rows, int ncols);

// Particular solution of rows * x = rhs with free variables set to zero,
// or nullopt when the system is inconsistent.
std::optional<std::vector<Rational>> solve(const std::vector<SparseRow>& rows,
                                           const std::vector<Rational>& rhs, int ncols);

}  // namespace g1s
