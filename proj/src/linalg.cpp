#include "g1s/linalg.hpp"

#include <algorithm>

#include "g1s/error.hpp"

namespace g1s {

SparseRow make_sparse(const std::vector<Rational>& dense) {
  SparseRow row;
  for (int i = 0; i < static_cast<int>(dense.size()); ++i) {
    if (sgn(dense[i]) != 0) row.emplace_back(i, dense[i]);
  }
  return row;
}

std::vector<Rational> make_dense(const SparseRow& row, int ncols) {
  std::vector<Rational> dense(ncols);
  for (const auto& [c, v] : row) dense.at(c) = v;
  return dense;
}

SparseRow axpy(const SparseRow& a, const Rational& s, const SparseRow& b) {
  SparseRow out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, -s * b[j].second);
      ++j;
    } else {
      Rational v = a[i].second - s * b[j].second;
      if (sgn(v) != 0) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

Rational dot(const SparseRow& a, const SparseRow& b) {
  Rational acc = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (b[j].first < a[i].first) {
      ++j;
    } else {
      acc += a[i].second * b[j].second;
      ++i;
      ++j;
    }
  }
  return acc;
}

Rational dot(const SparseRow& a, const std::vector<Rational>& dense) {
  Rational acc = 0;
  for (const auto& [c, v] : a) acc += v * dense.at(c);
  return acc;
}

RowEchelon::RowEchelon(int ncols, bool reduced)
    : ncols_(ncols), reduced_(reduced), pivot_row_(ncols, -1) {}

SparseRow RowEchelon::reduce(SparseRow row) const {
  if (reduced_) {
    // Pivot rows are zero in every other pivot column, so one pass over the
    // pivot columns present in the original row suffices.
    std::vector<std::pair<int, Rational>> hits;
    for (const auto& [c, v] : row) {
      if (pivot_row_[c] >= 0) hits.emplace_back(pivot_row_[c], v);
    }
    for (const auto& [ri, v] : hits) row = axpy(row, v, rows_[ri]);
    return row;
  }
  // Entries before pos are final: a pivot row with lead c only touches columns >= c.
  std::size_t pos = 0;
  while (pos < row.size()) {
    const int ri = pivot_row_[row[pos].first];
    if (ri < 0) {
      ++pos;
      continue;
    }
    const Rational s = row[pos].second;
    row = axpy(row, s, rows_[ri]);
  }
  return row;
}

SparseRow RowEchelon::reduce_lead(SparseRow row) const {
  while (!row.empty()) {
    const int ri = pivot_row_[row.front().first];
    if (ri < 0) break;
    const Rational s = row.front().second;
    row = axpy(row, s, rows_[ri]);
  }
  return row;
}

bool RowEchelon::add(SparseRow row) {
  for (const auto& [c, v] : row) {
    if (c < 0 || c >= ncols_) fail("InternalError", "RowEchelon: column out of range");
  }
  row = reduced_ ? reduce(std::move(row)) : reduce_lead(std::move(row));
  if (row.empty()) return false;
  // In rank-only mode the lead may be followed by pivot columns; that is fine.
  const int lead = row.front().first;
  const Rational inv = 1 / row.front().second;
  for (auto& e : row) e.second *= inv;
  if (reduced_) {
    for (auto& other : rows_) {
      auto it = std::lower_bound(other.begin(), other.end(), lead,
                                 [](const auto& e, int c) { return e.first < c; });
      if (it != other.end() && it->first == lead) {
        const Rational s = it->second;
        other = axpy(other, s, row);
      }
    }
  }
  pivot_row_[lead] = static_cast<int>(rows_.size());
  pivots_.push_back(lead);
  rows_.push_back(std::move(row));
  return true;
}

std::vector<SparseRow> RowEchelon::nullspace() const {
  if (!reduced_) fail("InternalError", "RowEchelon::nullspace requires reduced mode");
  std::vector<SparseRow> by_free(ncols_);
  for (std::size_t ri = 0; ri < rows_.size(); ++ri) {
    const int p = pivots_[ri];
    for (const auto& [c, v] : rows_[ri]) {
      if (c != p) by_free[c].emplace_back(p, -v);
    }
  }
  std::vector<SparseRow> basis;
  for (int f = 0; f < ncols_; ++f) {
    if (pivot_row_[f] >= 0) continue;
    SparseRow vec = std::move(by_free[f]);
    vec.emplace_back(f, Rational(1));
    std::sort(vec.begin(), vec.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    basis.push_back(std::move(vec));
  }
  return basis;
}

int rank(const std::vector<SparseRow>& rows, int ncols) {
  RowEchelon ech(ncols, false);
  for (const auto& r : rows) ech.add(r);
  return ech.rank();
}

std::vector<SparseRow> nullspace(const std::vector<SparseRow>& rows, int ncols) {
  RowEchelon ech(ncols, true);
  for (const auto& r : rows) ech.add(r);
  return ech.nullspace();
}

std::optional<std::vector<Rational>> solve(const std::vector<SparseRow>& rows,
                                           const std::vector<Rational>& rhs, int ncols) {
  if (rows.size() != rhs.size()) fail("ShapeMismatch", "solve: rows and rhs differ in length");
  RowEchelon ech(ncols + 1, true);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    SparseRow r = rows[i];
    if (sgn(rhs[i]) != 0) r.emplace_back(ncols, rhs[i]);
    ech.add(std::move(r));
  }
  if (ech.is_pivot(ncols)) return std::nullopt;
  std::vector<Rational> x(ncols);
  for (std::size_t ri = 0; ri < ech.rows().size(); ++ri) {
    const auto& row = ech.rows()[ri];
    if (row.back().first == ncols) x[ech.pivot_columns()[ri]] = row.back().second;
  }
  return x;
}

}  // namespace g1s
