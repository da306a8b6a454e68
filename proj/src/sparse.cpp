#include "e510/sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace e510 {

SparseVector SparseVector::from_dense(const std::vector<Scalar>& dense) {
  std::vector<Entry> out;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (!dense[i].is_zero()) out.emplace_back(i, dense[i]);
  }
  return from_unsorted(std::move(out));
}

std::vector<Scalar> SparseVector::to_dense(std::size_t size) const {
  std::vector<Scalar> out(size);
  for (const auto& [i, v] : entries()) out.at(i) = v;
  return out;
}

SparseMatrix::SparseMatrix(std::size_t nrows, std::size_t ncols) : ncols_(ncols), rows_(nrows) {}

SparseMatrix SparseMatrix::from_triplets(std::size_t nrows, std::size_t ncols,
                                         std::vector<Triplet> triplets) {
  std::vector<std::vector<SparseVector::Entry>> buckets(nrows);
  for (auto& t : triplets) {
    if (t.row >= nrows || t.col >= ncols) throw std::out_of_range("SparseMatrix: index out of bounds");
    buckets[t.row].emplace_back(t.col, std::move(t.value));
  }
  SparseMatrix m(nrows, ncols);
  for (std::size_t r = 0; r < nrows; ++r) m.rows_[r] = SparseVector::from_unsorted(std::move(buckets[r]));
  return m;
}

SparseMatrix SparseMatrix::from_rows(std::size_t ncols, std::vector<SparseVector> rows) {
  for (const auto& r : rows) {
    if (!r.empty() && r.entries().back().first >= ncols)
      throw std::out_of_range("SparseMatrix: column index out of bounds");
  }
  SparseMatrix m;
  m.ncols_ = ncols;
  m.rows_ = std::move(rows);
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, Scalar(1)});
  return from_triplets(n, n, std::move(t));
}

std::size_t SparseMatrix::nnz() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.nnz();
  return n;
}

SparseVector SparseMatrix::multiply(const SparseVector& x) const {
  std::vector<SparseVector::Entry> out;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    Scalar acc;
    // merge-style dot product
    auto a = rows_[r].begin();
    auto b = x.begin();
    while (a != rows_[r].end() && b != x.end()) {
      if (a->first < b->first) {
        ++a;
      } else if (b->first < a->first) {
        ++b;
      } else {
        acc += a->second * b->second;
        ++a;
        ++b;
      }
    }
    if (!acc.is_zero()) out.emplace_back(r, std::move(acc));
  }
  return SparseVector::from_unsorted(std::move(out));
}

std::vector<Scalar> SparseMatrix::multiply(const std::vector<Scalar>& x) const {
  if (x.size() != ncols_) throw std::invalid_argument("SparseMatrix::multiply: size mismatch");
  std::vector<Scalar> out(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (const auto& [c, v] : rows_[r]) out[r] += v * x[c];
  }
  return out;
}

// Gauss-Jordan elimination with a column -> rows index so that each column
// step only visits rows that can contain it.
class Eliminator {
 public:
  Eliminator(const SparseMatrix& m, const std::vector<Scalar>* rhs)
      : ncols_(m.ncols()), rows_(m.rows()), col_rows_(m.ncols()), has_rhs_(rhs != nullptr) {
    if (rhs) {
      if (rhs->size() != m.nrows()) throw std::invalid_argument("row_echelon: rhs size mismatch");
      rhs_ = *rhs;
    } else {
      rhs_.assign(rows_.size(), Scalar());
    }
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (const auto& [c, v] : rows_[r]) col_rows_[c].push_back(r);
    is_pivot_.assign(rows_.size(), false);
    mark_.assign(rows_.size(), 0);
  }

  RowEchelon run() {
    std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (col, row)
    for (std::size_t c = 0; c < ncols_; ++c) {
      ++stamp_;
      std::vector<std::size_t> live;
      for (std::size_t r : col_rows_[c]) {
        if (mark_[r] == stamp_) continue;
        mark_[r] = stamp_;
        if (rows_[r].find(c)) live.push_back(r);
      }
      std::size_t best = rows_.size();
      for (std::size_t r : live) {
        if (is_pivot_[r]) continue;
        if (best == rows_.size() || rows_[r].nnz() < rows_[best].nnz() ||
            (rows_[r].nnz() == rows_[best].nnz() && r < best))
          best = r;
      }
      if (best == rows_.size()) {
        col_rows_[c] = std::move(live);
        continue;
      }
      Scalar inv = Scalar(1) / rows_[best].at(c);
      rows_[best].scale(inv);
      rhs_[best] *= inv;
      is_pivot_[best] = true;
      pivots.emplace_back(c, best);
      for (std::size_t r : live) {
        if (r == best) continue;
        Scalar f = -rows_[r].at(c);
        eliminate(r, f, best);
      }
      col_rows_[c] = {best};
    }
    RowEchelon out;
    out.ncols = ncols_;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (!is_pivot_[r] && !rhs_[r].is_zero()) out.consistent = false;
    }
    for (auto& [c, r] : pivots) {
      out.pivot_cols.push_back(c);
      out.rows.push_back(std::move(rows_[r]));
      if (has_rhs_) out.rhs.push_back(rhs_[r]);
    }
    return out;
  }

 private:
  void eliminate(std::size_t r, const Scalar& f, std::size_t p) {
    const SparseVector& prow = rows_[p];
    // record columns newly created in row r
    for (const auto& [c, v] : prow) {
      if (!rows_[r].find(c)) col_rows_[c].push_back(r);
    }
    rows_[r].axpy(f, prow);
    rhs_[r] += f * rhs_[p];
  }

  std::size_t ncols_;
  std::vector<SparseVector> rows_;
  std::vector<std::vector<std::size_t>> col_rows_;
  std::vector<Scalar> rhs_;
  bool has_rhs_;
  std::vector<bool> is_pivot_;
  std::vector<std::size_t> mark_;
  std::size_t stamp_ = 0;
};

RowEchelon row_echelon(const SparseMatrix& m, const std::vector<Scalar>* rhs) {
  return Eliminator(m, rhs).run();
}

std::size_t rank(const SparseMatrix& m) { return row_echelon(m).pivot_cols.size(); }

std::vector<SparseVector> null_space(const SparseMatrix& m) {
  RowEchelon e = row_echelon(m);
  std::vector<bool> is_pivot(m.ncols(), false);
  for (std::size_t c : e.pivot_cols) is_pivot[c] = true;
  std::vector<std::size_t> free_index(m.ncols(), 0);
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.ncols(); ++c) {
    if (!is_pivot[c]) {
      free_index[c] = free_cols.size();
      free_cols.push_back(c);
    }
  }
  std::vector<std::vector<SparseVector::Entry>> basis(free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) basis[k].emplace_back(free_cols[k], Scalar(1));
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    for (const auto& [c, v] : e.rows[i]) {
      if (c == e.pivot_cols[i]) continue;
      basis[free_index[c]].emplace_back(e.pivot_cols[i], -v);
    }
  }
  std::vector<SparseVector> out;
  out.reserve(basis.size());
  for (auto& b : basis) out.push_back(SparseVector::from_unsorted(std::move(b)));
  return out;
}

std::optional<std::vector<Scalar>> solve(const SparseMatrix& m, const std::vector<Scalar>& b) {
  RowEchelon e = row_echelon(m, &b);
  if (!e.consistent) return std::nullopt;
  std::vector<Scalar> x(m.ncols());
  for (std::size_t i = 0; i < e.rows.size(); ++i) x[e.pivot_cols[i]] = e.rhs[i];
  return x;
}

}  // namespace e510
