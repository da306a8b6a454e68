#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "e510/scalar.hpp"

namespace e510 {

/// Sparse vector with entries sorted by key and no stored zeros. Keys only
/// need a strict weak order via operator<.
template <class Key>
class BasicSparseVector {
 public:
  using Entry = std::pair<Key, Scalar>;

  BasicSparseVector() = default;
  BasicSparseVector(Key k, Scalar v) {
    if (!v.is_zero()) entries_.emplace_back(std::move(k), std::move(v));
  }
  /// Sums duplicate keys and drops zeros.
  static BasicSparseVector from_unsorted(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    BasicSparseVector out;
    out.entries_.reserve(entries.size());
    for (auto& e : entries) {
      if (!out.entries_.empty() && out.entries_.back().first == e.first) {
        out.entries_.back().second += e.second;
        if (out.entries_.back().second.is_zero()) out.entries_.pop_back();
      } else if (!e.second.is_zero()) {
        out.entries_.push_back(std::move(e));
      }
    }
    return out;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Entry& front() const { return entries_.front(); }
  const Entry& back() const { return entries_.back(); }

  const Scalar* find(const Key& k) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                               [](const Entry& e, const Key& x) { return e.first < x; });
    if (it == entries_.end() || it->first != k) return nullptr;
    return &it->second;
  }
  Scalar at(const Key& k) const {
    const Scalar* p = find(k);
    return p ? *p : Scalar();
  }

  /// this += factor * other
  void axpy(const Scalar& factor, const BasicSparseVector& other) {
    if (factor.is_zero() || other.empty()) return;
    if (entries_.empty()) {
      entries_ = other.entries_;
      if (!factor.is_one())
        for (auto& e : entries_) e.second *= factor;
      return;
    }
    std::vector<Entry> merged;
    merged.reserve(entries_.size() + other.entries_.size());
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() || b != other.entries_.end()) {
      if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
        merged.push_back(std::move(*a));
        ++a;
      } else if (a == entries_.end() || b->first < a->first) {
        merged.emplace_back(b->first, factor * b->second);
        ++b;
      } else {
        Scalar v = a->second + factor * b->second;
        if (!v.is_zero()) merged.emplace_back(a->first, std::move(v));
        ++a;
        ++b;
      }
    }
    entries_ = std::move(merged);
  }
  void scale(const Scalar& factor) {
    if (factor.is_zero()) {
      entries_.clear();
      return;
    }
    for (auto& e : entries_) e.second *= factor;
  }

  BasicSparseVector& operator+=(const BasicSparseVector& o) {
    axpy(Scalar(1), o);
    return *this;
  }
  BasicSparseVector& operator-=(const BasicSparseVector& o) {
    axpy(Scalar(-1), o);
    return *this;
  }
  friend BasicSparseVector operator+(BasicSparseVector a, const BasicSparseVector& b) { return a += b; }
  friend BasicSparseVector operator-(BasicSparseVector a, const BasicSparseVector& b) { return a -= b; }
  friend BasicSparseVector operator*(const Scalar& s, BasicSparseVector a) {
    a.scale(s);
    return a;
  }
  BasicSparseVector operator-() const { return Scalar(-1) * *this; }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const BasicSparseVector&, const BasicSparseVector&) = default;

 private:
  std::vector<Entry> entries_;
};

class SparseVector : public BasicSparseVector<std::size_t> {
 public:
  using BasicSparseVector::BasicSparseVector;
  SparseVector(BasicSparseVector b) : BasicSparseVector(std::move(b)) {}  // NOLINT
  static SparseVector from_unsorted(std::vector<Entry> entries) {
    return BasicSparseVector::from_unsorted(std::move(entries));
  }
  static SparseVector from_dense(const std::vector<Scalar>& dense);
  std::vector<Scalar> to_dense(std::size_t size) const;
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  Scalar value;
};

class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t nrows, std::size_t ncols);
  /// Duplicate (row, col) entries are summed. Throws std::out_of_range.
  static SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols,
                                    std::vector<Triplet> triplets);
  static SparseMatrix from_rows(std::size_t ncols, std::vector<SparseVector> rows);
  static SparseMatrix identity(std::size_t n);

  std::size_t nrows() const { return rows_.size(); }
  std::size_t ncols() const { return ncols_; }
  const std::vector<SparseVector>& rows() const { return rows_; }
  const SparseVector& row(std::size_t r) const { return rows_.at(r); }
  Scalar at(std::size_t r, std::size_t c) const { return rows_.at(r).at(c); }
  std::size_t nnz() const;

  SparseVector multiply(const SparseVector& x) const;
  std::vector<Scalar> multiply(const std::vector<Scalar>& x) const;

 private:
  std::size_t ncols_ = 0;
  std::vector<SparseVector> rows_;
};

/// Reduced row echelon form: one row per pivot, pivot entry 1, pivot
/// columns absent from every other row.
struct RowEchelon {
  std::size_t ncols = 0;
  std::vector<SparseVector> rows;
  std::vector<std::size_t> pivot_cols;
  std::vector<Scalar> rhs;  // only filled when a right-hand side was supplied
  bool consistent = true;
};

/// Exact Gauss-Jordan elimination. Pivot column: lowest index with a
/// nonzero among the unreduced rows; pivot row: sparsest such row, ties to
/// the lowest row index.
RowEchelon row_echelon(const SparseMatrix& m, const std::vector<Scalar>* rhs = nullptr);

std::size_t rank(const SparseMatrix& m);

/// Basis of {v : Mv = 0}. Vector k has a 1 at the k-th free column and zeros
/// at every other free column.
std::vector<SparseVector> null_space(const SparseMatrix& m);

/// Some x with Mx = b, or nullopt when b is outside the column space.
std::optional<std::vector<Scalar>> solve(const SparseMatrix& m, const std::vector<Scalar>& b);

}  // namespace e510
