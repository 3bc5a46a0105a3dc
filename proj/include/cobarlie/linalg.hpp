#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cobarlie/rational.hpp"

namespace cobarlie {

struct Entry {
  uint32_t idx;
  Rational val;
  friend bool operator==(const Entry& a, const Entry& b) { return a.idx == b.idx && a.val == b.val; }
};

// Sorted by idx, no zero values.
using SparseVec = std::vector<Entry>;

void axpy(SparseVec& y, const Rational& a, const SparseVec& x);  // y += a*x
SparseVec scale(const SparseVec& x, const Rational& a);
SparseVec add(const SparseVec& x, const SparseVec& y);
Rational coeff(const SparseVec& x, uint32_t idx);
// Builds a canonical vector from unsorted (idx, val) pairs, summing duplicates.
SparseVec from_pairs(std::vector<Entry> pairs);
std::string to_string(const SparseVec& v);

// Column-major sparse matrix.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), columns_(cols) {}

  static SparseMatrix identity(size_t n);
  static SparseMatrix from_columns(size_t rows, std::vector<SparseVec> cols);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  const SparseVec& col(size_t j) const { return columns_[j]; }
  SparseVec& col(size_t j) { return columns_[j]; }
  const std::vector<SparseVec>& columns() const { return columns_; }
  size_t nnz() const;
  bool is_zero() const { return nnz() == 0; }

  SparseVec apply(const SparseVec& v) const;
  SparseMatrix operator*(const SparseMatrix& o) const;
  SparseMatrix operator+(const SparseMatrix& o) const;
  SparseMatrix operator-(const SparseMatrix& o) const;
  SparseMatrix scaled(const Rational& a) const;
  SparseMatrix transpose() const;
  SparseMatrix permute_rows(const std::vector<uint32_t>& perm) const;  // row i -> perm[i]
  bool operator==(const SparseMatrix& o) const;

  // Plain sparse-triplet dump "rows cols nnz" followed by "i j value" lines.
  std::string triplets() const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<SparseVec> columns_;
};

// Incremental echelon basis of a subspace of Q^ambient. Each stored vector is
// normalized so that its entry at its largest index (its pivot) equals 1, and
// no two stored vectors share a pivot. Optionally tracks, for every stored
// vector, its expression in terms of the inserted inputs.
class EchelonBasis {
 public:
  // Tags below track_from are not recorded in combinations.
  explicit EchelonBasis(size_t ambient, bool track = false, uint32_t track_from = 0);

  size_t ambient() const { return ambient_; }
  size_t rank() const { return vecs_.size(); }

  // Reduces v; returns the remainder. When tracking, *comb receives the
  // combination of inputs subtracted (remainder = v - sum comb_k input_k).
  SparseVec reduce(SparseVec v, SparseVec* comb = nullptr) const;
  // Inserts v with the given input tag; returns true if v was independent.
  // For a dependent v with tracking, *relation receives the combination of
  // inputs (including tag itself) that vanishes.
  bool insert(SparseVec v, uint32_t tag = 0, SparseVec* relation = nullptr);
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }
  const std::vector<SparseVec>& vectors() const { return vecs_; }

 private:
  size_t ambient_;
  bool track_;
  uint32_t track_from_;
  std::vector<int32_t> pivot_;
  std::vector<SparseVec> vecs_;
  std::vector<SparseVec> combs_;
};

size_t rank(const SparseMatrix& m);
// Basis of the kernel, as vectors in the column space of m.
std::vector<SparseVec> kernel_basis(const SparseMatrix& m);
// Rank by dense fraction-free (Bareiss) elimination over the integers after
// clearing denominators column by column. Independent of EchelonBasis.
size_t bareiss_rank(const SparseMatrix& m);
// dim(span(a) + span(b)) etc. on explicit spanning sets.
size_t span_rank(size_t ambient, const std::vector<SparseVec>& vs);

}  // namespace cobarlie
