#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tgl/rational.hpp"

namespace tgl {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Leading principal minors by fraction-free (Bareiss) elimination without
/// pivoting. Stops at the first non-positive minor; returns false there.
bool leading_minors_positive(std::vector<std::vector<Integer>> m);

/// Unique solution of a x = b; throws Error(dimension_mismatch) when singular.
std::vector<Rational> solve(RationalMatrix a, std::vector<Rational> b);

/// Basis of the right null space, one vector per free column.
std::vector<std::vector<Rational>> nullspace(RationalMatrix a);

using SparseVector = std::vector<std::pair<std::uint64_t, Rational>>;

/// Sorts by key, merges duplicates and drops zeros.
void normalize(SparseVector& v);

/// Row-echelon basis of a growing span of sparse rational vectors.
class EchelonSpan {
 public:
  /// True iff v was independent of the current span (and has been added).
  bool insert(SparseVector v);
  bool contains(SparseVector v) const;
  std::size_t rank() const { return rows_.size(); }

 private:
  void reduce(SparseVector& v) const;

  std::map<std::uint64_t, SparseVector> rows_;
};

/// As EchelonSpan, but each basis row remembers which combination of the
/// inserted vectors produced it, so membership comes with coefficients.
class TrackedEchelonSpan {
 public:
  /// Inserts v as input number inserted_count(); true iff independent.
  bool insert(SparseVector v);
  /// Coefficients over inserted inputs expressing v, if v is in the span.
  std::optional<SparseVector> express(SparseVector v) const;
  std::size_t rank() const { return rows_.size(); }
  std::size_t inserted_count() const { return inserted_; }

 private:
  struct Row {
    SparseVector value;
    SparseVector combination;
  };
  void reduce(SparseVector& v, SparseVector& combination) const;

  std::map<std::uint64_t, Row> rows_;
  std::size_t inserted_ = 0;
};

/// Exact test that a symmetric matrix (given as rows) is positive semidefinite.
bool is_positive_semidefinite(std::vector<std::map<std::uint32_t, Rational>> rows);

}  // namespace tgl
