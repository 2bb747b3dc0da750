#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tgl/exact_linalg.hpp"
#include "tgl/path.hpp"
#include "tgl/rational.hpp"

namespace tgl {

/// Exact sparse matrix on the truncated path space l^2({mu : |mu| <= L}).
///
/// Optional grading metadata travels with the matrix: the gauge degree n
/// (every nonzero entry (mu, nu) has |mu| - |nu| = n) and the kappa weight
/// (every nonzero entry has edge-source counts of mu minus those of nu equal
/// to the weight). `finite` marks operators that vanish outside the window,
/// such as matrix units; truncations of t_e or q_v are not finite.
class TruncatedOperator {
 public:
  using Column = std::vector<std::pair<std::uint32_t, Rational>>;

  explicit TruncatedOperator(BasisPtr basis);

  static TruncatedOperator identity(BasisPtr basis);
  static TruncatedOperator matrix_unit(BasisPtr basis, std::size_t row, std::size_t col);
  struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    Rational value;
  };
  /// Sums repeated (row, col) entries.
  static TruncatedOperator from_triplets(BasisPtr basis, std::vector<Triplet> entries);

  const BasisPtr& basis() const { return basis_; }
  std::size_t dimension() const { return dimension_; }

  Rational at(std::size_t row, std::size_t col) const;
  /// Adds value to entry (row, col).
  void add(std::size_t row, std::size_t col, const Rational& value);
  /// Entries of column col, sorted by row; empty if the column is zero.
  const Column& column(std::size_t col) const;
  /// Nonzero columns as (col, entries), sorted by col.
  const std::vector<std::pair<std::uint32_t, Column>>& columns() const { return columns_; }

  std::size_t nonzeros() const;
  bool is_zero() const { return nonzeros() == 0; }
  bool is_diagonal() const;
  Rational max_abs_diagonal() const;

  const std::optional<int>& gauge_degree() const { return gauge_degree_; }
  const std::optional<std::vector<int>>& kappa_weight() const { return kappa_weight_; }
  bool finite() const { return finite_; }
  void set_gauge_degree(std::optional<int> n) { gauge_degree_ = n; }
  void set_kappa_weight(std::optional<std::vector<int>> w) { kappa_weight_ = std::move(w); }
  void set_finite(bool f) { finite_ = f; }

  /// Entrywise checks of the grading invariants.
  bool entries_have_gauge_degree(int n) const;
  bool entries_have_kappa_weight(const std::vector<int>& w) const;
  /// The weight shared by every nonzero entry, if there is one.
  std::optional<std::vector<int>> entry_kappa_weight() const;

  TruncatedOperator adjoint() const;
  /// P A P with P the projection onto paths of length <= max_length.
  TruncatedOperator compressed(std::size_t max_length) const;

  /// Entries keyed by row * dimension + col, for rank computations.
  SparseVector flatten() const;

  TruncatedOperator& operator+=(const TruncatedOperator& other);
  TruncatedOperator& operator-=(const TruncatedOperator& other);
  TruncatedOperator& operator*=(const Rational& factor);

  friend TruncatedOperator operator+(TruncatedOperator a, const TruncatedOperator& b) { return a += b; }
  friend TruncatedOperator operator-(TruncatedOperator a, const TruncatedOperator& b) { return a -= b; }
  friend TruncatedOperator operator*(TruncatedOperator a, const Rational& f) { return a *= f; }
  friend TruncatedOperator operator*(const Rational& f, TruncatedOperator a) { return a *= f; }
  friend TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b);

  /// Compares entries only; grading metadata is ignored.
  friend bool operator==(const TruncatedOperator& a, const TruncatedOperator& b);

 private:
  void check_same_basis(const TruncatedOperator& other) const;
  void combine(const TruncatedOperator& other, const Rational& factor);

  Column& column_for_insert(std::size_t col);
  void drop_empty_columns();

  BasisPtr basis_;
  std::size_t dimension_ = 0;
  std::vector<std::pair<std::uint32_t, Column>> columns_;
  std::optional<int> gauge_degree_;
  std::optional<std::vector<int>> kappa_weight_;
  bool finite_ = false;
};

/// Edge-source counts: result[u] = #{edges of mu with source u}.
std::vector<int> source_counts(const Graph& g, const Path& mu);

}  // namespace tgl
