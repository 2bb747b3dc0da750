#include "tgl/operator.hpp"

#include <algorithm>
#include <map>

#include "tgl/error.hpp"

namespace tgl {

namespace {

std::optional<std::vector<int>> add_weights(const std::optional<std::vector<int>>& a,
                                            const std::optional<std::vector<int>>& b) {
  if (!a || !b || a->size() != b->size()) return std::nullopt;
  std::vector<int> out(a->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*a)[i] + (*b)[i];
  return out;
}

const TruncatedOperator::Column kEmptyColumn;

auto column_less = [](const auto& entry, std::size_t col) { return entry.first < col; };
auto row_less = [](const auto& entry, std::size_t row) { return entry.first < row; };

}  // namespace

std::vector<int> source_counts(const Graph& g, const Path& mu) {
  std::vector<int> counts(g.vertex_count(), 0);
  for (auto e : mu.edges) ++counts[g.src(e)];
  return counts;
}

TruncatedOperator::TruncatedOperator(BasisPtr basis) : basis_(std::move(basis)) {
  if (!basis_) throw Error(ErrorCode::invalid_argument, "operator needs a basis");
  dimension_ = basis_->size();
}

TruncatedOperator TruncatedOperator::identity(BasisPtr basis) {
  TruncatedOperator op(std::move(basis));
  op.columns_.reserve(op.dimension_);
  for (std::size_t i = 0; i < op.dimension_; ++i) {
    op.columns_.emplace_back(static_cast<std::uint32_t>(i), Column{{static_cast<std::uint32_t>(i), Rational(1)}});
  }
  op.gauge_degree_ = 0;
  op.kappa_weight_ = std::vector<int>(op.basis_->graph().vertex_count(), 0);
  return op;
}

TruncatedOperator TruncatedOperator::matrix_unit(BasisPtr basis, std::size_t row, std::size_t col) {
  TruncatedOperator op(std::move(basis));
  op.add(row, col, Rational(1));
  const auto& g = op.basis_->graph();
  const auto& mu = op.basis_->path(row);
  const auto& nu = op.basis_->path(col);
  op.gauge_degree_ = static_cast<int>(mu.length()) - static_cast<int>(nu.length());
  auto w = source_counts(g, mu);
  const auto wn = source_counts(g, nu);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= wn[i];
  op.kappa_weight_ = std::move(w);
  op.finite_ = true;
  return op;
}

TruncatedOperator TruncatedOperator::from_triplets(BasisPtr basis, std::vector<Triplet> entries) {
  TruncatedOperator op(std::move(basis));
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) { return a.col != b.col ? a.col < b.col : a.row < b.row; });
  for (std::size_t k = 0; k < entries.size();) {
    const auto col = entries[k].col;
    if (col >= op.dimension_) throw Error(ErrorCode::dimension_mismatch, "entry index out of range");
    Column c;
    while (k < entries.size() && entries[k].col == col) {
      const auto row = entries[k].row;
      if (row >= op.dimension_) throw Error(ErrorCode::dimension_mismatch, "entry index out of range");
      Rational v = 0;
      while (k < entries.size() && entries[k].col == col && entries[k].row == row) v += entries[k++].value;
      if (v != 0) c.emplace_back(row, std::move(v));
    }
    if (!c.empty()) op.columns_.emplace_back(col, std::move(c));
  }
  return op;
}

const TruncatedOperator::Column& TruncatedOperator::column(std::size_t col) const {
  auto it = std::lower_bound(columns_.begin(), columns_.end(), col, column_less);
  if (it != columns_.end() && it->first == col) return it->second;
  return kEmptyColumn;
}

TruncatedOperator::Column& TruncatedOperator::column_for_insert(std::size_t col) {
  auto it = std::lower_bound(columns_.begin(), columns_.end(), col, column_less);
  if (it != columns_.end() && it->first == col) return it->second;
  return columns_.emplace(it, static_cast<std::uint32_t>(col), Column{})->second;
}

void TruncatedOperator::drop_empty_columns() {
  std::erase_if(columns_, [](const auto& c) { return c.second.empty(); });
}

Rational TruncatedOperator::at(std::size_t row, std::size_t col) const {
  if (row >= dimension_ || col >= dimension_) throw Error(ErrorCode::dimension_mismatch, "entry index out of range");
  const auto& c = column(col);
  auto it = std::lower_bound(c.begin(), c.end(), row, row_less);
  if (it != c.end() && it->first == row) return it->second;
  return 0;
}

void TruncatedOperator::add(std::size_t row, std::size_t col, const Rational& value) {
  if (row >= dimension_ || col >= dimension_) {
    throw Error(ErrorCode::dimension_mismatch, "entry index out of range");
  }
  if (value == 0) return;
  auto& c = column_for_insert(col);
  auto it = std::lower_bound(c.begin(), c.end(), row, row_less);
  if (it != c.end() && it->first == row) {
    it->second += value;
    if (it->second == 0) {
      c.erase(it);
      if (c.empty()) drop_empty_columns();
    }
  } else {
    c.emplace(it, static_cast<std::uint32_t>(row), value);
  }
}

std::size_t TruncatedOperator::nonzeros() const {
  std::size_t n = 0;
  for (const auto& [j, c] : columns_) n += c.size();
  return n;
}

bool TruncatedOperator::is_diagonal() const {
  for (const auto& [j, c] : columns_) {
    for (const auto& [i, v] : c) {
      if (i != j) return false;
    }
  }
  return true;
}

Rational TruncatedOperator::max_abs_diagonal() const {
  Rational best = 0;
  for (const auto& [j, c] : columns_) {
    for (const auto& [i, v] : c) {
      if (i == j && abs(v) > best) best = abs(v);
    }
  }
  return best;
}

bool TruncatedOperator::entries_have_gauge_degree(int n) const {
  for (const auto& [j, c] : columns_) {
    for (const auto& [i, v] : c) {
      if (static_cast<int>(basis_->length(i)) - static_cast<int>(basis_->length(j)) != n) return false;
    }
  }
  return true;
}

bool TruncatedOperator::entries_have_kappa_weight(const std::vector<int>& w) const {
  const auto& g = basis_->graph();
  if (w.size() != g.vertex_count()) return false;
  for (const auto& [j, c] : columns_) {
    const auto col_counts = source_counts(g, basis_->path(j));
    for (const auto& [i, v] : c) {
      const auto row_counts = source_counts(g, basis_->path(i));
      for (std::size_t u = 0; u < w.size(); ++u) {
        if (row_counts[u] - col_counts[u] != w[u]) return false;
      }
    }
  }
  return true;
}

std::optional<std::vector<int>> TruncatedOperator::entry_kappa_weight() const {
  if (columns_.empty()) return std::nullopt;
  const auto& g = basis_->graph();
  const auto& [j, c] = columns_.front();
  auto w = source_counts(g, basis_->path(c.front().first));
  const auto col_counts = source_counts(g, basis_->path(j));
  for (std::size_t u = 0; u < w.size(); ++u) w[u] -= col_counts[u];
  if (!entries_have_kappa_weight(w)) return std::nullopt;
  return w;
}

TruncatedOperator TruncatedOperator::adjoint() const {
  TruncatedOperator out(basis_);
  std::map<std::uint32_t, Column> transposed;
  for (const auto& [j, c] : columns_) {
    for (const auto& [i, v] : c) transposed[i].emplace_back(j, v);
  }
  // Columns are visited in increasing order, so each output column is sorted.
  out.columns_.reserve(transposed.size());
  for (auto& [i, c] : transposed) out.columns_.emplace_back(i, std::move(c));
  if (gauge_degree_) out.gauge_degree_ = -*gauge_degree_;
  if (kappa_weight_) {
    auto w = *kappa_weight_;
    for (auto& x : w) x = -x;
    out.kappa_weight_ = std::move(w);
  }
  out.finite_ = finite_;
  return out;
}

TruncatedOperator TruncatedOperator::compressed(std::size_t max_length) const {
  TruncatedOperator out(basis_);
  const std::size_t limit = basis_->count_up_to(max_length);
  for (const auto& [j, c] : columns_) {
    if (j >= limit) break;
    Column kept;
    for (const auto& [i, v] : c) {
      if (i < limit) kept.emplace_back(i, v);
    }
    if (!kept.empty()) out.columns_.emplace_back(j, std::move(kept));
  }
  out.gauge_degree_ = gauge_degree_;
  out.kappa_weight_ = kappa_weight_;
  out.finite_ = true;
  return out;
}

SparseVector TruncatedOperator::flatten() const {
  SparseVector out;
  const std::uint64_t n = dimension_;
  for (const auto& [j, c] : columns_) {
    for (const auto& [i, v] : c) out.emplace_back(static_cast<std::uint64_t>(i) * n + j, v);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

void TruncatedOperator::check_same_basis(const TruncatedOperator& other) const {
  if (basis_ != other.basis_ && (basis_->size() != other.basis_->size() ||
                                 basis_->truncation() != other.basis_->truncation() ||
                                 !(basis_->graph() == other.basis_->graph()))) {
    throw Error(ErrorCode::dimension_mismatch, "operators live on different path bases");
  }
}

void TruncatedOperator::combine(const TruncatedOperator& other, const Rational& factor) {
  check_same_basis(other);
  std::vector<std::pair<std::uint32_t, Column>> out;
  out.reserve(columns_.size() + other.columns_.size());
  std::size_t p = 0;
  std::size_t q = 0;
  auto scaled = [&factor](const Column& c) {
    Column r;
    r.reserve(c.size());
    for (const auto& [i, v] : c) r.emplace_back(i, factor * v);
    return r;
  };
  while (p < columns_.size() || q < other.columns_.size()) {
    if (q == other.columns_.size() || (p < columns_.size() && columns_[p].first < other.columns_[q].first)) {
      out.push_back(std::move(columns_[p++]));
    } else if (p == columns_.size() || other.columns_[q].first < columns_[p].first) {
      out.emplace_back(other.columns_[q].first, scaled(other.columns_[q].second));
      ++q;
    } else {
      const auto& a = columns_[p].second;
      const auto& b = other.columns_[q].second;
      Column merged;
      merged.reserve(a.size() + b.size());
      std::size_t i = 0;
      std::size_t k = 0;
      while (i < a.size() || k < b.size()) {
        if (k == b.size() || (i < a.size() && a[i].first < b[k].first)) {
          merged.push_back(a[i++]);
        } else if (i == a.size() || b[k].first < a[i].first) {
          merged.emplace_back(b[k].first, factor * b[k].second);
          ++k;
        } else {
          Rational v = a[i].second + factor * b[k].second;
          if (v != 0) merged.emplace_back(a[i].first, std::move(v));
          ++i;
          ++k;
        }
      }
      if (!merged.empty()) out.emplace_back(columns_[p].first, std::move(merged));
      ++p;
      ++q;
    }
  }
  columns_ = std::move(out);
  if (gauge_degree_ != other.gauge_degree_) gauge_degree_.reset();
  if (kappa_weight_ != other.kappa_weight_) kappa_weight_.reset();
  finite_ = finite_ && other.finite_;
}

TruncatedOperator& TruncatedOperator::operator+=(const TruncatedOperator& other) {
  combine(other, Rational(1));
  return *this;
}

TruncatedOperator& TruncatedOperator::operator-=(const TruncatedOperator& other) {
  combine(other, Rational(-1));
  return *this;
}

TruncatedOperator& TruncatedOperator::operator*=(const Rational& factor) {
  if (factor == 0) {
    columns_.clear();
    return *this;
  }
  for (auto& [j, c] : columns_) {
    for (auto& [i, v] : c) v *= factor;
  }
  return *this;
}

TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b) {
  a.check_same_basis(b);
  TruncatedOperator out(a.basis_);
  std::map<std::uint32_t, Rational> acc;
  for (const auto& [j, bc] : b.columns_) {
    acc.clear();
    for (const auto& [k, bv] : bc) {
      for (const auto& [i, av] : a.column(k)) acc[i] += av * bv;
    }
    TruncatedOperator::Column col;
    for (auto& [i, v] : acc) {
      if (v != 0) col.emplace_back(i, std::move(v));
    }
    if (!col.empty()) out.columns_.emplace_back(j, std::move(col));
  }
  if (a.gauge_degree_ && b.gauge_degree_) out.gauge_degree_ = *a.gauge_degree_ + *b.gauge_degree_;
  out.kappa_weight_ = add_weights(a.kappa_weight_, b.kappa_weight_);
  out.finite_ = a.finite_ && b.finite_;
  return out;
}

bool operator==(const TruncatedOperator& a, const TruncatedOperator& b) {
  a.check_same_basis(b);
  return a.columns_ == b.columns_;
}

}  // namespace tgl
