#include "tgl/exact_linalg.hpp"

#include <algorithm>

#include "tgl/error.hpp"

namespace tgl {

bool leading_minors_positive(std::vector<std::vector<Integer>> m) {
  const std::size_t n = m.size();
  Integer previous = 1;
  for (std::size_t k = 0; k < n; ++k) {
    // m[k][k] is now the leading principal minor of order k + 1.
    if (sgn(m[k][k]) <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), previous.get_mpz_t());
      }
    }
    previous = m[k][k];
  }
  return true;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RationalMatrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && a(p, col) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != row) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
    }
    const Rational inv = 1 / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col) == 0) continue;
      const Rational f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::vector<Rational> solve(RationalMatrix a, std::vector<Rational> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) {
    throw Error(ErrorCode::dimension_mismatch, "solve: non-square system");
  }
  RationalMatrix aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  const auto pivots = rref(aug);
  if (pivots.size() != n || pivots.back() != n - 1) {
    throw Error(ErrorCode::dimension_mismatch, "solve: singular system");
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug(i, n);
  return x;
}

std::vector<std::vector<Rational>> nullspace(RationalMatrix a) {
  const auto pivots = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(a.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

void normalize(SparseVector& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector out;
  out.reserve(v.size());
  for (auto& [k, val] : v) {
    if (!out.empty() && out.back().first == k) {
      out.back().second += val;
    } else {
      out.emplace_back(k, std::move(val));
    }
    if (out.back().second == 0) out.pop_back();
  }
  v = std::move(out);
}

namespace {

// target -= factor * row (both sorted).
void axpy(SparseVector& target, const Rational& factor, const SparseVector& row) {
  SparseVector out;
  out.reserve(target.size() + row.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < target.size() || j < row.size()) {
    if (j == row.size() || (i < target.size() && target[i].first < row[j].first)) {
      out.push_back(std::move(target[i++]));
    } else if (i == target.size() || row[j].first < target[i].first) {
      out.emplace_back(row[j].first, -factor * row[j].second);
      ++j;
    } else {
      Rational v = target[i].second - factor * row[j].second;
      if (v != 0) out.emplace_back(target[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  target = std::move(out);
}

void scale(SparseVector& v, const Rational& f) {
  for (auto& [k, val] : v) val *= f;
}

}  // namespace

void EchelonSpan::reduce(SparseVector& v) const {
  std::size_t cursor = 0;
  while (cursor < v.size()) {
    auto it = rows_.find(v[cursor].first);
    if (it == rows_.end()) {
      ++cursor;
      continue;
    }
    const Rational f = v[cursor].second;
    axpy(v, f, it->second);
  }
}

bool EchelonSpan::insert(SparseVector v) {
  normalize(v);
  reduce(v);
  if (v.empty()) return false;
  const Rational inv = 1 / v.front().second;
  scale(v, inv);
  const auto pivot = v.front().first;
  rows_.emplace(pivot, std::move(v));
  return true;
}

bool EchelonSpan::contains(SparseVector v) const {
  normalize(v);
  reduce(v);
  return v.empty();
}

void TrackedEchelonSpan::reduce(SparseVector& v, SparseVector& combination) const {
  std::size_t cursor = 0;
  while (cursor < v.size()) {
    auto it = rows_.find(v[cursor].first);
    if (it == rows_.end()) {
      ++cursor;
      continue;
    }
    const Rational f = v[cursor].second;
    axpy(v, f, it->second.value);
    axpy(combination, f, it->second.combination);
  }
}

bool TrackedEchelonSpan::insert(SparseVector v) {
  normalize(v);
  SparseVector combination{{inserted_, Rational(1)}};
  ++inserted_;
  reduce(v, combination);
  if (v.empty()) return false;
  const Rational inv = 1 / v.front().second;
  scale(v, inv);
  scale(combination, inv);
  const auto pivot = v.front().first;
  rows_.emplace(pivot, Row{std::move(v), std::move(combination)});
  return true;
}

std::optional<SparseVector> TrackedEchelonSpan::express(SparseVector v) const {
  normalize(v);
  SparseVector combination;
  reduce(v, combination);
  if (!v.empty()) return std::nullopt;
  // v - sum f_i row_i = 0, and combination accumulated -sum f_i comb_i.
  scale(combination, Rational(-1));
  return combination;
}

bool is_positive_semidefinite(std::vector<std::map<std::uint32_t, Rational>> rows) {
  const std::size_t n = rows.size();
  for (std::size_t k = 0; k < n; ++k) {
    auto& row_k = rows[k];
    auto diag_it = row_k.find(static_cast<std::uint32_t>(k));
    const Rational d = diag_it == row_k.end() ? Rational(0) : diag_it->second;
    if (d < 0) return false;
    if (d == 0) {
      for (const auto& [j, v] : row_k) {
        if (j != k && v != 0) return false;
      }
      continue;
    }
    std::vector<std::pair<std::uint32_t, Rational>> pivot_row;
    for (const auto& [j, v] : row_k) {
      if (j > k && v != 0) pivot_row.emplace_back(j, v);
    }
    for (const auto& [i, a_ik] : pivot_row) {
      auto& row_i = rows[i];
      const Rational f = a_ik / d;
      for (const auto& [j, a_kj] : pivot_row) {
        Rational& target = row_i[j];
        target -= f * a_kj;
        if (target == 0) row_i.erase(j);
      }
      row_i.erase(static_cast<std::uint32_t>(k));
    }
  }
  return true;
}

}  // namespace tgl
