#include "tgl/kms.hpp"

#include <algorithm>
#include <cmath>

#include "tgl/error.hpp"
#include "tgl/exact_linalg.hpp"

namespace tgl {

namespace {

void require_subcritical(const AdjacencyMatrix& a, const Rational& x) {
  if (x <= 0) throw Error(ErrorCode::invalid_argument, "x must be positive");
  if (!is_subcritical(a, x)) {
    throw Error(ErrorCode::supercritical, "x ≥ 1/ρ(A_E): x = " + to_string(x) + " is not subcritical");
  }
}

// Row vector 1^T A^n.
std::vector<Integer> ones_times_power(const AdjacencyMatrix& a, unsigned n) { return path_counts(a, n); }

// Solves row vector z (I - xA) = c, i.e. (I - xA)^T z = c.
std::vector<Rational> solve_left(const AdjacencyMatrix& a, const Rational& x, std::vector<Rational> c) {
  const std::size_t n = a.size();
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // (I - xA)^T [i][j] = delta_ij - x A[j][i]
      Rational entry = -x * Rational(static_cast<unsigned long>(a(static_cast<Vertex>(j), static_cast<Vertex>(i))));
      if (i == j) entry += 1;
      m(i, j) = entry;
    }
  }
  return solve(std::move(m), std::move(c));
}

}  // namespace

std::vector<Rational> partition_all(const AdjacencyMatrix& a, const Rational& x) {
  require_subcritical(a, x);
  return solve_left(a, x, std::vector<Rational>(a.size(), Rational(1)));
}

Rational partition(const Graph& g, Vertex v, const Rational& x) {
  if (v >= g.vertex_count()) throw Error(ErrorCode::unknown_id, "unknown vertex index " + std::to_string(v));
  return partition_all(adjacency(g), x)[v];
}

Rational partition_partial_sum(const AdjacencyMatrix& a, Vertex v, const Rational& x, unsigned max_length) {
  Rational sum = 0;
  Rational xn = 1;
  std::vector<Integer> counts(a.size(), Integer(1));
  for (unsigned n = 0; n <= max_length; ++n) {
    if (n > 0) {
      counts = path_counts(a, n);
      xn *= x;
    }
    sum += xn * Rational(counts[v]);
  }
  return sum;
}

Rational partition_remainder(const AdjacencyMatrix& a, Vertex v, const Rational& x, unsigned max_length) {
  require_subcritical(a, x);
  const auto row = ones_times_power(a, max_length + 1);
  std::vector<Rational> c;
  c.reserve(row.size());
  for (const auto& r : row) c.emplace_back(r);
  const auto z = solve_left(a, x, std::move(c));
  return power(x, max_length + 1) * z[v];
}

std::vector<KmsState> extremal_states(const Graph& g, const Rational& x) {
  if (x >= 1) {
    throw Error(ErrorCode::supercritical, "extremal states need beta > 0, i.e. x < 1; got x = " + to_string(x));
  }
  const auto a = adjacency(g);
  const auto z = partition_all(a, x);
  const std::size_t n = a.size();
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = -x * Rational(static_cast<unsigned long>(a(static_cast<Vertex>(i), static_cast<Vertex>(j))));
      if (i == j) m(i, j) += 1;
    }
  }
  std::vector<KmsState> states;
  for (Vertex v = 0; v < n; ++v) {
    std::vector<Rational> unit(n, Rational(0));
    unit[v] = 1;
    auto column = solve(m, std::move(unit));
    for (auto& c : column) c /= z[v];
    states.push_back({v, x, z[v], std::move(column)});
  }
  return states;
}

Rational state_on_monomial(const KmsState& s, const Monomial& m) {
  if (m.mu != m.nu) return 0;
  if (m.mu.source >= s.mass.size()) throw Error(ErrorCode::dimension_mismatch, "monomial outside the state's graph");
  return power(s.x, static_cast<unsigned>(m.mu.length())) * s.mass[m.mu.source];
}

Rational state_on_polynomial(const KmsState& s, const Polynomial& p) {
  Rational total = 0;
  for (const auto& [m, c] : p.terms()) total += c * state_on_monomial(s, m);
  return total;
}

void check_state_basis(const KmsState& s, const PathBasis& basis) {
  const auto& g = basis.graph();
  bool same = s.vertex < g.vertex_count() && s.mass.size() == g.vertex_count() && is_subcritical(adjacency(g), s.x);
  if (!same || partition(g, s.vertex, s.x) != s.partition) {
    throw Error(ErrorCode::dimension_mismatch, "state does not belong to the operator's graph");
  }
}

StateValue state_eval_unchecked(const KmsState& s, const TruncatedOperator& a) {
  const auto& basis = *a.basis();
  std::vector<Rational> xn(basis.truncation() + 1);
  xn[0] = 1;
  for (std::size_t n = 1; n < xn.size(); ++n) xn[n] = xn[n - 1] * s.x;
  Rational weighted = 0;
  for (const auto& [j, c] : a.columns()) {
    if (basis.path(j).source != s.vertex) continue;
    auto it = std::lower_bound(c.begin(), c.end(), j, [](const auto& e, std::uint32_t r) { return e.first < r; });
    if (it == c.end() || it->first != j) continue;
    weighted += xn[basis.length(j)] * it->second;
  }
  StateValue out;
  out.value = weighted / s.partition;
  if (a.finite()) {
    out.tail_bound = 0;
  } else {
    std::vector<std::size_t> per_length(xn.size(), 0);
    for (auto idx : basis.with_source(s.vertex)) ++per_length[basis.length(idx)];
    Rational window_mass = 0;
    for (std::size_t n = 0; n < xn.size(); ++n) window_mass += xn[n] * Rational(static_cast<unsigned long>(per_length[n]));
    out.tail_bound = a.max_abs_diagonal() * (s.partition - window_mass) / s.partition;
  }
  return out;
}

StateValue state_eval(const KmsState& s, const TruncatedOperator& a) {
  check_state_basis(s, *a.basis());
  return state_eval_unchecked(s, a);
}

KmsReport verify_kms_condition(const KmsState& s, std::span<const std::pair<Monomial, Monomial>> pairs) {
  KmsReport report;
  report.residuals.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    const auto ab = monomial_mult(a, b);
    const auto ba = monomial_mult(b, a);
    const Rational lhs = ab ? state_on_monomial(s, *ab) : Rational(0);
    Rational rhs = ba ? state_on_monomial(s, *ba) : Rational(0);
    const int degree = a.gauge_degree();
    if (rhs != 0) {
      rhs *= degree >= 0 ? power(s.x, static_cast<unsigned>(degree)) : 1 / power(s.x, static_cast<unsigned>(-degree));
    }
    Rational residual = lhs - rhs;
    if (residual != 0) ++report.nonzero;
    report.residuals.push_back({a, b, std::move(residual)});
  }
  return report;
}

std::vector<Monomial> enumerate_monomials(const Graph& g, std::size_t max_total_length) {
  const auto paths = enumerate_paths(g, max_total_length);
  std::vector<std::vector<const Path*>> by_source(g.vertex_count());
  for (const auto& p : paths) by_source[p.source].push_back(&p);
  std::vector<Monomial> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    for (const Path* mu : by_source[v]) {
      for (const Path* nu : by_source[v]) {
        if (mu->length() + nu->length() <= max_total_length) out.push_back(Monomial{*mu, *nu});
      }
    }
  }
  return out;
}

const char* to_string(CountKind kind) { return kind == CountKind::exact ? "exact" : "upper-bound"; }

StateCountProfile count_profile(const Graph& g, std::span<const double> betas) {
  if (!std::is_sorted(betas.begin(), betas.end())) {
    throw Error(ErrorCode::invalid_argument, "beta grid must be sorted ascending");
  }
  const auto a = adjacency(g);
  const auto parts = scc(a);
  StateCountProfile profile;
  profile.vertex_count = g.vertex_count();
  profile.acyclic = std::none_of(parts.nontrivial.begin(), parts.nontrivial.end(), [](bool b) { return b; });
  for (double beta : betas) {
    const Rational x = rational_from_double(std::exp(-beta));
    ProfileEntry entry;
    entry.beta = beta;
    if (x > 0 && is_subcritical(a, x)) {
      entry.count = g.vertex_count();
      entry.kind = CountKind::exact;
    } else {
      entry.count = g.vertex_count() - hereditary_set(g, x).size();
      entry.kind = CountKind::upper_bound;
    }
    profile.entries.push_back(entry);
  }
  return profile;
}

CriticalDetection detect_critical_beta(const StateCountProfile& profile) {
  CriticalDetection d;
  if (profile.acyclic) {
    d.outcome = CriticalDetection::Outcome::stabilized_everywhere;
    return d;
  }
  const auto& e = profile.entries;
  if (e.empty()) return d;
  std::size_t maximum = 0;
  for (const auto& p : e) maximum = std::max(maximum, p.count);
  std::size_t first = e.size();
  while (first > 0 && e[first - 1].count == maximum) --first;
  if (first == 0 || first == e.size()) return d;
  d.outcome = CriticalDetection::Outcome::interval;
  d.lower_index = first - 1;
  d.lower = e[first - 1].beta;
  d.upper = e[first].beta;
  return d;
}

std::vector<double> beta_grid(double start, double stop, double step) {
  if (!(step > 0)) throw Error(ErrorCode::invalid_argument, "beta step must be positive");
  if (stop < start) throw Error(ErrorCode::invalid_argument, "beta stop must not be below start");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

Rational default_subcritical_x(const AdjacencyMatrix& a) {
  const Rational half(1, 2);
  if (is_subcritical(a, half)) return half;
  const auto bounds = perron_bounds(a, 1e-9);
  const double upper = bounds.upper + 1e-6;
  Rational x(static_cast<long>(std::floor(1000.0 / (2.0 * upper))), 1000);
  if (x <= 0) x = Rational(1, 1000);
  x.canonicalize();
  while (!is_subcritical(a, x)) x /= 2;
  return x;
}

}  // namespace tgl
