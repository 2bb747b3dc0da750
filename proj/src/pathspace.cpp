#include "tgl/pathspace.hpp"

#include <map>

#include "tgl/error.hpp"
#include "tgl/report.hpp"

namespace tgl {

namespace {

// Index of mu.lambda given the index of lambda (r(lambda) = s(mu)).
std::optional<std::size_t> extend(const PathBasis& basis, const Path& mu, std::size_t lambda) {
  std::size_t idx = lambda;
  for (auto it = mu.edges.rbegin(); it != mu.edges.rend(); ++it) {
    const auto next = basis.prepend(*it, idx);
    if (!next) return std::nullopt;
    idx = *next;
  }
  return idx;
}

void add_monomial(std::vector<TruncatedOperator::Triplet>& out, const PathBasis& basis, const Monomial& m,
                  const Rational& c) {
  const std::size_t longest = std::max(m.mu.length(), m.nu.length());
  if (longest > basis.truncation()) return;
  const std::size_t room = basis.truncation() - longest;
  for (auto lambda : basis.with_range(m.mu.source)) {
    if (basis.length(lambda) > room) continue;
    const auto row = extend(basis, m.mu, lambda);
    const auto col = extend(basis, m.nu, lambda);
    out.push_back({static_cast<std::uint32_t>(*row), static_cast<std::uint32_t>(*col), c});
  }
}

std::string dump(const TruncatedOperator& op) { return operator_to_json(op).dump(); }

}  // namespace

TruncatedOperator monomial_operator(const BasisPtr& basis, const Monomial& m) {
  if (m.mu.source != m.nu.source) throw Error(ErrorCode::mismatched_sources, "monomial needs s(mu) = s(nu)");
  std::vector<TruncatedOperator::Triplet> entries;
  add_monomial(entries, *basis, m, Rational(1));
  auto op = TruncatedOperator::from_triplets(basis, std::move(entries));
  op.set_gauge_degree(m.gauge_degree());
  op.set_kappa_weight(kappa_weight(basis->graph(), m));
  return op;
}

TruncatedOperator polynomial_operator(const BasisPtr& basis, const Polynomial& p) {
  std::vector<TruncatedOperator::Triplet> entries;
  for (const auto& [m, c] : p.terms()) add_monomial(entries, *basis, m, c);
  auto op = TruncatedOperator::from_triplets(basis, std::move(entries));
  op.set_gauge_degree(p.is_zero() ? std::optional<int>(0) : p.gauge_degree());
  op.set_kappa_weight(p.is_zero() ? std::optional<std::vector<int>>(std::vector<int>(basis->graph().vertex_count(), 0))
                                  : p.kappa_weight(basis->graph()));
  return op;
}

TruncatedOperator gen_T(const BasisPtr& basis, Edge e) {
  if (e >= basis->graph().edge_count()) throw Error(ErrorCode::unknown_id, "unknown edge index " + std::to_string(e));
  return monomial_operator(basis, edge_monomial(basis->graph(), e));
}

TruncatedOperator gen_Q(const BasisPtr& basis, Vertex v) {
  if (v >= basis->graph().vertex_count()) throw Error(ErrorCode::unknown_id, "unknown vertex index " + std::to_string(v));
  return monomial_operator(basis, vertex_monomial(v));
}

Polynomial delta_polynomial(const Graph& g, const Path& mu) { return theta_polynomial(g, mu, mu); }

Polynomial theta_polynomial(const Graph& g, const Path& mu, const Path& nu) {
  auto m = make_monomial(mu, nu);
  Polynomial p(m);
  for (auto e : g.edges_into(mu.source)) {
    const Path ep = edge_path(g, e);
    p -= Polynomial(Monomial{*concat(mu, ep), *concat(nu, ep)});
  }
  return p;
}

TruncatedOperator delta(const BasisPtr& basis, const Path& mu) {
  if (mu.length() > basis->truncation()) {
    throw Error(ErrorCode::path_too_long, "Delta_mu needs |mu| <= L");
  }
  auto op = polynomial_operator(basis, delta_polynomial(basis->graph(), mu));
  op.set_finite(true);
  return op;
}

TruncatedOperator theta(const BasisPtr& basis, const Path& mu, const Path& nu) {
  if (mu.source != nu.source) throw Error(ErrorCode::mismatched_sources, "Theta_{mu,nu} needs s(mu) = s(nu)");
  if (std::max(mu.length(), nu.length()) > basis->truncation()) {
    throw Error(ErrorCode::path_too_long, "Theta_{mu,nu} needs |mu|, |nu| <= L");
  }
  auto op = polynomial_operator(basis, theta_polynomial(basis->graph(), mu, nu));
  op.set_finite(true);
  return op;
}

TruncatedOperator rank_one_projection(const BasisPtr& basis, const SparseVector& xi) {
  Rational norm2 = 0;
  for (const auto& [i, v] : xi) norm2 += v * v;
  if (norm2 == 0) throw Error(ErrorCode::invalid_argument, "rank-one projection needs a nonzero vector");
  std::vector<TruncatedOperator::Triplet> entries;
  for (const auto& [i, vi] : xi) {
    for (const auto& [j, vj] : xi) {
      entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), vi * vj / norm2});
    }
  }
  auto op = TruncatedOperator::from_triplets(basis, std::move(entries));
  op.set_finite(true);
  std::optional<int> degree;
  bool homogeneous = true;
  for (const auto& [i, v] : xi) {
    const int len = static_cast<int>(basis->length(i));
    if (degree && *degree != len) homogeneous = false;
    degree = len;
  }
  op.set_gauge_degree(homogeneous ? std::optional<int>(0) : std::nullopt);
  return op;
}

std::size_t exact_rank(std::span<const TruncatedOperator> ops) {
  EchelonSpan span;
  for (const auto& op : ops) span.insert(op.flatten());
  return span.rank();
}

bool TckReport::all_defects_nonzero() const {
  for (bool b : defect_nonzero) {
    if (!b) return false;
  }
  return true;
}

TckReport verify_tck(const std::vector<TruncatedOperator>& q, const std::vector<TruncatedOperator>& t,
                     const Graph& g) {
  if (q.size() != g.vertex_count() || t.size() != g.edge_count()) {
    throw Error(ErrorCode::dimension_mismatch, "family size does not match the graph");
  }
  if (q.empty()) throw Error(ErrorCode::dimension_mismatch, "graph has no vertices");
  const auto basis = q.front().basis();
  if (basis->truncation() < 1) throw Error(ErrorCode::truncation_too_small, "relation checks need L >= 1");
  const std::size_t valid = basis->truncation() - 1;
  auto compress = [valid](const TruncatedOperator& op) { return op.compressed(valid); };

  TckReport report;
  for (std::size_t v = 0; v < q.size(); ++v) {
    const auto qv = compress(q[v]);
    const auto sq = compress(q[v] * q[v]);
    if (!(sq == qv)) {
      report.projections = false;
      report.failures.push_back("Q_" + g.vertex_name(static_cast<Vertex>(v)) +
                                " is not idempotent; residual " + dump(sq - qv));
    }
    if (!(compress(q[v].adjoint()) == qv)) {
      report.projections = false;
      report.failures.push_back("Q_" + g.vertex_name(static_cast<Vertex>(v)) + " is not self-adjoint");
    }
    for (std::size_t w = v + 1; w < q.size(); ++w) {
      const auto prod = compress(q[v] * q[w]);
      if (!prod.is_zero()) {
        report.projections = false;
        report.failures.push_back("Q_" + g.vertex_name(static_cast<Vertex>(v)) + " Q_" +
                                  g.vertex_name(static_cast<Vertex>(w)) + " != 0; residual " + dump(prod));
      }
    }
  }
  for (Edge e = 0; e < t.size(); ++e) {
    const auto lhs = compress(t[e].adjoint() * t[e]);
    const auto rhs = compress(q[g.src(e)]);
    if (!(lhs == rhs)) {
      report.isometries = false;
      report.failures.push_back("T*_" + g.edge_name(e) + " T_" + g.edge_name(e) + " != Q_" +
                                g.vertex_name(g.src(e)) + "; residual " + dump(lhs - rhs));
    }
  }
  for (Vertex v = 0; v < q.size(); ++v) {
    auto defect = q[v];
    for (auto e : g.edges_into(v)) defect -= t[e] * t[e].adjoint();
    const auto d = compress(defect);
    report.defect_nonzero.push_back(!d.is_zero());
    std::vector<std::map<std::uint32_t, Rational>> rows(basis->count_up_to(valid));
    for (std::size_t j = 0; j < rows.size(); ++j) {
      for (const auto& [i, value] : d.column(j)) rows[i][static_cast<std::uint32_t>(j)] = value;
    }
    bool symmetric = (d.adjoint() == d);
    if (!symmetric || !is_positive_semidefinite(std::move(rows))) {
      report.positivity = false;
      report.failures.push_back("Q_" + g.vertex_name(v) + " - sum T_e T*_e is not positive semidefinite; matrix " +
                                dump(d));
    }
  }
  return report;
}

CanonicalFamily canonical_family(const BasisPtr& basis) {
  CanonicalFamily f;
  for (Vertex v = 0; v < basis->graph().vertex_count(); ++v) f.q.push_back(gen_Q(basis, v));
  for (Edge e = 0; e < basis->graph().edge_count(); ++e) f.t.push_back(gen_T(basis, e));
  return f;
}

}  // namespace tgl
