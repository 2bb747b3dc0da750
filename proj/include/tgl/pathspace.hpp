#pragma once

#include <span>
#include <string>
#include <vector>

#include "tgl/monomial.hpp"
#include "tgl/operator.hpp"

namespace tgl {

/// pi(t_e): delta_mu -> delta_{e mu} when s(e) = r(mu); e mu is dropped when
/// it is longer than the truncation.
TruncatedOperator gen_T(const BasisPtr& basis, Edge e);
/// pi(q_v): projection onto {delta_mu : r(mu) = v}.
TruncatedOperator gen_Q(const BasisPtr& basis, Vertex v);

/// Entries (mu lambda, nu lambda) = 1 for lambda in s(nu)E* with both paths
/// inside the window.
TruncatedOperator monomial_operator(const BasisPtr& basis, const Monomial& m);
TruncatedOperator polynomial_operator(const BasisPtr& basis, const Polynomial& p);

/// t_mu (q_{s(mu)} - sum_{r(e) = s(mu)} t_e t*_e) t*_mu.
Polynomial delta_polynomial(const Graph& g, const Path& mu);
/// t_mu Delta_{s(mu)} t*_nu.
Polynomial theta_polynomial(const Graph& g, const Path& mu, const Path& nu);

/// pi(Delta_mu), evaluated from its defining formula; throws
/// Error(path_too_long) when |mu| > L.
TruncatedOperator delta(const BasisPtr& basis, const Path& mu);
/// pi(Theta_{mu,nu}); throws Error(mismatched_sources) unless s(mu) = s(nu).
TruncatedOperator theta(const BasisPtr& basis, const Path& mu, const Path& nu);

/// theta_{xi,xi} / (xi | xi) for a nonzero vector xi given by (index, value).
TruncatedOperator rank_one_projection(const BasisPtr& basis, const SparseVector& xi);

/// Dimension of the rational span of the operators.
std::size_t exact_rank(std::span<const TruncatedOperator> ops);

/// Relation checks on the subspace spanned by paths of length <= L - 1.
struct TckReport {
  bool projections = true;
  bool isometries = true;
  bool positivity = true;
  /// Per vertex: Q_v - sum_{r(e) = v} T_e T*_e is nonzero.
  std::vector<bool> defect_nonzero;
  /// Human-readable description of each failure, with residual dumps.
  std::vector<std::string> failures;

  bool passed() const { return projections && isometries && positivity; }
  bool all_defects_nonzero() const;
};

/// Checks that (Q, T), indexed by the vertices and edges of g, satisfy the
/// Toeplitz-Cuntz-Krieger g-relations on the validity subspace.
TckReport verify_tck(const std::vector<TruncatedOperator>& q, const std::vector<TruncatedOperator>& t,
                     const Graph& g);

struct CanonicalFamily {
  std::vector<TruncatedOperator> q;
  std::vector<TruncatedOperator> t;
};

CanonicalFamily canonical_family(const BasisPtr& basis);

}  // namespace tgl
