#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tgl/graph.hpp"
#include "tgl/kms.hpp"
#include "tgl/monomial.hpp"
#include "tgl/operator.hpp"
#include "tgl/report.hpp"

namespace tgl {

/// Unlabelled family of mutually orthogonal projections summing to the
/// identity, checked on paths of length <= L - 1.
class MSubalgebraPresentation {
 public:
  /// Throws Error(invalid_argument) if the family is not such a partition.
  explicit MSubalgebraPresentation(std::vector<TruncatedOperator> projections);

  const std::vector<TruncatedOperator>& projections() const { return projections_; }
  std::size_t size() const { return projections_.size(); }

 private:
  std::vector<TruncatedOperator> projections_;
};

/// {q_v : v in E^0}.
MSubalgebraPresentation canonical_m(const BasisPtr& basis);

/// Delta_mu for mu in E*v with |mu| <= L - 1, followed by `samples`
/// projections onto seeded pseudo-random rational vectors supported on E*v.
/// A summand with a single basis path gets no random samples.
std::vector<TruncatedOperator> candidate_minimal_projections(const BasisPtr& basis, Vertex v, std::size_t samples,
                                                             std::uint64_t seed);
/// Candidates over every summand, in vertex order; summand v uses seed + v.
std::vector<TruncatedOperator> all_candidates(const BasisPtr& basis, std::size_t samples, std::uint64_t seed);

struct ArgmaxResult {
  std::size_t index = 0;
  Rational value;
  /// Largest value among the other candidates.
  Rational runner_up;
};

/// The unique maximiser of the state over the candidates. Throws
/// Error(tie) if the maximum is attained twice and Error(postcondition)
/// unless the winner is Delta_v with value 1/Z.
ArgmaxResult find_pphi(const KmsState& s, std::span<const TruncatedOperator> candidates);

struct CornerSpan {
  std::vector<Monomial> monomials;
  /// monomial_operator(m) * p for each monomial, all nonzero.
  std::vector<TruncatedOperator> spanning;
  std::size_t dim = 0;
};

/// Span of {t_mu t*_nu p : |mu| - |nu| = n}. Only monomials that can act
/// nontrivially on the row support of p are generated. Throws
/// Error(truncation_too_small) when n > L - 1.
CornerSpan corner_basis(const BasisPtr& basis, int n, const TruncatedOperator& p);
/// Same span from every gauge-degree-n monomial inside the window.
CornerSpan corner_basis_exhaustive(const BasisPtr& basis, int n, const TruncatedOperator& p);

/// Index of the unique projection P in m with P p = p. Throws
/// Error(domination) if none or several qualify.
std::size_t dominating_projection_in_M(const TruncatedOperator& p, const MSubalgebraPresentation& m);

struct ReconstructedGraph {
  std::vector<std::string> state_ids;
  /// multiplicity[phi][psi] = number of edges psi -> phi.
  std::vector<std::vector<std::size_t>> multiplicity;
  std::vector<std::string> notes;

  Graph graph() const;
};

struct ReconstructionParams {
  Rational x;
  std::size_t truncation = 4;
  std::uint64_t seed = 42;
  std::size_t samples = 8;
};

struct ReconstructionResult {
  ReconstructedGraph reconstructed;
  std::vector<KmsState> states;
  ReconstructionParams params;
  std::optional<IsoResult> reference_iso;
  /// Reference vertex name matched to each state, when an isomorphism was found.
  std::vector<std::string> reference_match;
  /// Per state: dim T_1 p_phi.
  std::vector<std::size_t> degree_one_dims;
  /// kappa variant: numerator dims, indexed [phi][psi] (diagonal unused).
  std::vector<std::vector<std::size_t>> numerators;
  /// kappa variant: the vertex identified for each state.
  std::vector<Vertex> kappa_vertices;
};

/// Basis used by the reconstruction pipelines; L >= 3 is required.
BasisPtr reconstruction_basis(const Graph& g, std::size_t truncation);

/// N(phi, psi) = dim P_phi T_1 p_psi; compares with reference when given.
ReconstructionResult reconstruct_with_M(const BasisPtr& ambient, const MSubalgebraPresentation& m,
                                        const ReconstructionParams& params, const Graph* reference = nullptr);

/// The vertex u such that every element of T_1 p has kappa weight 1_u.
/// Throws Error(sinks_present) when the corner is empty.
Vertex identify_vertex_by_kappa(const BasisPtr& basis, const TruncatedOperator& p);

/// The twist gamma^{phi,psi}, as the characters of kappa it fixes.
struct TwistSpec {
  Vertex phi_vertex;
  Vertex psi_vertex;

  int functional(const std::vector<int>& w) const { return w[psi_vertex] - w[phi_vertex]; }
  bool fixes(const std::vector<int>& w) const { return functional(w) == 0; }
};

/// Dimension of the gamma^{phi,psi}-fixed part of T_2 p_psi. Throws
/// Error(truncation_too_small) when L < 3.
std::size_t twisted_fixed_dim(const BasisPtr& basis, const TwistSpec& t, const TruncatedOperator& p_psi);

/// Refuses graphs with sinks (Error(sinks_present)).
ReconstructionResult reconstruct_with_kappa(const BasisPtr& ambient, const ReconstructionParams& params,
                                            const Graph* reference = nullptr);

Json reconstruction_to_json(const ReconstructionResult& r, const Graph& ambient);

}  // namespace tgl
