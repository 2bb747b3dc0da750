#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tgl/graph.hpp"
#include "tgl/monomial.hpp"
#include "tgl/operator.hpp"
#include "tgl/report.hpp"

namespace tgl {

/// Images of the generators of T C*(source) as polynomials in the
/// generators of T C*(target).
struct GeneratorMap {
  Graph source;
  Graph target;
  /// Indexed by source vertex / source edge.
  std::vector<Polynomial> vertex_images;
  std::vector<Polynomial> edge_images;

  /// Image of t_mu t*_nu for a monomial of the source graph.
  Polynomial image(const Monomial& m) const;
  std::vector<TruncatedOperator> q(const BasisPtr& target_basis) const;
  std::vector<TruncatedOperator> t(const BasisPtr& target_basis) const;
};

struct Counterexample {
  Graph e;
  Graph f;
  GeneratorMap map;
  /// vertex_bijection[v] = vertex of f matched with vertex v of e.
  std::vector<Vertex> vertex_bijection;
};

Graph example_2_1_E();
Graph example_2_1_F();
Graph example_3_7_E();
Graph example_3_7_F();

Counterexample build_example_2_1();
Counterexample build_example_3_7();

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::string example;
  std::size_t truncation = 0;
  std::vector<Check> checks;

  bool passed() const;
  const Check& check(const std::string& name) const;
  Json to_json() const;
};

/// TCK relations, nonzero defects, gauge homogeneity, diagonality of the
/// images of t_mu t*_mu, and non-isomorphism. Needs L >= 4.
VerificationReport verify_example_2_1(std::size_t truncation);
/// TCK relations, kappa-equivariance, the rank test showing
/// q_v - t_e t*_e is outside span{q_u, q_v, q_w}, and non-isomorphism.
/// Needs L >= 2.
VerificationReport verify_example_3_7(std::size_t truncation);

/// Images of diagonal monomials t_mu t*_mu, |mu| <= max_length, as operators.
std::vector<TruncatedOperator> diagonal_presentation(const GeneratorMap& map, const BasisPtr& target_basis,
                                                     std::size_t max_length);

/// Default limit on the span dimension; the TGL_SPAN_CAP environment
/// variable overrides it.
constexpr std::size_t kDefaultSpanCap = 50000;
std::size_t span_cap();

struct GenerationReport {
  /// Per target: smallest word length at which it entered the span, or 0.
  std::vector<std::size_t> word_length;
  std::size_t span_dim = 0;
  /// Every contained target was re-verified as a matrix identity on paths
  /// of length <= L - 1.
  bool matrix_certified = true;

  bool contained(std::size_t i) const { return word_length[i] != 0; }
  bool all_contained() const;
};

/// Closes the span of the images and their adjoints under multiplication
/// up to word length degree_cap and tests each target for membership.
/// Membership is decided in monomial coordinates of the target graph and
/// re-checked on target_basis. Throws Error(span_cap) when the span grows
/// beyond span_cap().
GenerationReport generated_subalgebra_contains(const GeneratorMap& map, std::span<const Polynomial> targets,
                                               std::size_t degree_cap, const BasisPtr& target_basis);

/// q_v and t_e for every vertex and edge of g.
std::vector<Polynomial> canonical_generators(const Graph& g);

}  // namespace tgl
