#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tgl/graph.hpp"
#include "tgl/monomial.hpp"
#include "tgl/operator.hpp"

namespace tgl {

/// Extremal KMS state parameterised by its vertex v, x = e^{-beta} and the
/// partition value Z(v, x) = sum over mu in E*v of x^{|mu|}.
struct KmsState {
  Vertex vertex = 0;
  Rational x;
  Rational partition;
  /// mass[w] = Z^{-1} sum over mu in wE*v of x^{|mu|}, which is the value on q_w.
  std::vector<Rational> mass;
};

/// Z(v, x) for every v, from 1^T (I - xA)^{-1}. Throws Error(supercritical)
/// unless x rho(A) < 1.
std::vector<Rational> partition_all(const AdjacencyMatrix& a, const Rational& x);
Rational partition(const Graph& g, Vertex v, const Rational& x);

/// sum_{n <= max_length} x^n |E^n v|, via adjacency powers.
Rational partition_partial_sum(const AdjacencyMatrix& a, Vertex v, const Rational& x, unsigned max_length);
/// x^{N+1} (1^T A^{N+1} (I - xA)^{-1})_v with N = max_length.
Rational partition_remainder(const AdjacencyMatrix& a, Vertex v, const Rational& x, unsigned max_length);

/// One state per vertex, in vertex order. Needs 0 < x < 1 and x rho(A) < 1.
std::vector<KmsState> extremal_states(const Graph& g, const Rational& x);

/// x^{|mu|} mass[s(mu)] when mu = nu, else 0. When no cycle passes
/// through s(mu) = v this is x^{|mu|} / Z.
Rational state_on_monomial(const KmsState& s, const Monomial& m);
Rational state_on_polynomial(const KmsState& s, const Polynomial& p);

struct StateValue {
  Rational value;
  /// Bound on the contribution of paths beyond the window; 0 when exact.
  Rational tail_bound;
};

/// Z^{-1} sum over mu in E*v, |mu| <= L of x^{|mu|} (a delta_mu | delta_mu).
/// Throws Error(dimension_mismatch) if the basis graph does not reproduce
/// the state's partition value.
StateValue state_eval(const KmsState& s, const TruncatedOperator& a);
/// Throws Error(dimension_mismatch) unless s belongs to basis.graph().
void check_state_basis(const KmsState& s, const PathBasis& basis);
/// state_eval without the basis check, for repeated evaluation.
StateValue state_eval_unchecked(const KmsState& s, const TruncatedOperator& a);

struct KmsResidual {
  Monomial a;
  Monomial b;
  /// phi(ab) - x^{deg a} phi(ba).
  Rational residual;
};

struct KmsReport {
  std::vector<KmsResidual> residuals;
  std::size_t nonzero = 0;

  bool all_zero() const { return nonzero == 0; }
};

KmsReport verify_kms_condition(const KmsState& s, std::span<const std::pair<Monomial, Monomial>> pairs);

/// All monomials (mu, nu) with |mu| + |nu| <= max_total_length.
std::vector<Monomial> enumerate_monomials(const Graph& g, std::size_t max_total_length);

enum class CountKind { exact, upper_bound };

const char* to_string(CountKind kind);

struct ProfileEntry {
  double beta = 0.0;
  std::size_t count = 0;
  CountKind kind = CountKind::exact;
};

struct StateCountProfile {
  std::vector<ProfileEntry> entries;
  std::size_t vertex_count = 0;
  bool acyclic = false;
};

/// For beta above log rho(A): (|E^0|, exact); otherwise the bound
/// |E^0 \ H_beta|. The regime is decided exactly at x = e^{-beta}.
StateCountProfile count_profile(const Graph& g, std::span<const double> betas);

struct CriticalDetection {
  enum class Outcome { interval, stabilized_everywhere, not_bracketed };

  Outcome outcome = Outcome::not_bracketed;
  double lower = 0.0;
  double upper = 0.0;
  /// Index of the entry at `lower`; `upper` is the next entry.
  std::size_t lower_index = 0;
};

/// Smallest grid interval [b_i, b_{i+1}] with the count constant and maximal
/// on every b >= b_{i+1} and strictly smaller at b_i.
CriticalDetection detect_critical_beta(const StateCountProfile& profile);

/// start, start + step, ... up to stop (inclusive within 1e-9 steps).
std::vector<double> beta_grid(double start, double stop, double step);

/// 1/2 when subcritical, otherwise a small rational below 1/(2 rho)
/// certified by the exact minor test.
Rational default_subcritical_x(const AdjacencyMatrix& a);

}  // namespace tgl
