#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tgl/exact_linalg.hpp"
#include "tgl/path.hpp"

namespace tgl {

/// t_mu t*_nu with s(mu) = s(nu).
struct Monomial {
  Path mu;
  Path nu;

  int gauge_degree() const { return static_cast<int>(mu.length()) - static_cast<int>(nu.length()); }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Throws Error(mismatched_sources) unless s(mu) = s(nu).
Monomial make_monomial(Path mu, Path nu);
/// q_v = t_v t*_v.
Monomial vertex_monomial(Vertex v);
/// t_e = t_e t*_{s(e)}.
Monomial edge_monomial(const Graph& g, Edge e);
Monomial adjoint(const Monomial& m);

/// (t_mu t*_nu)(t_kappa t*_lambda): t*_nu t_kappa is t_kappa' when
/// kappa = nu kappa', t*_nu' when nu = kappa nu', and zero otherwise.
std::optional<Monomial> monomial_mult(const Monomial& a, const Monomial& b);

/// weight[u] = #{edges of mu with source u} - #{edges of nu with source u}.
std::vector<int> kappa_weight(const Graph& g, const Monomial& m);

std::string monomial_label(const Graph& g, const Monomial& m);

/// Finite rational combination of monomials, kept in canonical order with
/// no zero coefficients.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational>;

  Polynomial() = default;
  explicit Polynomial(Monomial m, Rational coefficient = 1);

  static Polynomial vertex(Vertex v) { return Polynomial(vertex_monomial(v)); }
  static Polynomial edge(const Graph& g, Edge e) { return Polynomial(edge_monomial(g, e)); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Polynomial adjoint() const;
  /// Common gauge degree of all terms, if homogeneous (zero has none).
  std::optional<int> gauge_degree() const;
  /// Common kappa weight of all terms, if there is one.
  std::optional<std::vector<int>> kappa_weight(const Graph& g) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& factor);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& f) { return a *= f; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void accumulate(const Monomial& m, const Rational& c);

  Terms terms_;
};

std::string polynomial_label(const Graph& g, const Polynomial& p);

/// Stable numbering of monomials, for linear algebra over monomial coordinates.
class MonomialRegistry {
 public:
  std::uint64_t id(const Monomial& m);
  SparseVector coordinates(const Polynomial& p);
  std::size_t size() const { return ids_.size(); }

 private:
  std::map<Monomial, std::uint64_t> ids_;
};

}  // namespace tgl
