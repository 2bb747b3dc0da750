#include "tgl/monomial.hpp"

#include "tgl/error.hpp"
#include "tgl/operator.hpp"

namespace tgl {

Monomial make_monomial(Path mu, Path nu) {
  if (mu.source != nu.source) {
    throw Error(ErrorCode::mismatched_sources, "monomial needs s(mu) = s(nu)");
  }
  return Monomial{std::move(mu), std::move(nu)};
}

Monomial vertex_monomial(Vertex v) { return Monomial{vertex_path(v), vertex_path(v)}; }

Monomial edge_monomial(const Graph& g, Edge e) { return Monomial{edge_path(g, e), vertex_path(g.src(e))}; }

Monomial adjoint(const Monomial& m) { return Monomial{m.nu, m.mu}; }

std::optional<Monomial> monomial_mult(const Monomial& a, const Monomial& b) {
  if (auto rest = strip_prefix(a.nu, b.mu)) {
    // kappa = nu kappa': product is t_{mu kappa'} t*_lambda.
    auto mu = concat(a.mu, *rest);
    return Monomial{std::move(*mu), b.nu};
  }
  if (auto rest = strip_prefix(b.mu, a.nu)) {
    // nu = kappa nu': product is t_mu t*_{lambda nu'}.
    auto nu = concat(b.nu, *rest);
    return Monomial{a.mu, std::move(*nu)};
  }
  return std::nullopt;
}

std::vector<int> kappa_weight(const Graph& g, const Monomial& m) {
  auto w = source_counts(g, m.mu);
  const auto n = source_counts(g, m.nu);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= n[i];
  return w;
}

std::string monomial_label(const Graph& g, const Monomial& m) {
  return "(" + path_label(g, m.mu) + ", " + path_label(g, m.nu) + ")";
}

Polynomial::Polynomial(Monomial m, Rational coefficient) {
  if (coefficient != 0) terms_.emplace(std::move(m), std::move(coefficient));
}

void Polynomial::accumulate(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::adjoint() const {
  Polynomial out;
  for (const auto& [m, c] : terms_) out.accumulate(tgl::adjoint(m), c);
  return out;
}

std::optional<int> Polynomial::gauge_degree() const {
  std::optional<int> degree;
  for (const auto& [m, c] : terms_) {
    if (degree && *degree != m.gauge_degree()) return std::nullopt;
    degree = m.gauge_degree();
  }
  return degree;
}

std::optional<std::vector<int>> Polynomial::kappa_weight(const Graph& g) const {
  std::optional<std::vector<int>> weight;
  for (const auto& [m, c] : terms_) {
    auto w = tgl::kappa_weight(g, m);
    if (weight && *weight != w) return std::nullopt;
    weight = std::move(w);
  }
  return weight;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) accumulate(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) accumulate(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& factor) {
  if (factor == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= factor;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      if (auto m = monomial_mult(ma, mb)) out.accumulate(*m, ca * cb);
    }
  }
  return out;
}

std::string polynomial_label(const Graph& g, const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    if (!first) out += " + ";
    first = false;
    if (c != 1) out += to_string(c) + "*";
    out += monomial_label(g, m);
  }
  return out;
}

std::uint64_t MonomialRegistry::id(const Monomial& m) {
  auto [it, inserted] = ids_.try_emplace(m, ids_.size());
  return it->second;
}

SparseVector MonomialRegistry::coordinates(const Polynomial& p) {
  SparseVector v;
  for (const auto& [m, c] : p.terms()) v.emplace_back(id(m), c);
  normalize(v);
  return v;
}

}  // namespace tgl
