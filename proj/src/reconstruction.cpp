#include "tgl/reconstruction.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "tgl/error.hpp"
#include "tgl/pathspace.hpp"

namespace tgl {

namespace {

std::size_t validity_length(const PathBasis& basis) {
  if (basis.truncation() < 1) throw Error(ErrorCode::truncation_too_small, "need L >= 1");
  return basis.truncation() - 1;
}

Path prefix_of(const Graph& g, const Path& p, std::size_t k) {
  if (k == 0) return vertex_path(p.range);
  Path out;
  out.range = p.range;
  out.edges.assign(p.edges.begin(), p.edges.begin() + static_cast<std::ptrdiff_t>(k));
  out.source = g.src(out.edges.back());
  return out;
}

std::set<std::uint32_t> row_support(const TruncatedOperator& p) {
  std::set<std::uint32_t> rows;
  for (const auto& [j, c] : p.columns()) {
    for (const auto& [i, v] : c) rows.insert(i);
  }
  return rows;
}

CornerSpan corner_from_monomials(const BasisPtr& basis, const std::set<Monomial>& monomials,
                                 const TruncatedOperator& p) {
  CornerSpan out;
  for (const auto& m : monomials) {
    auto b = monomial_operator(basis, m) * p;
    if (b.is_zero()) continue;
    out.monomials.push_back(m);
    out.spanning.push_back(std::move(b));
  }
  out.dim = exact_rank(out.spanning);
  return out;
}

void check_degree(const PathBasis& basis, int n) {
  if (n > static_cast<int>(validity_length(basis))) {
    throw Error(ErrorCode::truncation_too_small, "truncation too small: degree " + std::to_string(n) +
                                                     " needs L >= " + std::to_string(n + 1) + ", have L = " +
                                                     std::to_string(basis.truncation()));
  }
}

std::string state_id(const Graph& g, Vertex v) { return "phi_" + g.vertex_name(v); }

std::vector<TruncatedOperator> find_all_pphi(const BasisPtr& basis, const std::vector<KmsState>& states,
                                             const ReconstructionParams& params) {
  const auto candidates = all_candidates(basis, params.samples, params.seed);
  std::vector<TruncatedOperator> out;
  for (const auto& s : states) out.push_back(candidates[find_pphi(s, candidates).index]);
  return out;
}

void attach_reference(ReconstructionResult& r, const Graph* reference) {
  if (!reference) return;
  r.reference_iso = graph_isomorphic(r.reconstructed.graph(), *reference);
  for (auto v : r.reference_iso->bijection) r.reference_match.push_back(reference->vertex_name(v));
}

}  // namespace

MSubalgebraPresentation::MSubalgebraPresentation(std::vector<TruncatedOperator> projections)
    : projections_(std::move(projections)) {
  if (projections_.empty()) throw Error(ErrorCode::invalid_argument, "M needs at least one projection");
  const auto& basis = projections_.front().basis();
  const std::size_t valid = validity_length(*basis);
  std::vector<TruncatedOperator> c;
  for (const auto& p : projections_) {
    if (p.basis()->size() != basis->size()) {
      throw Error(ErrorCode::dimension_mismatch, "M projections live on different bases");
    }
    c.push_back(p.compressed(valid));
  }
  auto total = TruncatedOperator(basis);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].is_zero()) throw Error(ErrorCode::invalid_argument, "M contains a zero projection");
    if (!(c[i].adjoint() == c[i]) || !(c[i] * c[i] == c[i])) {
      throw Error(ErrorCode::invalid_argument, "M element " + std::to_string(i) + " is not a projection");
    }
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      if (!(c[i] * c[j]).is_zero()) {
        throw Error(ErrorCode::invalid_argument,
                    "M elements " + std::to_string(i) + " and " + std::to_string(j) + " are not orthogonal");
      }
    }
    total += c[i];
  }
  if (!(total == TruncatedOperator::identity(basis).compressed(valid))) {
    throw Error(ErrorCode::invalid_argument, "M projections do not sum to the identity");
  }
}

MSubalgebraPresentation canonical_m(const BasisPtr& basis) {
  std::vector<TruncatedOperator> q;
  for (Vertex v = 0; v < basis->graph().vertex_count(); ++v) q.push_back(gen_Q(basis, v));
  return MSubalgebraPresentation(std::move(q));
}

std::vector<TruncatedOperator> candidate_minimal_projections(const BasisPtr& basis, Vertex v, std::size_t samples,
                                                             std::uint64_t seed) {
  const auto& g = basis->graph();
  if (v >= g.vertex_count()) throw Error(ErrorCode::unknown_id, "unknown vertex index " + std::to_string(v));
  const std::size_t valid = validity_length(*basis);
  std::vector<TruncatedOperator> out;
  const auto& pool = basis->with_source(v);
  for (auto idx : pool) {
    if (basis->length(idx) <= valid) out.push_back(delta(basis, basis->path(idx)));
  }
  if (pool.size() < 2) return out;
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t k = std::min<std::size_t>(2 + rng() % 3, pool.size());
    std::vector<std::size_t> chosen;
    if (rng() % 2 == 0) chosen.push_back(pool.front());
    while (chosen.size() < k) {
      const auto idx = pool[rng() % pool.size()];
      if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end()) chosen.push_back(idx);
    }
    std::sort(chosen.begin(), chosen.end());
    SparseVector xi;
    for (auto idx : chosen) {
      long num = static_cast<long>(rng() % 19) - 9;
      if (num == 0) num = 1;
      const long den = 1 + static_cast<long>(rng() % 4);
      Rational value(num, den);
      value.canonicalize();
      xi.emplace_back(idx, value);
    }
    out.push_back(rank_one_projection(basis, xi));
  }
  return out;
}

std::vector<TruncatedOperator> all_candidates(const BasisPtr& basis, std::size_t samples, std::uint64_t seed) {
  std::vector<TruncatedOperator> out;
  for (Vertex v = 0; v < basis->graph().vertex_count(); ++v) {
    auto part = candidate_minimal_projections(basis, v, samples, seed + v);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

ArgmaxResult find_pphi(const KmsState& s, std::span<const TruncatedOperator> candidates) {
  if (candidates.empty()) throw Error(ErrorCode::invalid_argument, "no candidate projections");
  const auto& basis = candidates.front().basis();
  check_state_basis(s, *basis);
  std::vector<Rational> values;
  values.reserve(candidates.size());
  for (const auto& c : candidates) {
    auto v = state_eval_unchecked(s, c);
    if (v.tail_bound != 0) throw Error(ErrorCode::invalid_argument, "candidate evaluation is not exact");
    values.push_back(std::move(v.value));
  }
  const auto best = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
  ArgmaxResult r;
  r.index = best;
  r.value = values[best];
  bool have_runner = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == best) continue;
    if (values[i] == r.value) {
      throw Error(ErrorCode::tie, "state " + basis->graph().vertex_name(s.vertex) + ": candidates " +
                                      std::to_string(best) + " and " + std::to_string(i) + " tie at " +
                                      to_string(r.value));
    }
    if (!have_runner || values[i] > r.runner_up) {
      r.runner_up = values[i];
      have_runner = true;
    }
  }
  const auto expected = TruncatedOperator::matrix_unit(basis, basis->vertex_index(s.vertex), basis->vertex_index(s.vertex));
  if (!(candidates[best] == expected) || r.value != 1 / s.partition) {
    throw Error(ErrorCode::postcondition, "maximiser for state " + basis->graph().vertex_name(s.vertex) +
                                              " is not Delta_v with value 1/Z");
  }
  return r;
}

CornerSpan corner_basis(const BasisPtr& basis, int n, const TruncatedOperator& p) {
  check_degree(*basis, n);
  const auto& g = basis->graph();
  const auto L = static_cast<int>(basis->truncation());
  std::set<Monomial> monomials;
  for (auto c : row_support(p)) {
    const Path& pc = basis->path(c);
    for (std::size_t k = 0; k <= pc.length(); ++k) {
      const int target = static_cast<int>(k) + n;
      if (target < 0 || target > L) continue;
      Path nu = prefix_of(g, pc, k);
      for (auto idx : basis->with_source(nu.source)) {
        if (static_cast<int>(basis->length(idx)) == target) monomials.insert(Monomial{basis->path(idx), nu});
      }
    }
  }
  return corner_from_monomials(basis, monomials, p);
}

CornerSpan corner_basis_exhaustive(const BasisPtr& basis, int n, const TruncatedOperator& p) {
  check_degree(*basis, n);
  const auto& g = basis->graph();
  std::set<Monomial> monomials;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    for (auto i : basis->with_source(v)) {
      for (auto j : basis->with_source(v)) {
        if (static_cast<int>(basis->length(i)) - static_cast<int>(basis->length(j)) == n) {
          monomials.insert(Monomial{basis->path(i), basis->path(j)});
        }
      }
    }
  }
  return corner_from_monomials(basis, monomials, p);
}

std::size_t dominating_projection_in_M(const TruncatedOperator& p, const MSubalgebraPresentation& m) {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.projections()[i] * p == p) {
      if (found) {
        throw Error(ErrorCode::domination, "projections " + std::to_string(*found) + " and " + std::to_string(i) +
                                               " of M both dominate p; M is not orthogonal");
      }
      found = i;
    }
  }
  if (!found) throw Error(ErrorCode::domination, "no projection of M dominates p");
  return *found;
}

Graph ReconstructedGraph::graph() const {
  std::vector<EdgeSpec> edges;
  for (std::size_t phi = 0; phi < multiplicity.size(); ++phi) {
    for (std::size_t psi = 0; psi < multiplicity[phi].size(); ++psi) {
      for (std::size_t k = 0; k < multiplicity[phi][psi]; ++k) {
        edges.push_back({state_ids[psi] + "->" + state_ids[phi] + "#" + std::to_string(k), state_ids[psi],
                         state_ids[phi]});
      }
    }
  }
  return Graph(state_ids, std::move(edges));
}

BasisPtr reconstruction_basis(const Graph& g, std::size_t truncation) {
  if (truncation < 3) throw Error(ErrorCode::truncation_too_small, "reconstruction needs L >= 3");
  return make_basis(g, truncation);
}

ReconstructionResult reconstruct_with_M(const BasisPtr& ambient, const MSubalgebraPresentation& m,
                                        const ReconstructionParams& params, const Graph* reference) {
  if (ambient->truncation() < 3) throw Error(ErrorCode::truncation_too_small, "reconstruction needs L >= 3");
  const auto& g = ambient->graph();
  ReconstructionResult r;
  r.params = params;
  r.params.truncation = ambient->truncation();
  r.states = extremal_states(g, params.x);
  const auto pphi = find_all_pphi(ambient, r.states, params);
  std::vector<std::size_t> dominating;
  for (const auto& p : pphi) dominating.push_back(dominating_projection_in_M(p, m));
  const std::size_t n = r.states.size();
  auto& out = r.reconstructed;
  for (const auto& s : r.states) out.state_ids.push_back(state_id(g, s.vertex));
  out.multiplicity.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t psi = 0; psi < n; ++psi) {
    const auto corner = corner_basis(ambient, 1, pphi[psi]);
    r.degree_one_dims.push_back(corner.dim);
    for (std::size_t phi = 0; phi < n; ++phi) {
      const auto& P = m.projections()[dominating[phi]];
      std::vector<TruncatedOperator> images;
      for (const auto& b : corner.spanning) images.push_back(P * b);
      out.multiplicity[phi][psi] = exact_rank(images);
    }
  }
  out.notes.push_back("N(phi,psi) = exact rank of P_phi T_1 p_psi at L = " + std::to_string(ambient->truncation()));
  out.notes.push_back("p_phi certified against " + std::to_string(params.samples) +
                      " random rank-one candidates per summand");
  attach_reference(r, reference);
  return r;
}

Vertex identify_vertex_by_kappa(const BasisPtr& basis, const TruncatedOperator& p) {
  const auto corner = corner_basis(basis, 1, p);
  if (corner.dim == 0) throw Error(ErrorCode::sinks_present, "κ-identification requires no sinks");
  std::optional<Vertex> found;
  for (const auto& b : corner.spanning) {
    const auto w = b.entry_kappa_weight();
    std::optional<Vertex> u;
    if (w) {
      for (Vertex i = 0; i < w->size(); ++i) {
        if ((*w)[i] == 0) continue;
        if ((*w)[i] != 1 || u) {
          u.reset();
          break;
        }
        u = i;
      }
    }
    if (!u || (found && *found != *u)) {
      throw Error(ErrorCode::postcondition, "degree-one corner does not carry a single vertex character");
    }
    found = u;
  }
  return *found;
}

std::size_t twisted_fixed_dim(const BasisPtr& basis, const TwistSpec& t, const TruncatedOperator& p_psi) {
  if (basis->truncation() < 3) throw Error(ErrorCode::truncation_too_small, "twisted corner needs L >= 3");
  const auto& g = basis->graph();
  if (t.phi_vertex >= g.vertex_count() || t.psi_vertex >= g.vertex_count()) {
    throw Error(ErrorCode::unknown_id, "twist refers to an unknown vertex");
  }
  const auto corner = corner_basis(basis, 2, p_psi);
  std::vector<TruncatedOperator> fixed;
  for (const auto& b : corner.spanning) {
    const auto w = b.entry_kappa_weight();
    if (!w) throw Error(ErrorCode::postcondition, "corner element is not kappa-homogeneous");
    if (t.fixes(*w)) fixed.push_back(b);
  }
  return exact_rank(fixed);
}

ReconstructionResult reconstruct_with_kappa(const BasisPtr& ambient, const ReconstructionParams& params,
                                            const Graph* reference) {
  const auto& g = ambient->graph();
  if (g.has_sinks()) {
    std::string names;
    for (auto v : g.sinks()) names += (names.empty() ? "" : ", ") + g.vertex_name(v);
    throw Error(ErrorCode::sinks_present, "κ-identification requires no sinks; sinks: " + names);
  }
  if (ambient->truncation() < 3) throw Error(ErrorCode::truncation_too_small, "reconstruction needs L >= 3");
  ReconstructionResult r;
  r.params = params;
  r.params.truncation = ambient->truncation();
  r.states = extremal_states(g, params.x);
  const auto pphi = find_all_pphi(ambient, r.states, params);
  const std::size_t n = r.states.size();
  for (const auto& p : pphi) {
    r.kappa_vertices.push_back(identify_vertex_by_kappa(ambient, p));
    r.degree_one_dims.push_back(corner_basis(ambient, 1, p).dim);
  }
  auto& out = r.reconstructed;
  for (const auto& s : r.states) out.state_ids.push_back(state_id(g, s.vertex));
  out.multiplicity.assign(n, std::vector<std::size_t>(n, 0));
  r.numerators.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t psi = 0; psi < n; ++psi) {
    std::size_t off_diagonal = 0;
    for (std::size_t phi = 0; phi < n; ++phi) {
      if (phi == psi) continue;
      const auto num = twisted_fixed_dim(ambient, TwistSpec{r.kappa_vertices[phi], r.kappa_vertices[psi]}, pphi[psi]);
      r.numerators[phi][psi] = num;
      if (num % r.degree_one_dims[phi] != 0) {
        throw Error(ErrorCode::non_integer_quotient, "fixed-point dimension " + std::to_string(num) +
                                                         " is not a multiple of " +
                                                         std::to_string(r.degree_one_dims[phi]));
      }
      out.multiplicity[phi][psi] = num / r.degree_one_dims[phi];
      off_diagonal += out.multiplicity[phi][psi];
    }
    if (off_diagonal > r.degree_one_dims[psi]) {
      throw Error(ErrorCode::non_integer_quotient, "off-diagonal multiplicities exceed dim T_1 p_psi");
    }
    out.multiplicity[psi][psi] = r.degree_one_dims[psi] - off_diagonal;
  }
  out.notes.push_back("off-diagonal N = dim(fixed part of T_2 p_psi) / dim T_1 p_phi; diagonal by subtraction");
  out.notes.push_back("computed at L = " + std::to_string(ambient->truncation()));
  attach_reference(r, reference);
  return r;
}

Json reconstruction_to_json(const ReconstructionResult& r, const Graph& ambient) {
  Json out;
  out["states"] = Json::array();
  for (std::size_t i = 0; i < r.states.size(); ++i) {
    out["states"].push_back({{"id", r.reconstructed.state_ids[i]},
                             {"vertex", ambient.vertex_name(r.states[i].vertex)},
                             {"partition", to_string(r.states[i].partition)}});
  }
  out["N"] = r.reconstructed.multiplicity;
  Json iso;
  iso["found"] = r.reference_iso && r.reference_iso->found();
  iso["bijection"] = Json::object();
  if (r.reference_iso && r.reference_iso->found()) {
    for (std::size_t i = 0; i < r.reference_match.size(); ++i) {
      iso["bijection"][r.reconstructed.state_ids[i]] = r.reference_match[i];
    }
  }
  out["reference_iso"] = std::move(iso);
  out["params"] = {{"x", to_string(r.params.x)}, {"L", r.params.truncation}, {"seed", r.params.seed}};
  out["notes"] = r.reconstructed.notes;
  return out;
}

}  // namespace tgl
