#include "tgl/counterexamples.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "tgl/error.hpp"
#include "tgl/exact_linalg.hpp"
#include "tgl/pathspace.hpp"

namespace tgl {

namespace {

Path named_path(const Graph& g, const std::string& name) {
  if (auto v = g.find_vertex(name)) return vertex_path(*v);
  std::vector<std::string> parts;
  std::stringstream in(name);
  for (std::string part; std::getline(in, part, '.');) parts.push_back(part);
  return path_from_names(g, parts);
}

// t_mu t*_nu with mu, nu written as "e.f" or a vertex name.
Polynomial term(const Graph& g, const std::string& mu, const std::string& nu) {
  return Polynomial(make_monomial(named_path(g, mu), named_path(g, nu)));
}

Polynomial q(const Graph& g, const std::string& v) { return Polynomial::vertex(g.vertex(v)); }
Polynomial t(const Graph& g, const std::string& e) { return Polynomial::edge(g, g.edge(e)); }

GeneratorMap identity_map(const Graph& e, const Graph& f) {
  GeneratorMap map{e, f, {}, {}};
  for (Vertex v = 0; v < e.vertex_count(); ++v) map.vertex_images.push_back(q(f, e.vertex_name(v)));
  for (Edge h = 0; h < e.edge_count(); ++h) map.edge_images.push_back(t(f, e.edge_name(h)));
  return map;
}

std::vector<Vertex> bijection_by_name(const Graph& e, const Graph& f) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < e.vertex_count(); ++v) out.push_back(f.vertex(e.vertex_name(v)));
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : "; ") + s;
  return out;
}

Check tck_check(const GeneratorMap& map, const BasisPtr& basis, bool with_defects, std::vector<Check>& checks) {
  const auto report = verify_tck(map.q(basis), map.t(basis), map.source);
  Check c{"tck_relations", report.passed(), join(report.failures)};
  if (with_defects) {
    std::vector<std::string> zero;
    for (Vertex v = 0; v < map.source.vertex_count(); ++v) {
      if (!report.defect_nonzero[v]) zero.push_back("defect at " + map.source.vertex_name(v) + " is zero");
    }
    checks.push_back(c);
    return Check{"defects_nonzero", zero.empty(), join(zero)};
  }
  return c;
}

Check isomorphism_check(const Graph& e, const Graph& f) {
  const auto iso = graph_isomorphic(e, f);
  Check c{"not_isomorphic", iso.status == IsoStatus::not_isomorphic, ""};
  if (c.passed) {
    c.detail = iso.nodes == 0 ? "rejected by vertex invariants"
                              : "no isomorphism after " + std::to_string(iso.nodes) + " search nodes";
  }
  if (iso.status == IsoStatus::isomorphic) c.detail = "graphs are isomorphic";
  if (iso.status == IsoStatus::budget_exceeded) c.detail = "isomorphism search budget exceeded";
  return c;
}

}  // namespace

Polynomial GeneratorMap::image(const Monomial& m) const {
  auto word = [this](const Path& mu) {
    if (mu.is_vertex()) return vertex_images[mu.range];
    Polynomial p = edge_images[mu.edges.front()];
    for (std::size_t i = 1; i < mu.edges.size(); ++i) p = p * edge_images[mu.edges[i]];
    return p;
  };
  return word(m.mu) * word(m.nu).adjoint();
}

std::vector<TruncatedOperator> GeneratorMap::q(const BasisPtr& target_basis) const {
  std::vector<TruncatedOperator> out;
  for (const auto& p : vertex_images) out.push_back(polynomial_operator(target_basis, p));
  return out;
}

std::vector<TruncatedOperator> GeneratorMap::t(const BasisPtr& target_basis) const {
  std::vector<TruncatedOperator> out;
  for (const auto& p : edge_images) out.push_back(polynomial_operator(target_basis, p));
  return out;
}

Graph example_2_1_E() {
  return Graph({"a", "u", "v", "l", "m", "r"}, {{"f", "u", "a"},
                                                 {"g", "v", "a"},
                                                 {"h1", "l", "u"},
                                                 {"h2", "m", "u"},
                                                 {"e", "m", "u"},
                                                 {"h3", "r", "v"},
                                                 {"h4", "a", "l"},
                                                 {"h5", "a", "m"},
                                                 {"h6", "a", "r"}});
}

Graph example_2_1_F() {
  return Graph({"a", "u", "v", "l", "m", "r"}, {{"f", "u", "a"},
                                                 {"g", "v", "a"},
                                                 {"h1", "l", "u"},
                                                 {"h2", "m", "u"},
                                                 {"e", "m", "v"},
                                                 {"h3", "r", "v"},
                                                 {"h4", "a", "l"},
                                                 {"h5", "a", "m"},
                                                 {"h6", "a", "r"}});
}

Graph example_3_7_E() { return Graph({"u", "v", "w"}, {{"e", "w", "u"}, {"f", "w", "u"}}); }

Graph example_3_7_F() { return Graph({"u", "v", "w"}, {{"e", "w", "v"}, {"f", "w", "u"}}); }

Counterexample build_example_2_1() {
  const Graph e = example_2_1_E();
  const Graph f = example_2_1_F();
  auto map = identity_map(e, f);
  const auto tete = term(f, "e", "e");
  const auto tgete = term(f, "g.e", "e");
  map.vertex_images[e.vertex("u")] = q(f, "u") + tete;
  map.vertex_images[e.vertex("v")] = q(f, "v") - tete;
  map.edge_images[e.edge("f")] = t(f, "f") + tgete;
  map.edge_images[e.edge("g")] = t(f, "g") - tgete;
  return {e, f, std::move(map), bijection_by_name(e, f)};
}

Counterexample build_example_3_7() {
  const Graph e = example_3_7_E();
  const Graph f = example_3_7_F();
  auto map = identity_map(e, f);
  const auto tete = term(f, "e", "e");
  map.vertex_images[e.vertex("v")] = q(f, "v") - tete;
  map.vertex_images[e.vertex("u")] = q(f, "u") + tete;
  return {e, f, std::move(map), bijection_by_name(e, f)};
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check& VerificationReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw Error(ErrorCode::unknown_id, "no check named " + name);
}

Json VerificationReport::to_json() const {
  Json out;
  out["example"] = example;
  out["L"] = truncation;
  out["passed"] = passed();
  out["checks"] = Json::array();
  for (const auto& c : checks) {
    Json j{{"name", c.name}, {"passed", c.passed}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    out["checks"].push_back(std::move(j));
  }
  return out;
}

std::vector<TruncatedOperator> diagonal_presentation(const GeneratorMap& map, const BasisPtr& target_basis,
                                                     std::size_t max_length) {
  std::vector<TruncatedOperator> out;
  for (const auto& mu : enumerate_paths(map.source, max_length)) {
    out.push_back(polynomial_operator(target_basis, map.image(Monomial{mu, mu})));
  }
  return out;
}

VerificationReport verify_example_2_1(std::size_t truncation) {
  if (truncation < 4) throw Error(ErrorCode::truncation_too_small, "Example 2.1 checks need L >= 4");
  const auto ex = build_example_2_1();
  const auto basis = make_basis(ex.f, truncation);
  const std::size_t valid = truncation - 1;
  VerificationReport r{"2.1", truncation, {}};
  r.checks.push_back(tck_check(ex.map, basis, true, r.checks));

  std::vector<std::string> bad;
  auto homogeneous = [&](const Polynomial& p, int degree, const std::string& label) {
    const auto op = polynomial_operator(basis, p);
    if (p.gauge_degree() != degree || !op.entries_have_gauge_degree(degree)) {
      bad.push_back(label + " is not of gauge degree " + std::to_string(degree));
    }
  };
  for (Vertex v = 0; v < ex.e.vertex_count(); ++v) homogeneous(ex.map.vertex_images[v], 0, "Q_" + ex.e.vertex_name(v));
  for (Edge h = 0; h < ex.e.edge_count(); ++h) homogeneous(ex.map.edge_images[h], 1, "T_" + ex.e.edge_name(h));
  r.checks.push_back({"gauge_equivariance", bad.empty(), join(bad)});

  bad.clear();
  const auto paths = enumerate_paths(ex.e, valid);
  const auto diagonals = diagonal_presentation(ex.map, basis, valid);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto d = diagonals[i].compressed(valid);
    if (!d.is_diagonal()) {
      bad.push_back("image of t_mu t*_mu for mu = " + path_label(ex.e, paths[i]) + " is not diagonal: " +
                    operator_to_json(d).dump());
    }
  }
  r.checks.push_back({"diagonal_images", bad.empty(),
                      bad.empty() ? std::to_string(paths.size()) + " diagonal monomials checked" : join(bad)});
  r.checks.push_back(isomorphism_check(ex.e, ex.f));
  return r;
}

VerificationReport verify_example_3_7(std::size_t truncation) {
  if (truncation < 2) throw Error(ErrorCode::truncation_too_small, "Example 3.7 checks need L >= 2");
  const auto ex = build_example_3_7();
  const auto basis = make_basis(ex.f, truncation);
  const std::size_t valid = truncation - 1;
  VerificationReport r{"3.7", truncation, {}};
  r.checks.push_back(tck_check(ex.map, basis, false, r.checks));

  std::vector<std::string> bad;
  auto equivariant = [&](const Polynomial& p, const std::vector<int>& source_weight, const std::string& label) {
    std::vector<int> expected(ex.f.vertex_count(), 0);
    for (Vertex v = 0; v < source_weight.size(); ++v) expected[ex.vertex_bijection[v]] = source_weight[v];
    const auto w = p.kappa_weight(ex.f);
    if (!w || *w != expected || !polynomial_operator(basis, p).entries_have_kappa_weight(expected)) {
      bad.push_back("image of " + label + " does not carry the matching kappa weight");
    }
  };
  for (Vertex v = 0; v < ex.e.vertex_count(); ++v) {
    equivariant(ex.map.vertex_images[v], std::vector<int>(ex.e.vertex_count(), 0), "q_" + ex.e.vertex_name(v));
  }
  for (Edge h = 0; h < ex.e.edge_count(); ++h) {
    equivariant(ex.map.edge_images[h], kappa_weight(ex.e, edge_monomial(ex.e, h)), "t_" + ex.e.edge_name(h));
  }
  r.checks.push_back({"kappa_equivariance", bad.empty(), join(bad)});

  std::vector<TruncatedOperator> m;
  for (const auto* name : {"u", "v", "w"}) m.push_back(gen_Q(basis, ex.f.vertex(name)).compressed(valid));
  const std::size_t before = exact_rank(m);
  m.push_back(polynomial_operator(basis, q(ex.f, "v") - term(ex.f, "e", "e")).compressed(valid));
  const std::size_t after = exact_rank(m);
  r.checks.push_back({"m_membership_fails", before == 3 && after == 4,
                      "rank " + std::to_string(before) + " -> " + std::to_string(after)});
  r.checks.push_back(isomorphism_check(ex.e, ex.f));
  return r;
}

std::size_t span_cap() {
  const char* env = std::getenv("TGL_SPAN_CAP");
  if (!env || !*env) return kDefaultSpanCap;
  char* end = nullptr;
  const auto value = std::strtoull(env, &end, 10);
  if (*end != '\0' || value == 0) {
    throw Error(ErrorCode::invalid_argument, std::string("TGL_SPAN_CAP must be a positive integer, got '") + env + "'");
  }
  return static_cast<std::size_t>(value);
}

bool GenerationReport::all_contained() const {
  return std::all_of(word_length.begin(), word_length.end(), [](std::size_t n) { return n != 0; });
}

std::vector<Polynomial> canonical_generators(const Graph& g) {
  std::vector<Polynomial> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v) out.push_back(Polynomial::vertex(v));
  for (Edge e = 0; e < g.edge_count(); ++e) out.push_back(Polynomial::edge(g, e));
  return out;
}

GenerationReport generated_subalgebra_contains(const GeneratorMap& map, std::span<const Polynomial> targets,
                                               std::size_t degree_cap, const BasisPtr& target_basis) {
  if (degree_cap < 2) throw Error(ErrorCode::invalid_argument, "degree cap must be at least 2");
  if (target_basis->truncation() < 1) throw Error(ErrorCode::truncation_too_small, "need L >= 1");
  const std::size_t cap = span_cap();
  std::vector<Polynomial> gens;
  auto add_gen = [&gens](const Polynomial& p) {
    if (!p.is_zero() && std::find(gens.begin(), gens.end(), p) == gens.end()) gens.push_back(p);
  };
  for (const auto& p : map.vertex_images) add_gen(p);
  for (const auto& p : map.edge_images) {
    add_gen(p);
    add_gen(p.adjoint());
  }

  MonomialRegistry registry;
  TrackedEchelonSpan span;
  std::vector<Polynomial> inputs;
  auto insert = [&](const Polynomial& p) {
    inputs.push_back(p);
    const bool independent = span.insert(registry.coordinates(p));
    if (span.rank() > cap) {
      throw Error(ErrorCode::span_cap, "span dimension exceeds cap " + std::to_string(cap) +
                                           " (set TGL_SPAN_CAP to raise it)");
    }
    return independent;
  };

  GenerationReport report;
  report.word_length.assign(targets.size(), 0);
  std::vector<SparseVector> expressions(targets.size());
  auto test_targets = [&](std::size_t level) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (report.word_length[i] != 0) continue;
      if (auto c = span.express(registry.coordinates(targets[i]))) {
        report.word_length[i] = level;
        expressions[i] = std::move(*c);
      }
    }
  };

  std::vector<Polynomial> frontier;
  for (const auto& g : gens) {
    if (insert(g)) frontier.push_back(g);
  }
  test_targets(1);
  for (std::size_t level = 2; level <= degree_cap && !frontier.empty() && !report.all_contained(); ++level) {
    std::vector<Polynomial> next;
    for (const auto& b : frontier) {
      for (const auto& g : gens) {
        auto p = b * g;
        if (!p.is_zero() && insert(p)) next.push_back(std::move(p));
      }
    }
    frontier = std::move(next);
    test_targets(level);
  }
  report.span_dim = span.rank();

  const std::size_t valid = target_basis->truncation() - 1;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (report.word_length[i] == 0) continue;
    TruncatedOperator combined(target_basis);
    for (const auto& [k, c] : expressions[i]) {
      combined += polynomial_operator(target_basis, inputs[k]).compressed(valid) * c;
    }
    if (!(combined == polynomial_operator(target_basis, targets[i]).compressed(valid))) {
      report.matrix_certified = false;
    }
  }
  return report;
}

}  // namespace tgl
