#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corpus.hpp"
#include "oracles.hpp"
#include "tgl/counterexamples.hpp"
#include "tgl/error.hpp"
#include "tgl/kms.hpp"
#include "tgl/pathspace.hpp"
#include "tgl/reconstruction.hpp"

using namespace tgl;
using tgl::testing::corpus;
using tgl::testing::no_sink_corpus;

namespace {

Graph rose(std::size_t loops) {
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < loops; ++i) edges.push_back({"l" + std::to_string(i), "v", "v"});
  return Graph({"v"}, edges);
}

Graph two_cycle() { return Graph({"u", "v"}, {{"a", "u", "v"}, {"b", "v", "u"}}); }

Path P(const Graph& g, const std::string& name) {
  if (auto v = g.find_vertex(name)) return vertex_path(*v);
  return path_from_names(g, {name});
}

ReconstructionParams params_for(const Graph& g, std::size_t L = 3) {
  ReconstructionParams p;
  p.x = default_subcritical_x(adjacency(g));
  p.truncation = L;
  return p;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::invalid_argument;
}

// Edge multiplicities psi -> phi of the reference, read through the bijection.
void check_multiplicities(const ReconstructionResult& r, const Graph& ref) {
  REQUIRE(r.reference_iso.has_value());
  REQUIRE(r.reference_iso->found());
  CHECK(tgl::testing::is_isomorphism(r.reconstructed.graph(), ref, r.reference_iso->bijection));
  auto a = adjacency(ref);
  for (std::size_t phi = 0; phi < r.states.size(); ++phi)
    for (std::size_t psi = 0; psi < r.states.size(); ++psi)
      CHECK(r.reconstructed.multiplicity[phi][psi] == a(r.states[phi].vertex, r.states[psi].vertex));
}

}  // namespace

TEST_CASE("candidate projections") {
  Graph e = example_3_7_E();
  auto b = make_basis(e, 2);
  Vertex w = e.vertex("w");
  auto c = candidate_minimal_projections(b, w, 0, 1);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == delta(b, P(e, "w")));
  CHECK(c[1] == delta(b, P(e, "e")));
  CHECK(c[2] == delta(b, P(e, "f")));

  auto r1 = candidate_minimal_projections(b, w, 6, 99);
  auto r2 = candidate_minimal_projections(b, w, 6, 99);
  CHECK(r1.size() == 9);
  CHECK(r1 == r2);
  for (const auto& p : r1) {
    CHECK(p * p == p);
    CHECK(p.adjoint() == p);
    std::size_t support = 0;
    for (std::size_t i = 0; i < b->size(); ++i) {
      if (!p.column(i).empty()) ++support;
      if (!p.column(i).empty()) CHECK(b->path(i).source == w);
    }
    std::vector<TruncatedOperator> cols;
    for (const auto& [col, entries] : p.columns()) {
      TruncatedOperator single(b);
      for (const auto& [row, v] : entries) single.add(row, 0, v);
      cols.push_back(single);
    }
    CHECK(exact_rank(cols) == 1);
  }
  CHECK(candidate_minimal_projections(b, e.vertex("u"), 5, 1).size() == 1);
}

TEST_CASE("argmax examples") {
  Graph e = example_3_7_E();
  auto b = make_basis(e, 2);
  auto states = extremal_states(e, Rational(1, 2));
  Vertex w = e.vertex("w");
  auto c = candidate_minimal_projections(b, w, 0, 1);
  CHECK(state_eval(states[w], c[0]).value == Rational(1, 2));
  CHECK(state_eval(states[w], c[1]).value == Rational(1, 4));
  CHECK(state_eval(states[w], c[2]).value == Rational(1, 4));
  auto best = find_pphi(states[w], c);
  CHECK(best.index == 0);
  CHECK(best.value == Rational(1, 2));
  CHECK(best.runner_up == Rational(1, 4));

  SparseVector xi{{*b->index_of(P(e, "w")), Rational(1)}, {*b->index_of(P(e, "e")), Rational(1)}};
  auto mixed = rank_one_projection(b, xi);
  CHECK(state_eval(states[w], mixed).value == Rational(3, 8));
  c.push_back(mixed);
  CHECK(find_pphi(states[w], c).index == 0);

  Vertex u = e.vertex("u");
  auto cu = candidate_minimal_projections(b, u, 0, 1);
  auto bu = find_pphi(states[u], cu);
  CHECK(bu.value == 1);
  CHECK(cu[bu.index] == delta(b, P(e, "u")));
}

TEST_CASE("argmax failures are hard errors") {
  Graph e = example_3_7_E();
  auto b = make_basis(e, 2);
  auto states = extremal_states(e, Rational(1, 2));
  Vertex w = e.vertex("w");
  std::vector<TruncatedOperator> twice{delta(b, P(e, "w")), delta(b, P(e, "w"))};
  CHECK(code_of([&] { find_pphi(states[w], twice); }) == ErrorCode::tie);
  std::vector<TruncatedOperator> wrong{delta(b, P(e, "e"))};
  CHECK(code_of([&] { find_pphi(states[w], wrong); }) == ErrorCode::postcondition);
  auto lb = make_basis(rose(1), 2);
  auto loop_state = extremal_states(rose(1), Rational(1, 2))[0];
  std::vector<TruncatedOperator> inexact{gen_Q(lb, 0)};
  CHECK(code_of([&] { find_pphi(loop_state, inexact); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { find_pphi(states[w], {}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("argmax dominance over random candidates") {
  for (const auto& g : corpus()) {
    auto b = make_basis(g, 3);
    Rational x = default_subcritical_x(adjacency(g));
    auto states = extremal_states(g, x);
    auto cands = all_candidates(b, 20, 5);
    for (const auto& s : states) {
      auto best = find_pphi(s, cands);
      CHECK(cands[best.index] == delta(b, vertex_path(s.vertex)));
      CHECK(best.value == Rational(1) / s.partition);
      for (std::size_t i = 0; i < cands.size(); ++i)
        if (i != best.index) CHECK(state_eval(s, cands[i]).value < best.value);
    }
  }
}

TEST_CASE("corner examples") {
  Graph e = example_3_7_E();
  auto b = make_basis(e, 3);
  auto dw = delta(b, P(e, "w"));
  CHECK(corner_basis(b, 0, dw).dim == 1);
  CHECK(corner_basis(b, 1, dw).dim == 2);
  CHECK(corner_basis(b, 2, dw).dim == 0);
  CHECK(code_of([&] { corner_basis(b, 3, dw); }) == ErrorCode::truncation_too_small);
  for (int n = 0; n <= 2; ++n) CHECK(corner_basis_exhaustive(b, n, dw).dim == corner_basis(b, n, dw).dim);
}

TEST_CASE("corner dimensions") {
  for (const auto& g : corpus()) {
    auto b = make_basis(g, 3);
    auto counts = tgl::testing::dfs_path_counts(g, 2);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      auto d = delta(b, vertex_path(v));
      for (int n = 0; n <= 2; ++n) {
        auto c = corner_basis(b, n, d);
        CHECK(c.dim == counts[n][v]);
        for (const auto& op : c.spanning) CHECK(op.entries_have_gauge_degree(n));
      }
    }
  }
}

TEST_CASE("pruned corner equals the exhaustive one") {
  auto gs = corpus();
  for (std::size_t k = 0; k < 12; ++k) {
    const auto& g = gs[k];
    auto b = make_basis(g, 2);
    for (std::size_t i = 0; i < b->count_up_to(1); ++i) {
      auto d = delta(b, b->path(i));
      for (int n = -1; n <= 1; ++n) {
        auto fast = corner_basis(b, n, d);
        auto slow = corner_basis_exhaustive(b, n, d);
        CHECK(fast.dim == slow.dim);
        std::vector<TruncatedOperator> both = fast.spanning;
        both.insert(both.end(), slow.spanning.begin(), slow.spanning.end());
        CHECK(exact_rank(both) == slow.dim);
      }
    }
  }
}

TEST_CASE("dominating projections") {
  Graph e = example_3_7_E();
  auto b = make_basis(e, 3);
  auto m = canonical_m(b);
  CHECK(dominating_projection_in_M(delta(b, P(e, "w")), m) == e.vertex("w"));
  CHECK(dominating_projection_in_M(delta(b, P(e, "e")), m) == e.vertex("u"));

  auto ex = build_example_2_1();
  auto fb = make_basis(ex.f, 4);
  MSubalgebraPresentation scrambled(ex.map.q(fb));
  Vertex v = ex.f.vertex("v");
  auto idx = dominating_projection_in_M(delta(fb, vertex_path(v)), scrambled);
  Vertex ev = ex.e.vertex("v");
  CHECK(idx == ev);
  Edge fe = ex.f.edge("e");
  CHECK(scrambled.projections()[idx] == gen_Q(fb, v) - gen_T(fb, fe) * gen_T(fb, fe).adjoint());
  CHECK(scrambled.projections()[idx] != gen_Q(fb, v));
  CHECK(m.size() == 3);
}

TEST_CASE("malformed presentations are rejected") {
  Graph e = example_3_7_E();
  auto b = make_basis(e, 3);
  std::vector<TruncatedOperator> missing{gen_Q(b, 0), gen_Q(b, 1)};
  CHECK(code_of([&] { MSubalgebraPresentation m(missing); }) == ErrorCode::invalid_argument);
  std::vector<TruncatedOperator> overlap{gen_Q(b, 0) + gen_Q(b, 1), gen_Q(b, 1), gen_Q(b, 2) - gen_Q(b, 1)};
  CHECK(code_of([&] { MSubalgebraPresentation m(overlap); }) == ErrorCode::invalid_argument);
  std::vector<TruncatedOperator> with_zero{gen_Q(b, 0), gen_Q(b, 1), gen_Q(b, 2), TruncatedOperator(b)};
  CHECK(code_of([&] { MSubalgebraPresentation m(with_zero); }) == ErrorCode::invalid_argument);
  std::vector<TruncatedOperator> skew{gen_Q(b, 0) + gen_T(b, 0), gen_Q(b, 1), gen_Q(b, 2)};
  CHECK(code_of([&] { MSubalgebraPresentation m(skew); }) == ErrorCode::invalid_argument);
}

TEST_CASE("M reconstruction examples") {
  for (const Graph& g : {example_3_7_E(), example_3_7_F()}) {
    auto b = reconstruction_basis(g, 3);
    auto r = reconstruct_with_M(b, canonical_m(b), params_for(g), &g);
    check_multiplicities(r, g);
  }
  Graph e = example_3_7_E();
  auto b = reconstruction_basis(e, 3);
  auto r = reconstruct_with_M(b, canonical_m(b), params_for(e));
  CHECK(r.reconstructed.multiplicity[e.vertex("u")][e.vertex("w")] == 2);
  CHECK_FALSE(r.reference_iso.has_value());

  CHECK(code_of([&] { reconstruction_basis(e, 2); }) == ErrorCode::truncation_too_small);
}

TEST_CASE("scrambled vertex algebra recovers the other graph") {
  auto ex = build_example_2_1();
  auto fb = reconstruction_basis(ex.f, 4);
  MSubalgebraPresentation scrambled(ex.map.q(fb));
  auto r = reconstruct_with_M(fb, scrambled, params_for(ex.f, 4), &ex.e);
  REQUIRE(r.reference_iso.has_value());
  CHECK(r.reference_iso->found());
  CHECK_FALSE(graph_isomorphic(r.reconstructed.graph(), ex.f).found());
  std::size_t parallel = 0;
  for (const auto& row : r.reconstructed.multiplicity)
    for (auto n : row) parallel += n >= 2 ? 1 : 0;
  CHECK(parallel == 1);

  auto canonical = reconstruct_with_M(fb, canonical_m(fb), params_for(ex.f, 4), &ex.f);
  CHECK(canonical.reference_iso->found());
  CHECK_FALSE(graph_isomorphic(canonical.reconstructed.graph(), ex.e).found());
}

TEST_CASE("M round trip on the corpus") {
  for (const auto& g : corpus()) {
    auto b = reconstruction_basis(g, 3);
    auto r = reconstruct_with_M(b, canonical_m(b), params_for(g), &g);
    check_multiplicities(r, g);
    for (std::size_t i = 0; i < r.states.size(); ++i)
      CHECK(r.degree_one_dims[i] == g.edges_from(r.states[i].vertex).size());
  }
}

TEST_CASE("kappa vertex identification") {
  Graph loop = rose(1);
  auto lb = make_basis(loop, 3);
  CHECK(identify_vertex_by_kappa(lb, delta(lb, vertex_path(0))) == 0);

  Graph c = two_cycle();
  auto cb = make_basis(c, 3);
  CHECK(identify_vertex_by_kappa(cb, delta(cb, vertex_path(c.vertex("u")))) == c.vertex("u"));
  CHECK(identify_vertex_by_kappa(cb, delta(cb, vertex_path(c.vertex("v")))) == c.vertex("v"));

  Graph e = example_3_7_E();
  auto eb = make_basis(e, 3);
  CHECK(code_of([&] { identify_vertex_by_kappa(eb, delta(eb, vertex_path(e.vertex("u")))); }) ==
        ErrorCode::sinks_present);
}

TEST_CASE("twisted fixed dimensions") {
  Graph c = two_cycle();
  auto b = make_basis(c, 3);
  Vertex u = c.vertex("u"), v = c.vertex("v");
  CHECK(twisted_fixed_dim(b, TwistSpec{u, v}, delta(b, vertex_path(v))) == 1);
  CHECK(twisted_fixed_dim(b, TwistSpec{v, u}, delta(b, vertex_path(u))) == 1);

  Graph g({"a", "b", "c"}, {{"x", "a", "b"}, {"y", "b", "a"}, {"z", "c", "c"}, {"k", "a", "a"}});
  auto gb = make_basis(g, 3);
  CHECK(twisted_fixed_dim(gb, TwistSpec{g.vertex("c"), g.vertex("a")}, delta(gb, vertex_path(g.vertex("a")))) == 0);
  // |E^1 b| * |b E^1 a| = 1 * 1
  CHECK(twisted_fixed_dim(gb, TwistSpec{g.vertex("b"), g.vertex("a")}, delta(gb, vertex_path(g.vertex("a")))) == 1);
  // |E^1 a| * |a E^1 b| = 2 * 1
  CHECK(twisted_fixed_dim(gb, TwistSpec{g.vertex("a"), g.vertex("b")}, delta(gb, vertex_path(g.vertex("b")))) == 2);

  auto short_basis = make_basis(c, 2);
  CHECK(code_of([&] { twisted_fixed_dim(short_basis, TwistSpec{u, v}, delta(short_basis, vertex_path(v))); }) ==
        ErrorCode::truncation_too_small);
}

TEST_CASE("kappa reconstruction examples") {
  Graph r2 = rose(2);
  auto rb = reconstruction_basis(r2, 3);
  auto rr = reconstruct_with_kappa(rb, params_for(r2), &r2);
  CHECK(rr.reconstructed.multiplicity[0][0] == 2);
  CHECK(rr.reference_iso->found());

  Graph c = two_cycle();
  auto cb = reconstruction_basis(c, 3);
  auto cr = reconstruct_with_kappa(cb, params_for(c), &c);
  check_multiplicities(cr, c);

  Graph e = example_3_7_E();
  auto eb = reconstruction_basis(e, 3);
  CHECK(code_of([&] { reconstruct_with_kappa(eb, params_for(e)); }) == ErrorCode::sinks_present);
}

TEST_CASE("kappa round trip, quotient integrality and row sums") {
  auto gs = no_sink_corpus();
  CHECK(gs.size() >= 20);
  for (const auto& g : gs) {
    auto b = reconstruction_basis(g, 3);
    auto r = reconstruct_with_kappa(b, params_for(g), &g);
    check_multiplicities(r, g);
    std::size_t n = r.states.size();
    for (std::size_t psi = 0; psi < n; ++psi) {
      std::size_t sum = 0;
      for (std::size_t phi = 0; phi < n; ++phi) {
        sum += r.reconstructed.multiplicity[phi][psi];
        if (phi == psi) continue;
        std::size_t out_phi = g.edges_from(r.kappa_vertices[phi]).size();
        CHECK(r.numerators[phi][psi] == out_phi * r.reconstructed.multiplicity[phi][psi]);
      }
      CHECK(sum == r.degree_one_dims[psi]);
      CHECK(r.kappa_vertices[psi] == r.states[psi].vertex);
    }
  }
}

TEST_CASE("report json") {
  Graph c = two_cycle();
  auto b = reconstruction_basis(c, 3);
  auto r = reconstruct_with_M(b, canonical_m(b), params_for(c), &c);
  auto j = reconstruction_to_json(r, c);
  CHECK(j["states"].size() == 2);
  CHECK(j["N"][0][1] == 1);
  CHECK(j["reference_iso"]["found"] == true);
  CHECK(j["params"]["x"] == "1/2");
  CHECK(j["params"]["L"] == 3);
  CHECK(j["params"]["seed"] == 42);
  CHECK(j["states"][0]["id"] == "phi_u");
}
