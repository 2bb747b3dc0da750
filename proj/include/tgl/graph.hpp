#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tgl/rational.hpp"

namespace tgl {

using Vertex = std::uint32_t;
using Edge = std::uint32_t;

struct EdgeSpec {
  std::string id;
  std::string src;
  std::string rng;
};

/// Finite directed multigraph with named vertices and edges.
///
/// Vertex and edge indices follow declaration order, which fixes every
/// deterministic ordering downstream (path bases, state lists, reports).
/// An edge e points from src(e) to rng(e); parallel edges and loops are allowed.
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges);

  std::size_t vertex_count() const { return vertex_names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::string& vertex_name(Vertex v) const { return vertex_names_[v]; }
  const std::string& edge_name(Edge e) const { return edges_[e].id; }
  const std::vector<std::string>& vertex_names() const { return vertex_names_; }

  Vertex src(Edge e) const { return edges_[e].src; }
  Vertex rng(Edge e) const { return edges_[e].rng; }

  std::optional<Vertex> find_vertex(std::string_view name) const;
  std::optional<Edge> find_edge(std::string_view name) const;
  /// Throws Error(unknown_id).
  Vertex vertex(std::string_view name) const;
  Edge edge(std::string_view name) const;

  /// E^1 v: edges with source v, in file order.
  const std::vector<Edge>& edges_from(Vertex v) const { return out_[v]; }
  /// vE^1: edges with range v, in file order.
  const std::vector<Edge>& edges_into(Vertex v) const { return in_[v]; }

  bool is_sink(Vertex v) const { return out_[v].empty(); }
  bool is_source(Vertex v) const { return in_[v].empty(); }
  std::vector<Vertex> sinks() const;
  std::vector<Vertex> sources() const;
  bool has_sinks() const { return !sinks().empty(); }

  std::vector<EdgeSpec> edge_specs() const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  struct EdgeRecord {
    std::string id;
    Vertex src;
    Vertex rng;
  };

  std::vector<std::string> vertex_names_;
  std::vector<EdgeRecord> edges_;
  std::unordered_map<std::string, Vertex> vertex_index_;
  std::unordered_map<std::string, Edge> edge_index_;
  std::vector<std::vector<Edge>> out_;
  std::vector<std::vector<Edge>> in_;
};

/// Parses {"vertices": [...], "edges": [{"id","src","rng"}...]}.
Graph parse_graph(std::string_view document);
Graph load_graph(const std::string& path);
std::string serialize_graph(const Graph& g);

/// A[v][w] = |vE^1w|, the number of edges from w to v.
class AdjacencyMatrix {
 public:
  explicit AdjacencyMatrix(std::size_t n = 0) : n_(n), entries_(n * n, 0) {}

  std::size_t size() const { return n_; }
  std::uint64_t operator()(Vertex range, Vertex source) const { return entries_[range * n_ + source]; }
  std::uint64_t& at(Vertex range, Vertex source) { return entries_[range * n_ + source]; }

  AdjacencyMatrix submatrix(std::span<const Vertex> vertices) const;
  bool is_zero() const;

  friend bool operator==(const AdjacencyMatrix&, const AdjacencyMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> entries_;
};

AdjacencyMatrix adjacency(const Graph& g);

/// Strongly connected components. Classes are ordered by their smallest
/// vertex; each class lists its vertices in increasing order.
struct ComponentPartition {
  std::vector<std::vector<Vertex>> classes;
  std::vector<bool> nontrivial;
  std::vector<std::size_t> class_of;
};

ComponentPartition scc(const AdjacencyMatrix& a);
ComponentPartition scc(const Graph& g);

/// Collatz-Wielandt bracket on the Perron root, maximised over components.
struct RadiusBounds {
  double lower = 0.0;
  double upper = 0.0;
};

RadiusBounds perron_bounds(const AdjacencyMatrix& a, double tol);
double spectral_radius_estimate(const AdjacencyMatrix& a, double tol);

/// log of the spectral radius; acyclic graphs have log rho = -inf.
struct LogRadius {
  bool negative_infinity = true;
  double value = 0.0;

  bool exceeds(double beta) const { return !negative_infinity && value > beta; }
  std::string to_string() const;
};

LogRadius log_spectral_radius(const AdjacencyMatrix& a, double tol = 1e-12);

/// x * rho(A) < 1, via positivity of the leading principal minors of I - xA.
bool is_subcritical(const AdjacencyMatrix& a, const Rational& x);

/// Exact three-way comparison of x * rho(A) against 1 (x > 0).
std::strong_ordering compare_scaled_radius(const AdjacencyMatrix& a, const Rational& x);

/// Vertices from which a path reaches a component with log rho(A_C) > beta,
/// where x = e^{-beta}. Sorted.
std::vector<Vertex> hereditary_set(const Graph& g, const Rational& x);
std::vector<Vertex> hereditary_set(const Graph& g, double beta);

/// |E^n v| for every v: column sums of A^n.
std::vector<Integer> path_counts(const AdjacencyMatrix& a, unsigned n);
Integer path_count(const Graph& g, unsigned n, Vertex v);

enum class IsoStatus { isomorphic, not_isomorphic, budget_exceeded };

struct IsoResult {
  IsoStatus status = IsoStatus::not_isomorphic;
  /// bijection[v] = image in h of vertex v of g; empty unless isomorphic.
  std::vector<Vertex> bijection;
  std::uint64_t nodes = 0;

  bool found() const { return status == IsoStatus::isomorphic; }
};

inline constexpr std::uint64_t kDefaultIsoBudget = 10'000'000;

/// Searches for sigma with A_h[sigma v][sigma w] = A_g[v][w]. Name-preserving
/// assignments are tried first, so g == h yields the identity.
IsoResult graph_isomorphic(const Graph& g, const Graph& h,
                           std::uint64_t budget = kDefaultIsoBudget);

}  // namespace tgl
