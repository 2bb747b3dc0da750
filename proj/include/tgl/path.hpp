#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tgl/graph.hpp"

namespace tgl {

/// A path mu = e_1 ... e_n with s(e_i) = r(e_{i+1}); r(mu) = r(e_1) and
/// s(mu) = s(e_n). A length-0 path is a vertex, with range = source.
struct Path {
  Vertex range = 0;
  Vertex source = 0;
  std::vector<Edge> edges;

  std::size_t length() const { return edges.size(); }
  bool is_vertex() const { return edges.empty(); }

  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path&, const Path&) = default;
};

Path vertex_path(Vertex v);
Path edge_path(const Graph& g, Edge e);
/// Throws Error(invalid_argument) if the sequence is empty or not composable.
Path make_path(const Graph& g, std::vector<Edge> edges);
/// Edge names in order, e.g. {"e", "f"}; an empty list is not allowed.
Path path_from_names(const Graph& g, const std::vector<std::string>& edge_names);

/// mu followed by lambda, defined when s(mu) = r(lambda).
std::optional<Path> concat(const Path& mu, const Path& lambda);
/// lambda with path = prefix lambda, if prefix is a prefix of path.
std::optional<Path> strip_prefix(const Path& prefix, const Path& path);

/// Vertex name for length 0, otherwise edge names joined by '.'.
std::string path_label(const Graph& g, const Path& p);

inline constexpr std::size_t kDefaultBasisCap = 1'000'000;

/// All paths of length <= L, ordered by length and then lexicographically by
/// edge index; length-0 paths come first, in vertex order.
std::vector<Path> enumerate_paths(const Graph& g, std::size_t max_length,
                                  std::size_t cap = kDefaultBasisCap);
/// E*v restricted to length <= L, in the same order.
std::vector<Path> enumerate_paths_from(const Graph& g, std::size_t max_length, Vertex v,
                                       std::size_t cap = kDefaultBasisCap);

/// Basis {delta_mu : |mu| <= L} of the truncated path space.
class PathBasis {
 public:
  PathBasis(Graph g, std::size_t truncation, std::size_t cap = kDefaultBasisCap);

  const Graph& graph() const { return graph_; }
  std::size_t truncation() const { return truncation_; }
  std::size_t size() const { return paths_.size(); }

  const Path& path(std::size_t i) const { return paths_[i]; }
  std::size_t length(std::size_t i) const { return paths_[i].length(); }
  std::optional<std::size_t> index_of(const Path& p) const;
  /// Index of the length-0 path v.
  std::size_t vertex_index(Vertex v) const { return v; }
  /// Index of e.mu when s(e) = r(mu) and |e.mu| <= L.
  std::optional<std::size_t> prepend(Edge e, std::size_t i) const;
  /// Indices of E*v, paths with source v.
  const std::vector<std::size_t>& with_source(Vertex v) const { return by_source_[v]; }
  /// Indices of vE*, paths with range v.
  const std::vector<std::size_t>& with_range(Vertex v) const { return by_range_[v]; }
  /// Number of basis paths of length <= max_length (a prefix of the ordering).
  std::size_t count_up_to(std::size_t max_length) const;

 private:
  static constexpr std::int64_t kAbsent = -1;

  Graph graph_;
  std::size_t truncation_;
  std::vector<Path> paths_;
  std::vector<std::int64_t> prepend_;
  std::vector<std::vector<std::size_t>> by_source_;
  std::vector<std::vector<std::size_t>> by_range_;
  std::vector<std::size_t> length_offsets_;
};

using BasisPtr = std::shared_ptr<const PathBasis>;

BasisPtr make_basis(const Graph& g, std::size_t truncation, std::size_t cap = kDefaultBasisCap);

}  // namespace tgl
