#include "tgl/path.hpp"

#include <algorithm>

#include "tgl/error.hpp"

namespace tgl {

Path vertex_path(Vertex v) { return Path{v, v, {}}; }

Path edge_path(const Graph& g, Edge e) { return Path{g.rng(e), g.src(e), {e}}; }

Path make_path(const Graph& g, std::vector<Edge> edges) {
  if (edges.empty()) throw Error(ErrorCode::invalid_argument, "make_path: empty edge sequence");
  for (auto e : edges) {
    if (e >= g.edge_count()) throw Error(ErrorCode::unknown_id, "unknown edge index " + std::to_string(e));
  }
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (g.src(edges[i]) != g.rng(edges[i + 1])) {
      throw Error(ErrorCode::invalid_argument, "edges \"" + g.edge_name(edges[i]) + "\" and \"" +
                                                   g.edge_name(edges[i + 1]) + "\" are not composable");
    }
  }
  const Vertex r = g.rng(edges.front());
  const Vertex s = g.src(edges.back());
  return Path{r, s, std::move(edges)};
}

Path path_from_names(const Graph& g, const std::vector<std::string>& edge_names) {
  std::vector<Edge> edges;
  for (const auto& name : edge_names) edges.push_back(g.edge(name));
  return make_path(g, std::move(edges));
}

std::optional<Path> concat(const Path& mu, const Path& lambda) {
  if (mu.source != lambda.range) return std::nullopt;
  Path out{mu.range, lambda.source, mu.edges};
  out.edges.insert(out.edges.end(), lambda.edges.begin(), lambda.edges.end());
  return out;
}

std::optional<Path> strip_prefix(const Path& prefix, const Path& path) {
  if (prefix.range != path.range || prefix.length() > path.length()) return std::nullopt;
  if (!std::equal(prefix.edges.begin(), prefix.edges.end(), path.edges.begin())) return std::nullopt;
  Path rest{prefix.source, path.source, {}};
  rest.edges.assign(path.edges.begin() + static_cast<std::ptrdiff_t>(prefix.length()), path.edges.end());
  return rest;
}

std::string path_label(const Graph& g, const Path& p) {
  if (p.is_vertex()) return g.vertex_name(p.range);
  std::string out;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (i) out += '.';
    out += g.edge_name(p.edges[i]);
  }
  return out;
}

std::vector<Path> enumerate_paths(const Graph& g, std::size_t max_length, std::size_t cap) {
  std::vector<Path> all;
  std::vector<Path> layer;
  for (Vertex v = 0; v < g.vertex_count(); ++v) layer.push_back(vertex_path(v));
  for (std::size_t len = 0;; ++len) {
    if (all.size() + layer.size() > cap) {
      throw Error(ErrorCode::basis_cap, "path basis exceeds cap of " + std::to_string(cap) + " paths");
    }
    all.insert(all.end(), layer.begin(), layer.end());
    if (len == max_length) break;
    std::vector<Path> next;
    for (const auto& mu : layer) {
      // e.mu is composable when s(e) = r(mu).
      for (auto e : g.edges_from(mu.range)) {
        Path ext{g.rng(e), mu.source, {e}};
        ext.edges.insert(ext.edges.end(), mu.edges.begin(), mu.edges.end());
        next.push_back(std::move(ext));
      }
    }
    if (next.empty()) break;
    std::sort(next.begin(), next.end(), [](const Path& a, const Path& b) { return a.edges < b.edges; });
    layer = std::move(next);
  }
  return all;
}

std::vector<Path> enumerate_paths_from(const Graph& g, std::size_t max_length, Vertex v, std::size_t cap) {
  if (v >= g.vertex_count()) throw Error(ErrorCode::unknown_id, "unknown vertex index " + std::to_string(v));
  auto all = enumerate_paths(g, max_length, cap);
  std::vector<Path> out;
  for (auto& p : all) {
    if (p.source == v) out.push_back(std::move(p));
  }
  return out;
}

PathBasis::PathBasis(Graph g, std::size_t truncation, std::size_t cap)
    : graph_(std::move(g)), truncation_(truncation), paths_(enumerate_paths(graph_, truncation, cap)) {
  const std::size_t n = paths_.size();
  const std::size_t m = graph_.edge_count();
  prepend_.assign(n * m, kAbsent);
  by_source_.resize(graph_.vertex_count());
  by_range_.resize(graph_.vertex_count());
  length_offsets_.assign(truncation_ + 2, n);
  for (std::size_t i = 0; i < n; ++i) {
    by_source_[paths_[i].source].push_back(i);
    by_range_[paths_[i].range].push_back(i);
    const auto len = paths_[i].length();
    length_offsets_[len] = std::min(length_offsets_[len], i);
  }
  for (std::size_t len = truncation_ + 1; len-- > 0;) {
    length_offsets_[len] = std::min(length_offsets_[len], length_offsets_[len + 1]);
  }
  // Children e.mu all have length |mu| + 1; locate them by binary search in
  // their layer, which is sorted by edge sequence.
  for (std::size_t i = 0; i < n; ++i) {
    const auto& mu = paths_[i];
    if (mu.length() == truncation_) continue;
    const auto begin = paths_.begin() + static_cast<std::ptrdiff_t>(length_offsets_[mu.length() + 1]);
    const auto end = paths_.begin() + static_cast<std::ptrdiff_t>(length_offsets_[mu.length() + 2]);
    for (auto e : graph_.edges_from(mu.range)) {
      std::vector<Edge> key{e};
      key.insert(key.end(), mu.edges.begin(), mu.edges.end());
      const auto it = std::lower_bound(begin, end, key, [](const Path& p, const std::vector<Edge>& k) { return p.edges < k; });
      prepend_[i * m + e] = static_cast<std::int64_t>(it - paths_.begin());
    }
  }
}

std::optional<std::size_t> PathBasis::index_of(const Path& p) const {
  if (p.length() > truncation_ || p.source >= graph_.vertex_count()) return std::nullopt;
  std::size_t idx = vertex_index(p.source);
  for (auto it = p.edges.rbegin(); it != p.edges.rend(); ++it) {
    const auto next = prepend(*it, idx);
    if (!next) return std::nullopt;
    idx = *next;
  }
  if (paths_[idx] != p) return std::nullopt;
  return idx;
}

std::optional<std::size_t> PathBasis::prepend(Edge e, std::size_t i) const {
  const auto v = prepend_[i * graph_.edge_count() + e];
  if (v == kAbsent) return std::nullopt;
  return static_cast<std::size_t>(v);
}

std::size_t PathBasis::count_up_to(std::size_t max_length) const {
  if (max_length >= truncation_) return paths_.size();
  return length_offsets_[max_length + 1];
}

BasisPtr make_basis(const Graph& g, std::size_t truncation, std::size_t cap) {
  return std::make_shared<const PathBasis>(g, truncation, cap);
}

}  // namespace tgl
