#include "corpus.hpp"

#include <random>
#include <string>

namespace tgl::testing {

Graph random_graph(std::uint64_t seed, bool forbid_sinks) {
  std::mt19937_64 rng(seed);
  const std::size_t n = 2 + rng() % 5;
  const std::size_t min_edges = forbid_sinks ? n : 0;
  const std::size_t m = min_edges + rng() % (13 - min_edges);
  std::vector<std::string> vertices;
  for (std::size_t i = 0; i < n; ++i) vertices.push_back("v" + std::to_string(i));
  std::vector<EdgeSpec> edges;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t src = (forbid_sinks && k < n) ? k : rng() % n;
    const std::size_t dst = rng() % n;
    edges.push_back({"e" + std::to_string(k), vertices[src], vertices[dst]});
  }
  return Graph(vertices, edges);
}

std::vector<Graph> corpus() {
  std::vector<Graph> out;
  for (std::size_t i = 0; i < kCorpusSize; ++i) out.push_back(random_graph(kCorpusSeed + i, i % 2 == 1));
  return out;
}

std::vector<Graph> no_sink_corpus() {
  std::vector<Graph> out;
  for (auto& g : corpus()) {
    if (!g.has_sinks()) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace tgl::testing
