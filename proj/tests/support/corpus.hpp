#pragma once

#include <cstdint>
#include <vector>

#include "tgl/graph.hpp"

namespace tgl::testing {

inline constexpr std::uint64_t kCorpusSeed = 20240917;
inline constexpr std::size_t kCorpusSize = 50;

/// Seeded random multigraphs with 2-6 vertices and 0-12 edges. Odd entries
/// are drawn without sinks; even entries are unconstrained.
std::vector<Graph> corpus();
std::vector<Graph> no_sink_corpus();

Graph random_graph(std::uint64_t seed, bool forbid_sinks);

}  // namespace tgl::testing
