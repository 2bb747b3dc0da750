#pragma once

#include <cstdint>
#include <vector>

#include "tgl/graph.hpp"
#include "tgl/rational.hpp"

// Brute-force reference computations that share no code with the library
// beyond the Graph container.
namespace tgl::testing {

/// Edge sequences e_1..e_n with s(e_i) = r(e_{i+1}), found by depth-first
/// extension on the right; only the source of each path is kept.
std::vector<std::vector<std::uint64_t>> dfs_path_counts(const Graph& g, unsigned max_length);

/// Gauss-Jordan inverse of I - xA with A[i][j] = #edges j -> i.
std::vector<std::vector<Rational>> resolvent(const Graph& g, const Rational& x);

/// Z_v = sum_w resolvent[w][v].
std::vector<Rational> partition_oracle(const Graph& g, const Rational& x);

/// Tries every vertex permutation and compares edge multiplicities.
bool isomorphic_by_permutation(const Graph& g, const Graph& h);

/// Equal-multiplicity check under a given vertex bijection.
bool is_isomorphism(const Graph& g, const Graph& h, const std::vector<Vertex>& bijection);

/// Largest Perron root over strongly connected classes, by floating power
/// iteration on I + A_C.
double spectral_radius_power(const Graph& g);

}  // namespace tgl::testing
