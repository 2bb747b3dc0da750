#include "tgl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "tgl/error.hpp"
#include "tgl/exact_linalg.hpp"

namespace tgl {

Graph::Graph(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges)
    : vertex_names_(std::move(vertices)) {
  for (Vertex v = 0; v < vertex_names_.size(); ++v) {
    if (!vertex_index_.emplace(vertex_names_[v], v).second) {
      throw Error(ErrorCode::duplicate_id, "duplicate vertex id \"" + vertex_names_[v] + "\"");
    }
  }
  out_.resize(vertex_names_.size());
  in_.resize(vertex_names_.size());
  for (const auto& spec : edges) {
    const auto s = find_vertex(spec.src);
    const auto r = find_vertex(spec.rng);
    if (!s || !r) {
      throw Error(ErrorCode::dangling_endpoint,
                  "edge \"" + spec.id + "\" has unknown endpoint \"" + (s ? spec.rng : spec.src) + "\"");
    }
    const auto e = static_cast<Edge>(edges_.size());
    if (!edge_index_.emplace(spec.id, e).second) {
      throw Error(ErrorCode::duplicate_id, "duplicate edge id \"" + spec.id + "\"");
    }
    edges_.push_back({spec.id, *s, *r});
    out_[*s].push_back(e);
    in_[*r].push_back(e);
  }
}

std::optional<Vertex> Graph::find_vertex(std::string_view name) const {
  auto it = vertex_index_.find(std::string(name));
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Edge> Graph::find_edge(std::string_view name) const {
  auto it = edge_index_.find(std::string(name));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

Vertex Graph::vertex(std::string_view name) const {
  if (auto v = find_vertex(name)) return *v;
  throw Error(ErrorCode::unknown_id, "unknown vertex \"" + std::string(name) + "\"");
}

Edge Graph::edge(std::string_view name) const {
  if (auto e = find_edge(name)) return *e;
  throw Error(ErrorCode::unknown_id, "unknown edge \"" + std::string(name) + "\"");
}

std::vector<Vertex> Graph::sinks() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < vertex_count(); ++v) {
    if (is_sink(v)) out.push_back(v);
  }
  return out;
}

std::vector<Vertex> Graph::sources() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < vertex_count(); ++v) {
    if (is_source(v)) out.push_back(v);
  }
  return out;
}

std::vector<EdgeSpec> Graph::edge_specs() const {
  std::vector<EdgeSpec> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back({e.id, vertex_names_[e.src], vertex_names_[e.rng]});
  return out;
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.vertex_names_ != b.vertex_names_ || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const auto& x = a.edges_[i];
    const auto& y = b.edges_[i];
    if (x.id != y.id || x.src != y.src || x.rng != y.rng) return false;
  }
  return true;
}

namespace {

using nlohmann::json;

std::string line_context(std::string_view document, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, document.size()); ++i) {
    if (document[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const std::string& expect_string(const json& j, const std::string& where) {
  if (!j.is_string()) {
    throw Error(ErrorCode::schema, where + ": expected a string, got " + j.dump());
  }
  return j.get_ref<const std::string&>();
}

}  // namespace

Graph parse_graph(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::malformed_json,
                "malformed JSON at " + line_context(document, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::schema, "graph document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "vertices" && key != "edges") {
      throw Error(ErrorCode::schema, "unexpected key \"" + key + "\"");
    }
  }
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw Error(ErrorCode::schema, "\"vertices\" must be an array of strings");
  }
  if (!doc.contains("edges") || !doc["edges"].is_array()) {
    throw Error(ErrorCode::schema, "\"edges\" must be an array of objects");
  }
  std::vector<std::string> vertices;
  for (const auto& v : doc["vertices"]) vertices.push_back(expect_string(v, "vertices[]"));
  std::vector<EdgeSpec> edges;
  for (const auto& e : doc["edges"]) {
    if (!e.is_object()) throw Error(ErrorCode::schema, "edge entry must be an object, got " + e.dump());
    for (const auto& [key, value] : e.items()) {
      if (key != "id" && key != "src" && key != "rng") {
        throw Error(ErrorCode::schema, "unexpected edge key \"" + key + "\"");
      }
    }
    if (!e.contains("id") || !e.contains("src") || !e.contains("rng")) {
      throw Error(ErrorCode::schema, "edge needs \"id\", \"src\" and \"rng\": " + e.dump());
    }
    edges.push_back({expect_string(e["id"], "edges[].id"), expect_string(e["src"], "edges[].src"),
                     expect_string(e["rng"], "edges[].rng")});
  }
  return Graph(std::move(vertices), edges);
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_argument, "cannot open graph file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_graph(buffer.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::string serialize_graph(const Graph& g) {
  json doc;
  doc["vertices"] = g.vertex_names();
  doc["edges"] = json::array();
  for (const auto& e : g.edge_specs()) {
    doc["edges"].push_back({{"id", e.id}, {"src", e.src}, {"rng", e.rng}});
  }
  return doc.dump();
}

AdjacencyMatrix AdjacencyMatrix::submatrix(std::span<const Vertex> vertices) const {
  AdjacencyMatrix sub(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = 0; j < vertices.size(); ++j) {
      sub.at(static_cast<Vertex>(i), static_cast<Vertex>(j)) = (*this)(vertices[i], vertices[j]);
    }
  }
  return sub;
}

bool AdjacencyMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](auto v) { return v == 0; });
}

AdjacencyMatrix adjacency(const Graph& g) {
  AdjacencyMatrix a(g.vertex_count());
  for (Edge e = 0; e < g.edge_count(); ++e) ++a.at(g.rng(e), g.src(e));
  return a;
}

ComponentPartition scc(const AdjacencyMatrix& a) {
  // Tarjan, iterative. The edge w -> v exists when A[v][w] > 0.
  const std::size_t n = a.size();
  constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<Vertex> stack;
  std::vector<std::vector<Vertex>> found;
  std::size_t counter = 0;

  for (Vertex root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    std::vector<std::pair<Vertex, Vertex>> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [w, next] = frames.back();
      if (next < n) {
        const Vertex v = next++;
        if (a(v, w) == 0) continue;
        if (index[v] == unvisited) {
          index[v] = low[v] = counter++;
          stack.push_back(v);
          on_stack[v] = true;
          frames.emplace_back(v, 0);
        } else if (on_stack[v]) {
          low[w] = std::min(low[w], index[v]);
        }
        continue;
      }
      const Vertex done = w;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<Vertex> cls;
        Vertex top;
        do {
          top = stack.back();
          stack.pop_back();
          on_stack[top] = false;
          cls.push_back(top);
        } while (top != done);
        std::sort(cls.begin(), cls.end());
        found.push_back(std::move(cls));
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });

  ComponentPartition p;
  p.class_of.assign(n, 0);
  for (std::size_t c = 0; c < found.size(); ++c) {
    for (auto v : found[c]) p.class_of[v] = c;
    const bool cyclic = found[c].size() > 1 || a(found[c][0], found[c][0]) > 0;
    p.nontrivial.push_back(cyclic);
  }
  p.classes = std::move(found);
  return p;
}

ComponentPartition scc(const Graph& g) { return scc(adjacency(g)); }

namespace {

// Collatz-Wielandt iteration on I + A_C, which is primitive for irreducible A_C.
RadiusBounds irreducible_bounds(const AdjacencyMatrix& c, double tol) {
  const std::size_t n = c.size();
  if (n == 1) {
    const double r = static_cast<double>(c(0, 0));
    return {r, r};
  }
  std::vector<double> y(n, 1.0), z(n);
  RadiusBounds best{0.0, std::numeric_limits<double>::infinity()};
  for (int iter = 0; iter < 1'000'000; ++iter) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = y[i];
      for (std::size_t j = 0; j < n; ++j) s += static_cast<double>(c(i, j)) * y[j];
      z[i] = s;
      lo = std::min(lo, s / y[i]);
      hi = std::max(hi, s / y[i]);
      top = std::max(top, s);
    }
    best.lower = std::max(best.lower, lo - 1.0);
    best.upper = std::min(best.upper, hi - 1.0);
    if (best.upper - best.lower <= tol) break;
    for (std::size_t i = 0; i < n; ++i) y[i] = z[i] / top;
  }
  return best;
}

}  // namespace

RadiusBounds perron_bounds(const AdjacencyMatrix& a, double tol) {
  if (!(tol > 0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
  const auto parts = scc(a);
  RadiusBounds result;
  for (std::size_t c = 0; c < parts.classes.size(); ++c) {
    if (!parts.nontrivial[c]) continue;
    const auto b = irreducible_bounds(a.submatrix(parts.classes[c]), tol);
    result.lower = std::max(result.lower, b.lower);
    result.upper = std::max(result.upper, b.upper);
  }
  return result;
}

double spectral_radius_estimate(const AdjacencyMatrix& a, double tol) {
  const auto b = perron_bounds(a, tol);
  return 0.5 * (b.lower + b.upper);
}

std::string LogRadius::to_string() const {
  if (negative_infinity) return "-inf";
  std::ostringstream os;
  os.precision(12);
  os << value;
  return os.str();
}

LogRadius log_spectral_radius(const AdjacencyMatrix& a, double tol) {
  const double rho = spectral_radius_estimate(a, tol);
  if (rho == 0.0) return {};
  return {false, std::log(rho)};
}

namespace {

// q I - p A for x = p/q; its leading minors have the signs of those of I - xA.
std::vector<std::vector<Integer>> scaled_resolvent_matrix(const AdjacencyMatrix& a, const Rational& x) {
  const std::size_t n = a.size();
  std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Integer entry = -x.get_num() * Integer(static_cast<unsigned long>(a(static_cast<Vertex>(i), static_cast<Vertex>(j))));
      if (i == j) entry += x.get_den();
      m[i][j] = entry;
    }
  }
  return m;
}

std::strong_ordering compare_irreducible(const AdjacencyMatrix& c, const Rational& x) {
  auto m = scaled_resolvent_matrix(c, x);
  if (leading_minors_positive(m)) return std::strong_ordering::less;
  RationalMatrix r(c.size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) r(i, j) = Rational(m[i][j]);
  }
  // x rho = 1 iff I - xA_C has a one-dimensional kernel spanned by a positive vector.
  const auto kernel = nullspace(std::move(r));
  if (kernel.size() == 1) {
    const auto& k = kernel.front();
    const bool positive = std::all_of(k.begin(), k.end(), [](const Rational& v) { return v > 0; });
    const bool negative = std::all_of(k.begin(), k.end(), [](const Rational& v) { return v < 0; });
    if (positive || negative) return std::strong_ordering::equal;
  }
  return std::strong_ordering::greater;
}

}  // namespace

bool is_subcritical(const AdjacencyMatrix& a, const Rational& x) {
  if (x <= 0) throw Error(ErrorCode::invalid_argument, "x must be positive");
  return leading_minors_positive(scaled_resolvent_matrix(a, x));
}

std::strong_ordering compare_scaled_radius(const AdjacencyMatrix& a, const Rational& x) {
  if (x <= 0) throw Error(ErrorCode::invalid_argument, "x must be positive");
  if (is_subcritical(a, x)) return std::strong_ordering::less;
  const auto parts = scc(a);
  auto result = std::strong_ordering::less;
  for (std::size_t c = 0; c < parts.classes.size(); ++c) {
    if (!parts.nontrivial[c]) continue;
    const auto cmp = compare_irreducible(a.submatrix(parts.classes[c]), x);
    if (cmp == std::strong_ordering::greater) return cmp;
    if (cmp == std::strong_ordering::equal) result = cmp;
  }
  return result;
}

std::vector<Vertex> hereditary_set(const Graph& g, const Rational& x) {
  const auto a = adjacency(g);
  const auto parts = scc(a);
  std::vector<bool> member(g.vertex_count(), false);
  std::vector<Vertex> frontier;
  for (std::size_t c = 0; c < parts.classes.size(); ++c) {
    if (!parts.nontrivial[c]) continue;
    if (compare_irreducible(a.submatrix(parts.classes[c]), x) != std::strong_ordering::greater) continue;
    for (auto v : parts.classes[c]) {
      if (!member[v]) {
        member[v] = true;
        frontier.push_back(v);
      }
    }
  }
  while (!frontier.empty()) {
    const Vertex v = frontier.back();
    frontier.pop_back();
    for (auto e : g.edges_into(v)) {
      const Vertex w = g.src(e);
      if (!member[w]) {
        member[w] = true;
        frontier.push_back(w);
      }
    }
  }
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (member[v]) out.push_back(v);
  }
  return out;
}

std::vector<Vertex> hereditary_set(const Graph& g, double beta) {
  return hereditary_set(g, rational_from_double(std::exp(-beta)));
}

std::vector<Integer> path_counts(const AdjacencyMatrix& a, unsigned n) {
  const std::size_t size = a.size();
  std::vector<Integer> counts(size, Integer(1));
  for (unsigned step = 0; step < n; ++step) {
    std::vector<Integer> next(size, Integer(0));
    for (std::size_t w = 0; w < size; ++w) {
      for (std::size_t v = 0; v < size; ++v) {
        const auto entry = a(static_cast<Vertex>(v), static_cast<Vertex>(w));
        if (entry != 0) next[w] += counts[v] * Integer(static_cast<unsigned long>(entry));
      }
    }
    counts = std::move(next);
  }
  return counts;
}

Integer path_count(const Graph& g, unsigned n, Vertex v) {
  if (v >= g.vertex_count()) throw Error(ErrorCode::unknown_id, "unknown vertex index " + std::to_string(v));
  return path_counts(adjacency(g), n)[v];
}

namespace {

struct VertexSignature {
  std::uint64_t loops = 0;
  std::vector<std::uint64_t> out_multiplicities;
  std::vector<std::uint64_t> in_multiplicities;

  auto operator<=>(const VertexSignature&) const = default;
};

std::vector<VertexSignature> signatures(const AdjacencyMatrix& a) {
  const std::size_t n = a.size();
  std::vector<VertexSignature> s(n);
  for (Vertex v = 0; v < n; ++v) {
    s[v].loops = a(v, v);
    for (Vertex w = 0; w < n; ++w) {
      if (w == v) continue;
      if (a(w, v) != 0) s[v].out_multiplicities.push_back(a(w, v));
      if (a(v, w) != 0) s[v].in_multiplicities.push_back(a(v, w));
    }
    std::sort(s[v].out_multiplicities.begin(), s[v].out_multiplicities.end());
    std::sort(s[v].in_multiplicities.begin(), s[v].in_multiplicities.end());
  }
  return s;
}

class IsoSearch {
 public:
  IsoSearch(const Graph& g, const Graph& h, std::uint64_t budget)
      : a_(adjacency(g)), b_(adjacency(h)), budget_(budget) {
    const std::size_t n = a_.size();
    const auto sg = signatures(a_);
    const auto sh = signatures(b_);
    candidates_.resize(n);
    for (Vertex v = 0; v < n; ++v) {
      const auto same_name = h.find_vertex(g.vertex_name(v));
      if (same_name && sg[v] == sh[*same_name]) candidates_[v].push_back(*same_name);
      for (Vertex w = 0; w < n; ++w) {
        if (sg[v] == sh[w] && (!same_name || w != *same_name)) candidates_[v].push_back(w);
      }
    }
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), Vertex{0});
    std::stable_sort(order_.begin(), order_.end(), [&](Vertex x, Vertex y) {
      return candidates_[x].size() < candidates_[y].size();
    });
    image_.assign(n, kUnset);
    used_.assign(n, false);
  }

  IsoResult run() {
    IsoResult result;
    const bool ok = extend(0);
    result.nodes = nodes_;
    if (exhausted_) {
      result.status = IsoStatus::budget_exceeded;
    } else if (ok) {
      result.status = IsoStatus::isomorphic;
      result.bijection = image_;
    }
    return result;
  }

 private:
  static constexpr Vertex kUnset = std::numeric_limits<Vertex>::max();

  bool consistent(Vertex v, Vertex w, std::size_t depth) const {
    if (a_(v, v) != b_(w, w)) return false;
    for (std::size_t i = 0; i < depth; ++i) {
      const Vertex u = order_[i];
      const Vertex x = image_[u];
      if (a_(v, u) != b_(w, x) || a_(u, v) != b_(x, w)) return false;
    }
    return true;
  }

  bool extend(std::size_t depth) {
    if (depth == order_.size()) return true;
    const Vertex v = order_[depth];
    for (Vertex w : candidates_[v]) {
      if (used_[w]) continue;
      if (++nodes_ > budget_) {
        exhausted_ = true;
        return false;
      }
      if (!consistent(v, w, depth)) continue;
      image_[v] = w;
      used_[w] = true;
      if (extend(depth + 1)) return true;
      used_[w] = false;
      image_[v] = kUnset;
      if (exhausted_) return false;
    }
    return false;
  }

  AdjacencyMatrix a_;
  AdjacencyMatrix b_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  std::vector<std::vector<Vertex>> candidates_;
  std::vector<Vertex> order_;
  std::vector<Vertex> image_;
  std::vector<bool> used_;
};

}  // namespace

IsoResult graph_isomorphic(const Graph& g, const Graph& h, std::uint64_t budget) {
  if (g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count()) return {};
  auto sg = signatures(adjacency(g));
  auto sh = signatures(adjacency(h));
  std::sort(sg.begin(), sg.end());
  std::sort(sh.begin(), sh.end());
  if (sg != sh) return {};
  return IsoSearch(g, h, budget).run();
}

}  // namespace tgl
