#include "tgl/report.hpp"

#include <cmath>
#include <sstream>

namespace tgl {

Json operator_to_json(const TruncatedOperator& op) {
  Json rows = Json::array();
  Json cols = Json::array();
  Json vals = Json::array();
  for (const auto& [j, c] : op.columns()) {
    for (const auto& [i, v] : c) {
      rows.push_back(i);
      cols.push_back(j);
      vals.push_back(to_string(v));
    }
  }
  Json out;
  out["rows"] = std::move(rows);
  out["cols"] = std::move(cols);
  out["vals"] = std::move(vals);
  return out;
}

Json graph_to_json(const Graph& g) {
  Json out;
  out["vertices"] = g.vertex_names();
  out["edges"] = Json::array();
  for (const auto& e : g.edge_specs()) out["edges"].push_back({{"id", e.id}, {"src", e.src}, {"rng", e.rng}});
  return out;
}

std::string format_real(double value) {
  if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
  std::ostringstream os;
  os.precision(12);
  os << value;
  return os.str();
}

}  // namespace tgl
