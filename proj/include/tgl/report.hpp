#pragma once

#include <string>

#include <json.hpp>

#include "tgl/graph.hpp"
#include "tgl/operator.hpp"

namespace tgl {

using Json = nlohmann::ordered_json;

/// {"rows": [...], "cols": [...], "vals": ["p/q", ...]}, column-major order.
Json operator_to_json(const TruncatedOperator& op);

Json graph_to_json(const Graph& g);

/// Fixed 12 significant digits, as used in every emitted report.
std::string format_real(double value);

}  // namespace tgl
