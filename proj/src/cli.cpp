#include "tgl/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "tgl/counterexamples.hpp"
#include "tgl/graph.hpp"
#include "tgl/kms.hpp"
#include "tgl/pathspace.hpp"
#include "tgl/reconstruction.hpp"
#include "tgl/report.hpp"

namespace tgl {

namespace {

struct RunConfig {
  std::string graph_path;
  std::string x_text;
  std::size_t truncation = 4;
  double beta_start = 0.0;
  double beta_stop = 1.0;
  double beta_step = 0.05;
  bool beta_given = false;
  std::uint64_t seed = 42;
  std::string out_path;
  std::string scramble;
  std::string variant = "m";
  std::string which;
  int degree = -1;
  bool human = false;
  bool dump = false;
};

struct Output {
  int exit_code = exit_ok;
  std::string text;
  std::string note;
};

Json real(double v) {
  if (!std::isfinite(v)) return format_real(v);
  return std::stod(format_real(v));
}

Json integer_json(const Integer& n) { return n.fits_ulong_p() ? Json(n.get_ui()) : Json(n.get_str()); }

Rational parse_x(const std::string& text) {
  const Rational x = parse_rational(text);
  if (x <= 0 || x >= 1) throw Error(ErrorCode::invalid_argument, "--x must lie in (0, 1), got " + text);
  return x;
}

Rational choose_x(const RunConfig& cfg, const Graph& g) {
  return cfg.x_text.empty() ? default_subcritical_x(adjacency(g)) : parse_x(cfg.x_text);
}

Json names(const Graph& g, const std::vector<Vertex>& vs) {
  Json out = Json::array();
  for (auto v : vs) out.push_back(g.vertex_name(v));
  return out;
}

std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream out;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i + 1 < r.size()) {
        out << std::left << std::setw(static_cast<int>(width[i]) + 2) << r[i];
      } else {
        out << r[i];
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

Output cmd_analyze(const RunConfig& cfg) {
  const Graph g = load_graph(cfg.graph_path);
  const auto a = adjacency(g);
  const auto parts = scc(a);
  Json report;
  report["vertices"] = g.vertex_count();
  report["edges"] = g.edge_count();
  report["components"] = Json::array();
  std::vector<std::vector<std::string>> rows{{"component", "vertices", "rho"}};
  for (std::size_t c = 0; c < parts.classes.size(); ++c) {
    const double rho = parts.nontrivial[c] ? spectral_radius_estimate(a.submatrix(parts.classes[c]), 1e-12) : 0.0;
    report["components"].push_back(
        {{"vertices", names(g, parts.classes[c])}, {"nontrivial", parts.nontrivial[c]}, {"rho", real(rho)}});
    std::string members;
    for (auto v : parts.classes[c]) members += (members.empty() ? "" : ",") + g.vertex_name(v);
    rows.push_back({std::to_string(c), members, format_real(rho)});
  }
  const double rho = spectral_radius_estimate(a, 1e-12);
  const auto log_rho = log_spectral_radius(a);
  report["spectral_radius"] = real(rho);
  report["log_spectral_radius"] = log_rho.negative_infinity ? Json("-inf") : real(log_rho.value);
  report["critical_x"] = rho > 0 ? real(1.0 / rho) : Json("inf");
  report["sinks"] = names(g, g.sinks());
  report["sources"] = names(g, g.sources());
  Json counts = Json::object();
  std::vector<std::vector<std::string>> count_rows{{"vertex", "n=0", "n=1", "n=2", "n=3"}};
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    Json row = Json::array();
    std::vector<std::string> text{g.vertex_name(v)};
    for (unsigned n = 0; n <= 3; ++n) {
      const auto c = path_count(g, n, v);
      row.push_back(integer_json(c));
      text.push_back(c.get_str());
    }
    counts[g.vertex_name(v)] = std::move(row);
    count_rows.push_back(std::move(text));
  }
  report["path_counts"] = std::move(counts);
  if (!cfg.human) return {exit_ok, json_text(report), ""};
  std::ostringstream out;
  out << "vertices " << g.vertex_count() << ", edges " << g.edge_count() << "\n";
  out << "rho(A) " << format_real(rho) << ", log rho " << log_rho.to_string() << "\n";
  std::string sinks;
  for (auto v : g.sinks()) sinks += " " + g.vertex_name(v);
  std::string sources;
  for (auto v : g.sources()) sources += " " + g.vertex_name(v);
  out << "sinks:" << (sinks.empty() ? " none" : sinks) << "\n";
  out << "sources:" << (sources.empty() ? " none" : sources) << "\n\n";
  out << table(rows) << "\n|E^n v|\n" << table(count_rows);
  return {exit_ok, out.str(), ""};
}

Output kms_states(const RunConfig& cfg, const Graph& g) {
  const Rational x = parse_x(cfg.x_text);
  const auto states = extremal_states(g, x);
  Json report;
  report["x"] = to_string(x);
  report["beta"] = real(-std::log(x.get_d()));
  report["states"] = Json::array();
  std::vector<std::vector<std::string>> rows{{"state", "Z"}};
  for (Vertex w = 0; w < g.vertex_count(); ++w) rows.front().push_back("phi(q_" + g.vertex_name(w) + ")");
  bool unital = true;
  for (const auto& s : states) {
    Json values = Json::object();
    Rational total = 0;
    std::vector<std::string> row{g.vertex_name(s.vertex), to_string(s.partition)};
    for (Vertex w = 0; w < g.vertex_count(); ++w) {
      const Rational value = state_on_monomial(s, vertex_monomial(w));
      values["q_" + g.vertex_name(w)] = to_string(value);
      row.push_back(to_string(value));
      total += value;
    }
    unital = unital && total == 1;
    report["states"].push_back(
        {{"vertex", g.vertex_name(s.vertex)}, {"partition", to_string(s.partition)}, {"values", std::move(values)}});
    rows.push_back(std::move(row));
  }
  report["unital"] = unital;
  return {unital ? exit_ok : exit_check_failed, cfg.human ? table(rows) : json_text(report), ""};
}

Output kms_profile(const RunConfig& cfg, const Graph& g) {
  const auto grid = beta_grid(cfg.beta_start, cfg.beta_stop, cfg.beta_step);
  const auto profile = count_profile(g, grid);
  const auto detection = detect_critical_beta(profile);
  std::ostringstream csv;
  csv << "beta,count,kind,critical\n";
  for (std::size_t i = 0; i < profile.entries.size(); ++i) {
    const auto& e = profile.entries[i];
    const bool critical = detection.outcome == CriticalDetection::Outcome::interval &&
                          (i == detection.lower_index || i == detection.lower_index + 1);
    csv << format_real(e.beta) << ',' << e.count << ',' << to_string(e.kind) << ',' << (critical ? 1 : 0) << '\n';
  }
  std::string note;
  switch (detection.outcome) {
    case CriticalDetection::Outcome::interval:
      note = "critical beta in [" + format_real(detection.lower) + ", " + format_real(detection.upper) + "]\n";
      break;
    case CriticalDetection::Outcome::stabilized_everywhere:
      note = "stabilized everywhere\n";
      break;
    case CriticalDetection::Outcome::not_bracketed:
      note = "critical beta not bracketed by the grid\n";
      break;
  }
  if (!cfg.human) return {exit_ok, csv.str(), note};
  std::vector<std::vector<std::string>> rows{{"beta", "count", "kind", "critical"}};
  for (std::size_t i = 0; i < profile.entries.size(); ++i) {
    const auto& e = profile.entries[i];
    const bool critical = detection.outcome == CriticalDetection::Outcome::interval &&
                          (i == detection.lower_index || i == detection.lower_index + 1);
    rows.push_back({format_real(e.beta), std::to_string(e.count), to_string(e.kind), critical ? "*" : ""});
  }
  return {exit_ok, table(rows) + note, ""};
}

Output cmd_kms(const RunConfig& cfg) {
  const Graph g = load_graph(cfg.graph_path);
  if (!cfg.x_text.empty()) {
    auto out = kms_states(cfg, g);
    if (cfg.beta_given) {
      auto profile = kms_profile(cfg, g);
      out.text += profile.text;
      out.note += profile.note;
    }
    return out;
  }
  return kms_profile(cfg, g);
}

std::string reconstruction_human(const ReconstructionResult& r) {
  std::ostringstream out;
  out << "x = " << to_string(r.params.x) << ", L = " << r.params.truncation << ", seed = " << r.params.seed << "\n";
  std::vector<std::vector<std::string>> rows{{"N(phi,psi)"}};
  for (const auto& id : r.reconstructed.state_ids) rows.front().push_back(id);
  for (std::size_t phi = 0; phi < r.states.size(); ++phi) {
    std::vector<std::string> row{r.reconstructed.state_ids[phi]};
    for (auto n : r.reconstructed.multiplicity[phi]) row.push_back(std::to_string(n));
    rows.push_back(std::move(row));
  }
  out << table(rows);
  if (r.reference_iso) {
    out << "isomorphic to reference: " << (r.reference_iso->found() ? "yes" : "no") << "\n";
    for (std::size_t i = 0; i < r.reference_match.size(); ++i) {
      out << "  " << r.reconstructed.state_ids[i] << " -> " << r.reference_match[i] << "\n";
    }
  }
  return out.str();
}

Output cmd_reconstruct(const RunConfig& cfg) {
  std::optional<Graph> ambient;
  std::optional<Graph> reference;
  std::optional<MSubalgebraPresentation> m;
  BasisPtr basis;
  if (!cfg.scramble.empty()) {
    if (cfg.scramble != "example21") {
      throw Error(ErrorCode::invalid_argument, "unknown --scramble value '" + cfg.scramble + "'");
    }
    if (cfg.variant != "m") throw Error(ErrorCode::invalid_argument, "--scramble applies to --variant m only");
    const auto ex = build_example_2_1();
    ambient = ex.f;
    reference = ex.e;
    basis = reconstruction_basis(*ambient, cfg.truncation);
    m.emplace(ex.map.q(basis));
  } else {
    if (cfg.graph_path.empty()) throw Error(ErrorCode::invalid_argument, "reconstruct needs a graph file");
    ambient = load_graph(cfg.graph_path);
    reference = *ambient;
  }
  ReconstructionParams params;
  params.x = choose_x(cfg, *ambient);
  params.seed = cfg.seed;
  ReconstructionResult r;
  if (cfg.variant == "m") {
    if (!basis) basis = reconstruction_basis(*ambient, cfg.truncation);
    if (!m) m.emplace(canonical_m(basis));
    r = reconstruct_with_M(basis, *m, params, &*reference);
  } else if (cfg.variant == "kappa") {
    basis = reconstruction_basis(*ambient, cfg.truncation);
    r = reconstruct_with_kappa(basis, params, &*reference);
  } else {
    throw Error(ErrorCode::invalid_argument, "--variant must be m or kappa");
  }
  Json report;
  report["variant"] = cfg.variant;
  if (!cfg.scramble.empty()) report["scramble"] = cfg.scramble;
  auto body = reconstruction_to_json(r, *ambient);
  for (auto& [k, v] : body.items()) report[k] = v;
  const bool ok = r.reference_iso && r.reference_iso->found();
  return {ok ? exit_ok : exit_check_failed, cfg.human ? reconstruction_human(r) : json_text(report), ""};
}

Output cmd_counterexample(const RunConfig& cfg) {
  VerificationReport r;
  if (cfg.which == "2.1") {
    r = verify_example_2_1(cfg.truncation);
  } else if (cfg.which == "3.7") {
    r = verify_example_3_7(cfg.truncation);
  } else {
    throw Error(ErrorCode::invalid_argument, "counterexample must be 2.1 or 3.7, got '" + cfg.which + "'");
  }
  const int code = r.passed() ? exit_ok : exit_check_failed;
  if (!cfg.human) return {code, json_text(r.to_json()), ""};
  std::ostringstream out;
  out << "Example " << r.example << " at L = " << r.truncation << "\n";
  for (const auto& c : r.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << "\n";
  }
  return {code, out.str(), ""};
}

Output cmd_check(const RunConfig& cfg) {
  const Graph g = load_graph(cfg.graph_path);
  const auto basis = make_basis(g, cfg.truncation);
  std::vector<int> degrees;
  if (cfg.degree >= 0) {
    if (cfg.degree > static_cast<int>(cfg.truncation) - 1) {
      throw Error(ErrorCode::truncation_too_small, "truncation too small: n = " + std::to_string(cfg.degree) +
                                                       " needs L >= " + std::to_string(cfg.degree + 1));
    }
    degrees.push_back(cfg.degree);
  } else {
    for (int n = 0; n <= std::min<int>(3, static_cast<int>(cfg.truncation) - 1); ++n) degrees.push_back(n);
  }
  const auto family = canonical_family(basis);
  const auto tck = verify_tck(family.q, family.t, g);
  Json report;
  report["L"] = cfg.truncation;
  report["tck"] = {{"projections", tck.projections},
                   {"isometries", tck.isometries},
                   {"positivity", tck.positivity},
                   {"failures", tck.failures}};
  report["corner_dimensions"] = Json::array();
  bool all_equal = true;
  std::vector<std::vector<std::string>> rows{{"vertex", "n", "dim", "|E^n v|"}};
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const auto d = delta(basis, vertex_path(v));
    for (int n : degrees) {
      const auto dim = corner_basis(basis, n, d).dim;
      const auto count = path_count(g, static_cast<unsigned>(n), v);
      const bool equal = count == static_cast<unsigned long>(dim);
      all_equal = all_equal && equal;
      report["corner_dimensions"].push_back(
          {{"vertex", g.vertex_name(v)}, {"n", n}, {"dim", dim}, {"path_count", integer_json(count)}, {"equal", equal}});
      rows.push_back({g.vertex_name(v), std::to_string(n), std::to_string(dim), count.get_str()});
    }
  }
  const bool passed = tck.passed() && all_equal;
  report["passed"] = passed;
  if (cfg.dump) {
    Json q = Json::object(), t = Json::object();
    for (Vertex v = 0; v < g.vertex_count(); ++v) q[g.vertex_name(v)] = operator_to_json(family.q[v]);
    for (Edge e = 0; e < g.edge_count(); ++e) t[g.edge_name(e)] = operator_to_json(family.t[e]);
    report["operators"] = {{"q", q}, {"t", t}};
  }
  const int code = passed ? exit_ok : exit_check_failed;
  if (!cfg.human) return {code, json_text(report), ""};
  std::ostringstream out;
  out << "TCK relations: " << (tck.passed() ? "pass" : "FAIL") << "\n";
  for (const auto& f : tck.failures) out << "  " << f << "\n";
  out << "corner dimensions: " << (all_equal ? "pass" : "FAIL") << "\n" << table(rows);
  return {code, out.str(), ""};
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::supercritical:
      return exit_supercritical;
    case ErrorCode::sinks_present:
      return exit_sinks_present;
    case ErrorCode::basis_cap:
    case ErrorCode::span_cap:
    case ErrorCode::search_budget:
      return exit_budget;
    case ErrorCode::tie:
    case ErrorCode::domination:
    case ErrorCode::non_integer_quotient:
    case ErrorCode::postcondition:
    case ErrorCode::grid_not_bracketed:
      return exit_check_failed;
    default:
      return exit_usage;
  }
}

CommandResult run_cli(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"Exact KMS, spectral-subspace and reconstruction computations for Toeplitz algebras of graphs", "tgl"};
  app.require_subcommand(1);

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--out", cfg.out_path, "Write the report to this file");
    sub->add_flag("--human", cfg.human, "Tabular text instead of JSON");
  };
  auto add_truncation = [&cfg](CLI::App* sub) {
    sub->add_option("--L", cfg.truncation, "Truncation length")->capture_default_str();
  };

  auto* analyze = app.add_subcommand("analyze", "Components, spectral radius, sinks, sources and path counts");
  analyze->add_option("graph", cfg.graph_path, "Graph JSON file")->required();
  add_common(analyze);

  auto* kms = app.add_subcommand("kms", "Extremal KMS states at --x, or the state-count profile over a beta grid");
  kms->add_option("graph", cfg.graph_path, "Graph JSON file")->required();
  kms->add_option("--x", cfg.x_text, "x = exp(-beta) as p/q");
  auto* bs = kms->add_option("--beta-start", cfg.beta_start, "First beta of the grid")->capture_default_str();
  auto* be = kms->add_option("--beta-stop", cfg.beta_stop, "Last beta of the grid")->capture_default_str();
  auto* bt = kms->add_option("--beta-step", cfg.beta_step, "Grid step")->capture_default_str();
  add_common(kms);

  auto* reconstruct = app.add_subcommand("reconstruct", "Recover the graph from its invariants");
  reconstruct->add_option("graph", cfg.graph_path, "Graph JSON file");
  reconstruct->add_option("--variant", cfg.variant, "m or kappa")->capture_default_str();
  reconstruct->add_option("--x", cfg.x_text, "x = exp(-beta) as p/q (default: a subcritical value)");
  reconstruct->add_option("--seed", cfg.seed, "Seed for random candidate projections")->capture_default_str();
  reconstruct->add_option("--scramble", cfg.scramble, "Use a scrambled subalgebra (example21)");
  add_truncation(reconstruct);
  add_common(reconstruct);

  auto* counterexample = app.add_subcommand("counterexample", "Verify Example 2.1 or 3.7");
  counterexample->add_option("which", cfg.which, "2.1 or 3.7")->required();
  add_truncation(counterexample);
  add_common(counterexample);

  auto* check = app.add_subcommand("check", "Toeplitz-Cuntz-Krieger relations and corner dimensions");
  check->add_option("graph", cfg.graph_path, "Graph JSON file")->required();
  check->add_option("--n", cfg.degree, "Only this gauge degree");
  check->add_flag("--dump", cfg.dump, "Include the generator matrices as triplet lists");
  add_truncation(check);
  add_common(check);

  CommandResult result;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out;
    std::ostringstream err;
    result.exit_code = app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
    result.out = out.str();
    result.err = err.str();
    return result;
  }
  cfg.beta_given = bs->count() + be->count() + bt->count() > 0;

  try {
    if (cfg.truncation < 2) throw Error(ErrorCode::invalid_argument, "--L must be at least 2");
    if (!(cfg.beta_step > 0)) throw Error(ErrorCode::invalid_argument, "--beta-step must be positive");
    Output output;
    if (*analyze) output = cmd_analyze(cfg);
    else if (*kms) output = cmd_kms(cfg);
    else if (*reconstruct) output = cmd_reconstruct(cfg);
    else if (*counterexample) output = cmd_counterexample(cfg);
    else output = cmd_check(cfg);
    result.exit_code = output.exit_code;
    result.err = output.note;
    if (cfg.out_path.empty()) {
      result.out = std::move(output.text);
    } else {
      std::ofstream file(cfg.out_path, std::ios::binary);
      if (!file) throw Error(ErrorCode::invalid_argument, "cannot write " + cfg.out_path);
      file << output.text;
    }
  } catch (const Error& e) {
    result.exit_code = exit_code_for(e.code());
    result.err = std::string("error [") + to_string(e.code()) + "]: " + e.what() + "\n";
  }
  return result;
}

}  // namespace tgl
