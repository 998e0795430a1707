#include "cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "graphbec/errors.hpp"
#include "graphbec/statistics.hpp"
#include "graphbec/tonks.hpp"

namespace graphbec::cli {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& message) {
  throw ConfigError("SchemaError", path, message);
}

[[noreturn]] void validation_error(const std::string& path, const std::string& message) {
  throw ConfigError("ValidationError", path, message);
}

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
}

void check_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  require_object(j, path);
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      schema_error(join(path, item.key()), "unknown key '" + item.key() + "'");
    }
  }
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(path, "expected a finite number");
  return v;
}

double number(const json& obj, std::string_view key, const std::string& path,
              std::optional<double> fallback = std::nullopt) {
  const std::string p = join(path, key);
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    schema_error(p, "missing required key");
  }
  return number_at(obj.at(std::string(key)), p);
}

double positive(const json& obj, std::string_view key, const std::string& path,
                std::optional<double> fallback = std::nullopt) {
  const double v = number(obj, key, path, fallback);
  if (!(v > 0.0)) validation_error(join(path, key), "must be positive");
  return v;
}

std::vector<double> number_list(const json& obj, std::string_view key, const std::string& path,
                                std::optional<std::vector<double>> fallback = std::nullopt) {
  const std::string p = join(path, key);
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    schema_error(p, "missing required key");
  }
  const json& arr = obj.at(std::string(key));
  if (!arr.is_array() || arr.empty()) schema_error(p, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(number_at(arr[i], index(p, i)));
  return out;
}

std::vector<double> increasing_positive(const json& obj, std::string_view key,
                                        const std::string& path,
                                        std::optional<std::vector<double>> fallback = std::nullopt) {
  auto values = number_list(obj, key, path, std::move(fallback));
  const std::string p = join(path, key);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) validation_error(index(p, i), "must be positive");
    if (i > 0 && !(values[i] > values[i - 1])) validation_error(index(p, i), "must be strictly increasing");
  }
  return values;
}

std::size_t unsigned_at(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    schema_error(path, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

MetricGraph parse_graph(const json& root) {
  if (!root.contains("vertices")) schema_error("vertices", "missing required key");
  if (!root.contains("edges")) schema_error("edges", "missing required key");
  const std::size_t vertices = unsigned_at(root.at("vertices"), "vertices");
  if (vertices == 0) validation_error("vertices", "graph needs at least one vertex");

  const json& arr = root.at("edges");
  if (!arr.is_array() || arr.empty()) schema_error("edges", "expected a non-empty array of edges");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = index("edges", i);
    check_keys(arr[i], p, {"start", "end", "length"});
    for (const char* key : {"start", "end", "length"}) {
      if (!arr[i].contains(key)) schema_error(join(p, key), "missing required key");
    }
    Edge e;
    e.start = unsigned_at(arr[i].at("start"), join(p, "start"));
    e.end = unsigned_at(arr[i].at("end"), join(p, "end"));
    e.length = number_at(arr[i].at("length"), join(p, "length"));
    if (e.start >= vertices) validation_error(join(p, "start"), "vertex index out of range");
    if (e.end >= vertices) validation_error(join(p, "end"), "vertex index out of range");
    if (!(e.length > 0.0)) validation_error(join(p, "length"), "edge length must be positive");
    edges.push_back(e);
  }
  try {
    return MetricGraph(vertices, std::move(edges));
  } catch (const Error& e) {
    validation_error("edges", e.what());
  }
}

ComplexMatrix parse_matrix(const json& j, const std::string& path, std::size_t n) {
  if (!j.is_array()) schema_error(path, "expected a flat row-major array of [re, im] pairs");
  if (j.size() != n * n) {
    validation_error(path, "expected " + std::to_string(n * n) + " entries for a " +
                               std::to_string(n) + "x" + std::to_string(n) + " matrix, got " +
                               std::to_string(j.size()));
  }
  ComplexMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = index(path, i);
    if (!j[i].is_array() || j[i].size() != 2) schema_error(p, "expected [re, im]");
    m(static_cast<Eigen::Index>(i / n), static_cast<Eigen::Index>(i % n)) = {
        number_at(j[i][0], p + "[0]"), number_at(j[i][1], p + "[1]")};
  }
  return m;
}

std::vector<double> parse_strengths(const json& j, const std::string& path, std::size_t vertices) {
  if (j.is_array()) {
    if (j.size() != vertices) {
      validation_error(path, "expected one strength per vertex (" + std::to_string(vertices) + ")");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_at(j[i], index(path, i)));
    return out;
  }
  if (!j.is_object()) schema_error(path, "expected an array or an object with \"default\"");
  std::vector<double> out(vertices, number(j, "default", path, 0.0));
  for (const auto& item : j.items()) {
    if (item.key() == "default") continue;
    std::size_t v = 0;
    const auto [ptr, ec] =
        std::from_chars(item.key().data(), item.key().data() + item.key().size(), v);
    if (ec != std::errc{} || ptr != item.key().data() + item.key().size()) {
      schema_error(join(path, item.key()), "keys must be \"default\" or a vertex index");
    }
    if (v >= vertices) validation_error(join(path, item.key()), "vertex index out of range");
    out[v] = number_at(item.value(), join(path, item.key()));
  }
  return out;
}

void parse_conditions(const json& root, RunConfig& cfg) {
  const MetricGraph& g = *cfg.graph;
  if (!root.contains("conditions")) schema_error("conditions", "missing required key");
  const json& c = root.at("conditions");
  const std::string path = "conditions";
  require_object(c, path);

  if (c.contains("preset")) {
    check_keys(c, path, {"preset", "strengths"});
    if (!c.at("preset").is_string()) schema_error("conditions.preset", "expected a string");
    const std::string name = c.at("preset").get<std::string>();
    cfg.conditions_label = name;
    if (name != "delta" && c.contains("strengths")) {
      schema_error("conditions.strengths", "strengths only apply to the delta preset");
    }
    if (name == "dirichlet") {
      cfg.conditions = preset_dirichlet(g);
    } else if (name == "neumann") {
      cfg.conditions = preset_neumann(g);
    } else if (name == "kirchhoff") {
      cfg.conditions = preset_kirchhoff(g);
    } else if (name == "delta") {
      if (!c.contains("strengths")) schema_error("conditions.strengths", "missing required key");
      const auto strengths = parse_strengths(c.at("strengths"), "conditions.strengths", g.vertex_count());
      cfg.conditions = preset_delta(g, strengths);
    } else {
      schema_error("conditions.preset", "unknown preset '" + name + "'");
    }
    return;
  }

  check_keys(c, path, {"projector", "coupling"});
  if (!c.contains("projector")) schema_error("conditions.projector", "missing required key");
  if (!c.contains("coupling")) schema_error("conditions.coupling", "missing required key");
  const std::size_t n = g.boundary_dimension();
  cfg.conditions.projector = parse_matrix(c.at("projector"), "conditions.projector", n);
  cfg.conditions.coupling = parse_matrix(c.at("coupling"), "conditions.coupling", n);
  cfg.conditions_label = "explicit";
  const auto violations = validate(cfg.conditions, n);
  if (!violations.empty()) {
    const auto& v = violations.front();
    const bool about_coupling = v.kind == ViolationKind::CouplingNotHermitian ||
                                v.kind == ViolationKind::CouplingLeavesKernel;
    std::string message;
    for (const Violation& each : violations) {
      message += (message.empty() ? "" : "; ") + each.message;
    }
    validation_error(about_coupling ? "conditions.coupling" : "conditions.projector", message);
  }
}

void parse_spectral(const json& root, RunConfig& cfg) {
  if (!root.contains("spectral")) return;
  const json& s = root.at("spectral");
  check_keys(s, "spectral", {"max_step", "root_tolerance", "multiplicity_threshold", "verify_with_count"});
  cfg.spectral.max_step = positive(s, "max_step", "spectral", cfg.spectral.max_step);
  cfg.spectral.root_tolerance = positive(s, "root_tolerance", "spectral", cfg.spectral.root_tolerance);
  cfg.spectral.multiplicity_threshold =
      positive(s, "multiplicity_threshold", "spectral", cfg.spectral.multiplicity_threshold);
  if (s.contains("verify_with_count")) {
    if (!s.at("verify_with_count").is_boolean()) {
      schema_error("spectral.verify_with_count", "expected a boolean");
    }
    cfg.spectral.verify_with_count = s.at("verify_with_count").get<bool>();
  }
}

std::vector<double> temperature_grid(const json& j, const std::string& path) {
  if (j.is_array()) {
    json wrapper = {{"t", j}};
    auto values = number_list(wrapper, "t", "");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] > 0.0)) validation_error(index(path, i), "must be positive");
    }
    return values;
  }
  check_keys(j, path, {"min", "max", "step"});
  const double lo = positive(j, "min", path);
  const double hi = positive(j, "max", path);
  const double step = positive(j, "step", path);
  if (!(hi >= lo)) validation_error(join(path, "max"), "must not be below min");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  if (n > 100000) validation_error(join(path, "step"), "grid has too many points");
  std::vector<double> out;
  for (std::size_t i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

void parse_commands(const json& root, RunConfig& cfg) {
  if (root.contains("spectrum")) {
    const json& b = root.at("spectrum");
    check_keys(b, "spectrum", {"e_max"});
    cfg.spectrum = SpectrumParams{positive(b, "e_max", "spectrum")};
  }
  if (root.contains("bec_sweep")) {
    const json& b = root.at("bec_sweep");
    const std::string p = "bec_sweep";
    check_keys(b, p, {"temperature", "density", "etas", "thresholds", "penrose_onsager"});
    BecSweepParams params;
    params.temperature = positive(b, "temperature", p);
    params.density = positive(b, "density", p);
    params.etas = increasing_positive(b, "etas", p, default_etas());
    if (b.contains("thresholds")) {
      const json& t = b.at("thresholds");
      const std::string tp = join(p, "thresholds");
      check_keys(t, tp, {"vanishing", "persistent", "monotone_slack"});
      params.thresholds.vanishing = positive(t, "vanishing", tp, params.thresholds.vanishing);
      params.thresholds.persistent = positive(t, "persistent", tp, params.thresholds.persistent);
      params.thresholds.monotone_slack =
          positive(t, "monotone_slack", tp, params.thresholds.monotone_slack);
    }
    if (b.contains("penrose_onsager")) {
      if (!b.at("penrose_onsager").is_boolean()) {
        schema_error(join(p, "penrose_onsager"), "expected a boolean");
      }
      params.penrose_onsager = b.at("penrose_onsager").get<bool>();
    }
    cfg.bec_sweep = params;
  }
  if (root.contains("tc_estimate")) {
    const json& b = root.at("tc_estimate");
    const std::string p = "tc_estimate";
    check_keys(b, p, {"eta", "density", "temperatures", "threshold"});
    TcEstimateParams params;
    params.eta = positive(b, "eta", p, params.eta);
    params.density = positive(b, "density", p);
    if (!b.contains("temperatures")) schema_error(join(p, "temperatures"), "missing required key");
    params.temperatures = temperature_grid(b.at("temperatures"), join(p, "temperatures"));
    params.threshold = positive(b, "threshold", p, params.threshold);
    cfg.tc_estimate = params;
  }
  if (root.contains("tonks_free_energy")) {
    const json& b = root.at("tonks_free_energy");
    const std::string p = "tonks_free_energy";
    check_keys(b, p, {"beta", "mu", "etas"});
    TonksFreeEnergyParams params;
    params.beta = positive(b, "beta", p);
    params.mu = number(b, "mu", p);
    params.etas = increasing_positive(b, "etas", p, default_etas());
    cfg.tonks_free_energy = params;
  }
  if (root.contains("tonks_smoothness")) {
    const json& b = root.at("tonks_smoothness");
    const std::string p = "tonks_smoothness";
    check_keys(b, p, {"betas", "mu_min", "mu_max", "steps"});
    TonksSmoothnessParams params;
    params.betas = number_list(b, "betas", p, params.betas);
    for (std::size_t i = 0; i < params.betas.size(); ++i) {
      if (!(params.betas[i] > 0.0)) validation_error(index(join(p, "betas"), i), "must be positive");
    }
    params.mu_min = number(b, "mu_min", p, params.mu_min);
    params.mu_max = number(b, "mu_max", p, params.mu_max);
    if (!(params.mu_max > params.mu_min)) validation_error(join(p, "mu_max"), "must exceed mu_min");
    params.steps = number_list(b, "steps", p, params.steps);
    for (std::size_t i = 0; i < params.steps.size(); ++i) {
      const double s = params.steps[i];
      const double cells = (params.mu_max - params.mu_min) / s;
      if (!(s > 0.0)) validation_error(index(join(p, "steps"), i), "must be positive");
      if (std::abs(cells - std::round(cells)) > 1e-9 * cells || std::round(cells) < 8) {
        validation_error(index(join(p, "steps"), i),
                         "must divide mu_max - mu_min into at least 8 equal cells");
      }
    }
    cfg.tonks_smoothness = params;
  }
  if (root.contains("ground_state_sweep")) {
    const json& b = root.at("ground_state_sweep");
    check_keys(b, "ground_state_sweep", {"etas"});
    cfg.ground_state_sweep =
        GroundStateSweepParams{increasing_positive(b, "etas", "ground_state_sweep", default_etas())};
  }
}

std::string command_block(const std::string& command) {
  std::string block = command;
  std::replace(block.begin(), block.end(), '-', '_');
  return block;
}

[[noreturn]] void missing_block(const std::string& command) {
  schema_error(command_block(command), "command '" + command + "' needs a '" +
                                           command_block(command) + "' block");
}

Table spectrum_table(const RunConfig& cfg) {
  if (!cfg.spectrum) missing_block("spectrum");
  const SecularSystem system(*cfg.graph, cfg.conditions);
  const Spectrum spectrum = full_spectrum(system, cfg.spectrum->e_max, cfg.spectral);
  Table t;
  t.metadata = {{"e_max", format_double(cfg.spectrum->e_max)},
                {"total_length", format_double(spectrum.total_length)},
                {"negative_count", std::to_string(spectrum.negative_count())},
                {"level_count", std::to_string(spectrum.negatives.size() + spectrum.nonnegatives.size())},
                {"weyl_deviation", format_double(weyl_deviation(spectrum))}};
  t.columns = {"index", "branch", "energy", "multiplicity"};
  std::size_t i = 0;
  for (const Level& l : spectrum.negatives) {
    t.rows.push_back({std::to_string(i++), "negative", format_double(l.energy),
                      std::to_string(l.multiplicity)});
  }
  for (const Level& l : spectrum.nonnegatives) {
    t.rows.push_back({std::to_string(i++), "nonnegative", format_double(l.energy),
                      std::to_string(l.multiplicity)});
  }
  return t;
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

Table bec_sweep_table(const RunConfig& cfg, unsigned threads) {
  if (!cfg.bec_sweep) missing_block("bec-sweep");
  const auto& p = *cfg.bec_sweep;
  SweepOptions options;
  options.threads = threads;
  options.spectral = cfg.spectral;
  const BecSweepResult result = bec_sweep(*cfg.graph, cfg.conditions, p.etas, p.temperature,
                                          p.density, options, p.thresholds, p.penrose_onsager);
  Table t;
  t.metadata = {{"temperature", format_double(p.temperature)},
                {"density", format_double(p.density)},
                {"verdict", std::string(to_string(result.verdict))},
                {"threshold_vanishing", format_double(p.thresholds.vanishing)},
                {"threshold_persistent", format_double(p.thresholds.persistent)}};
  t.columns = {"eta", "total_length", "ground_energy", "negative_count", "mu", "n0_fraction",
               "lambda_po"};
  for (const SweepRecord& r : result.records) {
    t.rows.push_back({format_double(r.eta), format_double(r.total_length),
                      format_double(r.ground_energy), std::to_string(r.negative_count),
                      optional_cell(r.mu), optional_cell(r.condensate_fraction),
                      optional_cell(r.lambda_po)});
  }
  return t;
}

Table tc_estimate_table(const RunConfig& cfg, unsigned threads) {
  if (!cfg.tc_estimate) missing_block("tc-estimate");
  const auto& p = *cfg.tc_estimate;
  SweepOptions options;
  options.threads = threads;
  options.spectral = cfg.spectral;
  const auto est = critical_temperature_estimate(*cfg.graph, cfg.conditions, p.eta, p.density,
                                                 p.temperatures, options, p.threshold);
  Table t;
  t.metadata = {{"eta", format_double(p.eta)},
                {"density", format_double(p.density)},
                {"threshold", format_double(p.threshold)},
                {"t_c_hat", est.estimate ? format_double(*est.estimate) : "none"}};
  t.columns = {"temperature", "n0_fraction"};
  for (std::size_t i = 0; i < est.temperatures.size(); ++i) {
    t.rows.push_back({format_double(est.temperatures[i]), format_double(est.fractions[i])});
  }
  return t;
}

Table tonks_free_energy_table(const RunConfig& cfg, unsigned threads) {
  if (!cfg.tonks_free_energy) missing_block("tonks-free-energy");
  const auto& p = *cfg.tonks_free_energy;
  SweepOptions options;
  options.threads = threads;
  options.spectral = cfg.spectral;
  const VertexConditions vc = cfg.conditions;
  const auto records = tonks_convergence_sweep(*cfg.graph, p.etas, p.beta, p.mu, options,
                                               [vc](const MetricGraph&) { return vc; });
  Table t;
  t.metadata = {{"beta", format_double(p.beta)},
                {"mu", format_double(p.mu)},
                {"f_limit", format_double(limit_free_energy_density(p.beta, p.mu))}};
  t.columns = {"eta", "total_length", "f_finite", "f_limit", "gap"};
  for (const SweepRecord& r : records) {
    t.rows.push_back({format_double(r.eta), format_double(r.total_length),
                      optional_cell(r.free_energy), optional_cell(r.free_energy_limit),
                      optional_cell(r.free_energy_gap)});
  }
  return t;
}

Table tonks_smoothness_table(const RunConfig& cfg) {
  const TonksSmoothnessParams p = cfg.tonks_smoothness.value_or(TonksSmoothnessParams{});
  Table t;
  t.metadata = {{"mu_min", format_double(p.mu_min)}, {"mu_max", format_double(p.mu_max)}};
  t.columns = {"beta", "step", "mu", "f", "df_dmu", "d2f_dmu2"};
  double worst_gap = 0.0;
  for (double beta : p.betas) {
    std::vector<FreeEnergyCurve> curves;
    for (double step : p.steps) {
      curves.push_back(free_energy_curve(beta, p.mu_min, p.mu_max, step));
      const FreeEnergyCurve& c = curves.back();
      for (std::size_t i = 0; i < c.mu.size(); ++i) {
        t.rows.push_back({format_double(beta), format_double(step), format_double(c.mu[i]),
                          format_double(c.f[i]), format_double(c.df_dmu[i]),
                          format_double(c.d2f_dmu2[i])});
      }
    }
    for (std::size_t i = 1; i < curves.size(); ++i) {
      const double gap = second_derivative_refinement_gap(curves[i - 1], curves[i]);
      worst_gap = std::max(worst_gap, gap);
      t.metadata.emplace_back("refinement_gap_beta_" + format_double(beta) + "_step_" +
                                  format_double(p.steps[i]),
                              format_double(gap));
    }
  }
  t.metadata.emplace_back("max_refinement_gap", format_double(worst_gap));
  return t;
}

Table validate_table(const RunConfig& cfg) {
  const auto violations = validate(cfg.conditions, cfg.graph->boundary_dimension());
  const LSpectrumSummary summary = l_spectrum(cfg.conditions);
  Table t;
  t.metadata = {{"vertices", std::to_string(cfg.graph->vertex_count())},
                {"edges", std::to_string(cfg.graph->edge_count())},
                {"total_length", format_double(cfg.graph->total_length())},
                {"l_max", format_double(summary.l_max)},
                {"l_positive_count", std::to_string(summary.count_positive)},
                {"violations", std::to_string(violations.size())}};
  t.columns = {"kind", "message"};
  for (const Violation& v : violations) t.rows.push_back({std::string(to_string(v.kind)), v.message});
  return t;
}

Table ground_state_table(const RunConfig& cfg, unsigned threads) {
  const GroundStateSweepParams p =
      cfg.ground_state_sweep.value_or(GroundStateSweepParams{default_etas()});
  SweepOptions options;
  options.threads = threads;
  options.spectral = cfg.spectral;
  const auto records = ground_state_sweep(*cfg.graph, cfg.conditions, p.etas, options);
  Table t;
  t.metadata = {{"l_max", format_double(l_spectrum(cfg.conditions).l_max)}};
  t.columns = {"eta", "total_length", "ground_energy", "negative_count", "residual"};
  for (const SweepRecord& r : records) {
    t.rows.push_back({format_double(r.eta), format_double(r.total_length),
                      format_double(r.ground_energy), std::to_string(r.negative_count),
                      optional_cell(r.ground_residual)});
  }
  return t;
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> commands{"spectrum",          "bec-sweep",
                                                 "tc-estimate",       "tonks-free-energy",
                                                 "tonks-smoothness",  "validate",
                                                 "ground-state-sweep"};
  return commands;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string Table::to_csv() const {
  std::ostringstream out;
  for (const auto& [key, value] : metadata) out << "# " << key << "=" << value << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(row[i]);
    out << "\n";
  }
  return out.str();
}

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    schema_error("", std::string("invalid JSON: ") + e.what());
  }
  check_keys(root, "",
             {"command", "vertices", "edges", "conditions", "spectral", "output", "spectrum",
              "bec_sweep", "tc_estimate", "tonks_free_energy", "tonks_smoothness",
              "ground_state_sweep"});

  RunConfig cfg;
  cfg.source = root;
  if (root.contains("command")) {
    if (!root.at("command").is_string()) schema_error("command", "expected a string");
    cfg.command = root.at("command").get<std::string>();
    const auto& known = known_commands();
    if (std::find(known.begin(), known.end(), cfg.command) == known.end()) {
      schema_error("command", "unknown command '" + cfg.command + "'");
    }
  }
  if (root.contains("output")) {
    if (!root.at("output").is_string()) schema_error("output", "expected a string");
    cfg.output = root.at("output").get<std::string>();
  }
  cfg.graph = parse_graph(root);
  parse_conditions(root, cfg);
  parse_spectral(root, cfg);
  parse_commands(root, cfg);
  return cfg;
}

Table execute(const RunConfig& cfg, const std::string& command, unsigned threads) {
  spdlog::info("running '{}' on {} vertices / {} edges ({})", command, cfg.graph->vertex_count(),
               cfg.graph->edge_count(), cfg.conditions_label);
  Table t;
  if (command == "spectrum") {
    t = spectrum_table(cfg);
  } else if (command == "bec-sweep") {
    t = bec_sweep_table(cfg, threads);
  } else if (command == "tc-estimate") {
    t = tc_estimate_table(cfg, threads);
  } else if (command == "tonks-free-energy") {
    t = tonks_free_energy_table(cfg, threads);
  } else if (command == "tonks-smoothness") {
    t = tonks_smoothness_table(cfg);
  } else if (command == "validate") {
    t = validate_table(cfg);
  } else if (command == "ground-state-sweep") {
    t = ground_state_table(cfg, threads);
  } else {
    schema_error("command", "unknown command '" + command + "'");
  }
  t.metadata.insert(t.metadata.begin(),
                    {{"version", std::string(kVersion)},
                     {"command", command},
                     {"vertices", std::to_string(cfg.graph->vertex_count())},
                     {"edges", std::to_string(cfg.graph->edge_count())},
                     {"conditions", cfg.conditions_label}});
  // validate already reports vertices/edges; keep the first occurrence only
  std::set<std::string> seen;
  std::erase_if(t.metadata, [&](const auto& kv) { return !seen.insert(kv.first).second; });
  return t;
}

std::string error_json(std::string_view kind, std::string_view path, std::string_view message) {
  return json{{"error", std::string(kind)}, {"path", std::string(path)}, {"message", std::string(message)}}.dump();
}

int run(const RunConfig& cfg, const RunOptions& options, std::ostream& err) {
  try {
    std::string command = options.command.value_or(cfg.command);
    if (command.empty()) schema_error("command", "no command given in the config or on the command line");
    const std::string out = options.out.value_or(cfg.output.value_or("graphbec_" + command + ".csv"));

    const Table table = execute(cfg, command, std::max(1u, options.threads));
    write_file(out, table.to_csv());

    json metadata = json::object();
    for (const auto& [key, value] : table.metadata) metadata[key] = value;
    json manifest = {{"version", std::string(kVersion)},
                     {"command", command},
                     {"output", out},
                     {"threads", options.threads},
                     {"columns", table.columns},
                     {"rows", table.rows.size()},
                     {"metadata", metadata},
                     {"config", cfg.source}};
    write_file(out + ".manifest.json", manifest.dump(2) + "\n");
    spdlog::info("wrote {} rows to {}", table.rows.size(), out);
    return 0;
  } catch (const ConfigError& e) {
    err << error_json(e.kind(), e.path(), e.what()) << "\n";
    return 1;
  } catch (const Error& e) {
    err << error_json(to_string(e.code()), "", e.what()) << "\n";
    return e.category() == ErrorCategory::Validation ? 1 : 2;
  } catch (const std::exception& e) {
    err << error_json("IOError", "", e.what()) << "\n";
    return 2;
  }
}

int run_text(std::string_view config_text, const RunOptions& options, std::ostream& err) {
  try {
    return run(parse_config(config_text), options, err);
  } catch (const ConfigError& e) {
    err << error_json(e.kind(), e.path(), e.what()) << "\n";
    return 1;
  } catch (const Error& e) {
    err << error_json(to_string(e.code()), "", e.what()) << "\n";
    return e.category() == ErrorCategory::Validation ? 1 : 2;
  }
}

}  // namespace graphbec::cli
