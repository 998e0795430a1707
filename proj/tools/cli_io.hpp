#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "graphbec/graph.hpp"
#include "graphbec/spectral.hpp"
#include "graphbec/thermo_limit.hpp"
#include "graphbec/vertex_conditions.hpp"

namespace graphbec::cli {

inline constexpr std::string_view kVersion = "0.1.0";

/// Config problems. `kind` is "SchemaError" (shape of the JSON) or
/// "ValidationError" (values rejected by the graph/conditions validators).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string kind, std::string path, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)), path_(std::move(path)) {}
  const std::string& kind() const noexcept { return kind_; }
  const std::string& path() const noexcept { return path_; }

 private:
  std::string kind_;
  std::string path_;
};

struct SpectrumParams {
  double e_max = 0.0;
};

struct BecSweepParams {
  double temperature = 1.0;
  double density = 1.0;
  std::vector<double> etas;
  BecThresholds thresholds;
  bool penrose_onsager = true;
};

struct TcEstimateParams {
  double eta = 160.0;
  double density = 1.0;
  std::vector<double> temperatures;
  double threshold = 0.1;
};

struct TonksFreeEnergyParams {
  double beta = 1.0;
  double mu = 0.0;
  std::vector<double> etas;
};

struct TonksSmoothnessParams {
  std::vector<double> betas{1.0, 2.0};
  double mu_min = -2.0;
  double mu_max = 2.0;
  std::vector<double> steps{0.1, 0.05};
};

struct GroundStateSweepParams {
  std::vector<double> etas;
};

struct RunConfig {
  nlohmann::json source;  // the config as given, echoed into the manifest
  std::string command;    // empty when the config names none
  std::optional<MetricGraph> graph;
  VertexConditions conditions;
  std::string conditions_label;
  SpectralOptions spectral;
  std::optional<std::string> output;
  std::optional<SpectrumParams> spectrum;
  std::optional<BecSweepParams> bec_sweep;
  std::optional<TcEstimateParams> tc_estimate;
  std::optional<TonksFreeEnergyParams> tonks_free_energy;
  std::optional<TonksSmoothnessParams> tonks_smoothness;
  std::optional<GroundStateSweepParams> ground_state_sweep;
};

/// Parses and validates a JSON config. Unknown keys are rejected. Throws ConfigError.
RunConfig parse_config(std::string_view text);

const std::vector<std::string>& known_commands();

/// A rendered table with `# key=value` metadata lines.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
};

/// Fixed 17-significant-digit formatting used for every float in the output.
std::string format_double(double value);

struct RunOptions {
  std::optional<std::string> command;  // overrides config.command
  std::optional<std::string> out;      // overrides config.output
  unsigned threads = 1;
};

/// Executes one command and returns its table. Throws ConfigError or graphbec::Error.
Table execute(const RunConfig& config, const std::string& command, unsigned threads);

/// Runs and writes `<out>` plus `<out>.manifest.json`. Errors are reported on
/// `err` as one JSON object. Returns 0 on success, 1 on validation failure
/// and 2 on numerical failure.
int run(const RunConfig& config, const RunOptions& options, std::ostream& err);

/// Full entry point on raw config text (parse errors included).
int run_text(std::string_view config_text, const RunOptions& options, std::ostream& err);

std::string error_json(std::string_view kind, std::string_view path, std::string_view message);

}  // namespace graphbec::cli
