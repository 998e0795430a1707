#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cli_io.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("graphbec");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("GRAPHBEC_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Ideal and hardcore Bose gases on metric graphs"};
  std::string config_path;
  std::string out;
  std::string command;
  unsigned threads = 1;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out, "CSV output path (manifest goes to <out>.manifest.json)");
  app.add_option("--command", command, "Command to run; overrides the config's 'command'")
      ->check(CLI::IsMember(graphbec::cli::known_commands()));
  app.add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::Range(1u, 1024u));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << graphbec::cli::error_json("IOError", "", "cannot read config '" + config_path + "'")
              << "\n";
    return 1;
  }
  std::ostringstream text;
  text << in.rdbuf();

  graphbec::cli::RunOptions options;
  if (!command.empty()) options.command = command;
  if (!out.empty()) options.out = out;
  options.threads = threads;
  return graphbec::cli::run_text(text.str(), options, std::cerr);
}
