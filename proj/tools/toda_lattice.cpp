#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "toda/cli.hpp"
#include "toda/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite and semi-infinite Toda lattice solver"};
  std::string config_path;
  std::optional<std::string> mode;
  toda::cli::RunOptions options;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--mode", mode, "override mode: finite, semi_infinite, verify, response");
  app.add_option("--out", options.out_dir, "output directory")->capture_default_str();
  app.add_flag("--quiet", options.quiet, "suppress progress output");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  toda::cli::RunConfig config;
  try {
    std::optional<toda::cli::Mode> override_mode;
    if (mode) override_mode = toda::cli::parse_mode(*mode);
    config = toda::cli::load_config(config_path, override_mode);
  } catch (const toda::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return toda::cli::run(config, options, std::cout, std::cerr);
}
