#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "toda/flow.hpp"
#include "toda/jacobi.hpp"

namespace toda::cli {

enum class Mode { finite, semi_infinite, verify, response };

Mode parse_mode(const std::string& name);
std::string to_string(Mode mode);

struct GeneratorSpec {
  std::string name; // linear_b | constant | decay
  double alpha = 1.0; // coupling a_n (a_n = alpha / n for decay)
  double beta = 0.0;  // slope of b_n (linear_b)
  double gamma = 0.0; // offset of b_n
  std::optional<std::size_t> size; // required outside semi_infinite mode
  std::optional<double> upper_bound;
};

/// Exactly one source is set after parsing.
struct InitialSpec {
  std::optional<JacobiMatrix> matrix;
  std::optional<GeneratorSpec> generator;
  std::optional<std::size_t> random_size;
  std::optional<DiscreteMeasure> measure; // response mode only
};

struct RunConfig {
  Mode mode = Mode::finite;
  InitialSpec initial;
  double t_end = 1.0;
  std::size_t steps = 10;
  double dt = 1e-4;
  double tol = 1e-8;
  std::size_t n_max = 64;
  std::size_t window = 2;
  std::size_t moments = 8;
  std::uint64_t seed = 0;
  std::string trajectory_file = "trajectory.csv";
  std::string oracle_file = "oracle.csv";
  std::string report_file = "report.json";
  std::string moments_file = "moments.csv";
  std::string response_file = "response.csv";
};

/// Parses and validates a JSON config document. Throws InvalidArgument with
/// the dotted path of the offending field. A mode override replaces the
/// document's mode before the mode-specific checks run.
RunConfig parse_config(const std::string& text, std::optional<Mode> mode_override = std::nullopt);
RunConfig load_config(const std::filesystem::path& path,
                      std::optional<Mode> mode_override = std::nullopt);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  bool quiet = false;
};

/// Executes one run and writes its artifacts into out_dir.
///
/// Returns 0 on success, 1 on invalid input and 2 on numerical failure.
/// Errors are printed to `err`; progress goes to `log` unless quiet.
int run(const RunConfig& config, const RunOptions& options, std::ostream& log,
        std::ostream& err);

/// Header "t,b1,...,bN,a1,...,a{N-1}", 17 significant digits.
void write_trajectory_csv(std::ostream& out, const TodaTrajectory& trajectory);
TodaTrajectory read_trajectory_csv(std::istream& in);

/// Header "t,<prefix>0,...", one row per time.
void write_table_csv(std::ostream& out, const std::string& prefix,
                     const std::vector<double>& times,
                     const std::vector<std::vector<double>>& rows);

std::string format_double(double value);

} // namespace toda::cli
