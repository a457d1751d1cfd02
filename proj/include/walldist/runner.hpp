#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "walldist/io.hpp"
#include "walldist/levelset.hpp"
#include "walldist/metrics.hpp"

namespace walldist {

struct EmitFlags {
  bool field = true;
  bool history = true;
  bool histogram = false;
  bool isolines = false;
  bool vtk = false;
};

struct PressureParams {
  double a = 1.0;
  double n = 0.3;
  double c_star = 1.0;
  double rho_p = 2.0;
  double rho_0 = 1.0;
  double a_star = 1.0;
};

/// Everything a run needs. Built by parse_config, which fills the per-case
/// defaults for anything the file leaves out.
struct RunConfig {
  CaseGeometry geometry;
  Dims dims;
  SolveConfig solve;
  /// Physical steps for piston and bouncing_cube.
  int steps = 40;
  DendriteParams grain;
  BurnbackConfig burnback;
  std::optional<PressureParams> pressure;
  /// Percent; unset picks 0.05 for Eikonal runs and 0.5 otherwise.
  std::optional<double> histogram_bin;
  std::filesystem::path output_dir = "out";
  /// Burnback: write the field every this many frames (0: first and last only).
  int field_every = 10;
  EmitFlags emit;
  std::string label;
};

/// Parses the sectioned key = value format ([case] [grid] [solver] [motion]
/// [bump] [grain] [output]). `#` and `;` start comments. Unknown sections or
/// keys and bad values throw ConfigParse naming the line and key.
RunConfig parse_config(std::istream& is, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Output directory after the overrides: `out` (when given) replaces the
/// configured directory; a relative result is placed under
/// $WALLDIST_OUTPUT_ROOT when that is set.
std::filesystem::path resolve_output_dir(const RunConfig& cfg, const std::optional<std::filesystem::path>& out = {});

enum class RunStatus { Converged = 0, Other = 1, ConfigError = 2, NotConverged = 3, IoError = 4 };

struct RunResult {
  RunStatus status = RunStatus::Converged;
  RunSummary summary;
  std::vector<std::filesystem::path> files;
  std::string message;
};

/// Runs one configuration and writes its artifacts into `dir` (created when
/// missing). Solver failures are reported through the status, not thrown;
/// IO failures throw Error(Io).
RunResult run(const RunConfig& cfg, const std::filesystem::path& dir);

/// Runs each configuration in turn (sub-directories run_0, run_1, ... of
/// `dir`) and writes compare.csv: one row per run with the ratio columns
/// l2(first)/l2(row), sec_per_100(row)/sec_per_100(first) and
/// iters(row)/iters(first). Throws InvalidArgument for fewer than two
/// configs and CaseMismatch unless all share a case.
std::vector<RunResult> compare(const std::vector<RunConfig>& cfgs, const std::filesystem::path& dir,
                               std::ostream* table = nullptr);

}  // namespace walldist
