#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "finsler/autodiff.hpp"
#include "finsler/distributions.hpp"
#include "finsler/geometry.hpp"

namespace finsler::cli {

using Json = nlohmann::ordered_json;

/// Bad flags, malformed points, unknown presets.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by parse_args for --help; carries the usage text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Text, Json };

struct RawPoint {
  std::vector<double> x;
  std::vector<double> y;
};

struct ScanAxis {
  Coord coord;
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

struct RunConfig {
  int dim = 0;
  std::string function_source;  // DSL text, empty when a preset is used
  std::string preset;           // preset name, empty when --func is used
  double curvature = 1.0;       // riemann-constant-curvature parameter
  std::vector<RawPoint> points;
  std::optional<std::vector<ScanAxis>> scan;
  Tolerances tolerances;
  OutputFormat format = OutputFormat::Text;
  bool fd_check = false;
  std::optional<std::uint64_t> seed;  // jitters scan grids when set
  std::string out_path;
  std::string csv_path;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitSkipped = 2;

/// Parses command-line flags. `env_tol` is the value of FINSLER_TOL, if set;
/// --tol wins over it. Throws ConfigError.
RunConfig parse_args(const std::vector<std::string>& args, const char* env_tol = nullptr);

RawPoint parse_point(const std::string& text, int dim);
std::vector<ScanAxis> parse_scan(const std::string& text, int dim);

/// The function to analyse plus its label and default point.
struct ResolvedFunction {
  std::string label;
  std::string source;
  int dim = 0;
  std::optional<RawPoint> default_point;
};

ResolvedFunction resolve_function(const RunConfig& config);

/// Full report for one point: tensors, distributions, conditions and the
/// nullity obstruction check, or a skip record.
Json point_report(const FinslerSpace& space, const RawPoint& p, const Tolerances& tol, bool fd_check);

struct RunResult {
  Json report;
  int exit_code = kExitOk;
};

/// One report per requested point (or the default point of a preset).
RunResult run(const RunConfig& config);

struct ScanRow {
  RawPoint point;
  bool valid = false;
  std::string reason;
  double F = 0.0;
  int dim_nullity = 0;
  int dim_kernel = 0;
  bool coincide = false;
  double max_angle = 0.0;
  bool cyclic = false;
  bool integrability = false;
  bool isotropy = false;
  double lambda = 0.0;
};

struct ScanResult {
  Json summary;
  std::vector<ScanRow> rows;
  int exit_code = kExitOk;
};

/// Evaluates every grid point (concurrently when `threads` > 1); rows are in
/// grid order.
ScanResult scan(const RunConfig& config, unsigned threads = 0);

std::vector<RawPoint> scan_grid(const std::vector<ScanAxis>& axes, const RawPoint& base,
                                std::optional<std::uint64_t> seed);

/// JSON with every floating-point number written with 17 significant digits.
std::string dump_json(const Json& value);

/// Human-readable rendering of a report, numbers formatted as in dump_json.
std::string format_text(const Json& value);

std::string scan_csv(const ScanResult& result, int dim);

/// Entry point used by the executable; returns the process exit code.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               const char* env_tol = nullptr);

}  // namespace finsler::cli
