#pragma once

// Subcommands of the articugeo tool. Each one takes parsed options, writes
// its artifacts and returns a process exit code:
//   0 success, 1 usage, 2 I/O or malformed data, 3 numerical failure.

#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "articugeo/error.hpp"

namespace articugeo::cli {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

ExitCode exit_code_for(ErrorCode code);

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string out;
  /// Combined JSON config; per-command files override its sections.
  std::string config;
};

struct RenderArgs {
  std::string scene;
  std::string rig;
  std::string trajectory;
  std::string render;
};

struct LossArgs {
  std::string manifest;
  /// Unset keeps the configured types; "" disables every cross-vehicle type.
  std::optional<std::set<int>> cv_types;
  /// Names from disable_flag_names() to switch off.
  std::vector<std::string> disabled;
  double depth_scale = 1.0;
  /// "FRAME:FILE" cross-vehicle overrides.
  std::vector<std::string> calibrations;
};

struct CalibrateArgs {
  std::string front;
  std::string rear;
  std::string icp;
  std::string init;
};

struct MetricArgs {
  std::string pred;
  std::string gt;
  double max_depth = 100.0;
  bool median_scale = false;
};

/// Loss toggles the losses command can switch off: temporal, wv, st, mvrc,
/// sdc, smooth, nc, snc, pnc, ch, vpc.
const std::vector<std::string>& disable_flag_names();

/// Parses "0,1,2"; "" is the empty set. Throws kInvalidArgument.
std::set<int> parse_cv_types(const std::string& text);

int cmd_render(const GlobalOptions& g, const RenderArgs& a, std::ostream& out);
int cmd_losses(const GlobalOptions& g, const LossArgs& a, std::ostream& out);
int cmd_calibrate(const GlobalOptions& g, const CalibrateArgs& a, std::ostream& out);
int cmd_verify(const GlobalOptions& g, const std::string& suite, std::ostream& out);
int cmd_metrics(const GlobalOptions& g, const MetricArgs& a, std::ostream& out);

/// Full command line without the program name. Errors go to `err` as
/// "error: ..." and map onto the exit codes above.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace articugeo::cli
