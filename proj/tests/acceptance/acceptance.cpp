// Prints one PASS/FAIL line per acceptance criterion. Exit status is nonzero
// when any criterion fails. Tolerances come from VerifyTolerances defaults.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>

#include "articugeo/config.hpp"
#include "articugeo/verify.hpp"
#include "commands.hpp"

using namespace articugeo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = true;
  std::vector<std::string> lines;
};

std::map<std::string, SuiteResult> g_suites;

const SuiteResult& suite(const std::string& name) {
  auto it = g_suites.find(name);
  if (it == g_suites.end()) it = g_suites.emplace(name, run_suite(name).at(0)).first;
  return it->second;
}

std::string describe(const std::string& suite_name, const Check& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s %s.%s value=%.6g tol=%.6g ", c.passed ? "PASS" : "FAIL", suite_name.c_str(),
                c.name.c_str(), c.value, c.tolerance);
  return buf + c.detail;
}

/// Every check of a suite, or only the named ones. A named check that is
/// missing counts as a failure.
Outcome from_suite(const std::string& name, const std::vector<std::string>& only = {}) {
  Outcome o;
  const SuiteResult& r = suite(name);
  if (r.checks.empty()) {
    o.passed = false;
    o.lines.push_back("FAIL " + name + " produced no checks");
  }
  for (const auto& c : r.checks) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.name) == only.end()) continue;
    o.passed = o.passed && c.passed;
    o.lines.push_back(describe(name, c));
  }
  for (const auto& want : only) {
    const bool found =
        std::any_of(r.checks.begin(), r.checks.end(), [&](const Check& c) { return c.name == want; });
    if (!found) {
      o.passed = false;
      o.lines.push_back("FAIL " + name + "." + want + " missing");
    }
  }
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int cli_run(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str();
  if (code != 0) std::fprintf(stderr, "%s", e.str().c_str());
  return code;
}

/// Two render + losses runs with the same seed and noisy priors.
Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "articugeo_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string cfg = (root / "cfg.json").string();
  write_text_file(cfg, R"({
  "rig": {"layout": {"width": 160, "height": 96}},
  "trajectory": {"frames": 3},
  "render": {"priors": {"depth_scale": 1.7, "normal_noise_deg": 4.0}}
})");
  std::string report[2];
  for (int run = 0; run < 2; ++run) {
    const std::string dir = (root / ("run" + std::to_string(run))).string();
    if (cli_run({"--seed", "42", "--config", cfg, "render", "--out", dir}) != 0 ||
        cli_run({"--config", cfg, "losses", "--manifest", dir + "/manifest.txt"}, &report[run]) != 0) {
      o.passed = false;
      o.lines.push_back("FAIL run " + std::to_string(run) + " exited nonzero");
      return o;
    }
  }
  std::size_t files = 0, differing = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "run0")) {
    if (!e.is_regular_file()) continue;
    ++files;
    const fs::path other = root / "run1" / fs::relative(e.path(), root / "run0");
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
      ++differing;
      if (differing <= 5) o.lines.push_back("FAIL differs: " + fs::relative(e.path(), root / "run0").string());
    }
  }
  std::size_t files1 = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "run1")) files1 += e.is_regular_file();
  const bool reports_equal = !report[0].empty() && report[0] == report[1];
  o.passed = differing == 0 && files > 0 && files == files1 && reports_equal;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s files=%zu/%zu differing=%zu report_identical=%d", o.passed ? "PASS" : "FAIL",
                files, files1, differing, reports_equal ? 1 : 0);
  o.lines.insert(o.lines.begin(), buf);
  fs::remove_all(root);
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle loss closure", [] { return from_suite("oracle"); }},
      {"normal equivariance",
       [] { return from_suite("normals", {"rotation_equivariance", "translation_invariance"}); }},
      {"direct vs depth normals", [] { return from_suite("normals", {"step_direct_vs_depth", "c1_agreement"}); }},
      {"scale anchoring",
       [] { return from_suite("ground", {"ch_scale_linearity", "normal_terms_scale", "pipeline_ch_scale"}); }},
      {"kinematic loop",
       [] {
         return from_suite("pose", {"loop_identity", "loop_loss", "translation_linear", "translation_monotone"});
       }},
      {"icp recovery",
       [] { return from_suite("icp", {"recovery_rotation", "recovery_translation", "residual_monotone", "overlap"}); }},
      {"gradient checks", [] { return from_suite("gradcheck"); }},
      {"metric fixed points", [] { return from_suite("metrics"); }},
      {"context closure", [] { return from_suite("closure"); }},
      {"determinism", determinism},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.passed = false;
      o.lines.push_back(std::string("FAIL exception: ") + e.what());
    }
    failed += !o.passed;
    std::printf("criterion %zu: %s %s\n", i + 1, o.passed ? "PASS" : "FAIL", criteria[i].first.c_str());
    for (const auto& line : o.lines) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
