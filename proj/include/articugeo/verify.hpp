#pragma once

// Property and oracle suites run by `articugeo verify` and the acceptance
// binary. Every tolerance lives in VerifyTolerances so a config file can
// reproduce or tighten any check.

#include <cstdint>
#include <string>
#include <vector>

namespace articugeo {

struct VerifyTolerances {
  // Core geometry and warping.
  double geometry_rel = 1e-9;
  double group_abs = 1e-9;
  double warp_identity = 1e-6;
  double loss_exact = 1e-12;

  // Oracle closure of the loss pipeline.
  int closure_frames = 10;
  double closure_loss = 1e-3;
  double closure_runtime_s = 60.0;

  // Normal reprojection.
  double equivariance_deg = 0.1;
  double c1_agreement_deg = 0.5;
  int step_band_px = 5;
  double gt_normal_deg = 0.2;
  double unit_norm = 1e-6;

  // Camera height scale anchoring.
  double ch_scale_rel = 0.01;
  double normal_scale_change = 1e-3;
  double ch_flat_ground_rel = 1e-3;
  double ground_mask_coverage = 0.99;
  double ground_mask_false_positive = 0.01;

  // Cross-vehicle pose consistency.
  double vpc_identity = 1e-9;
  double vpc_loss = 1e-8;
  double vpc_linear = 1e-6;

  // ICP.
  int icp_trials = 20;
  double icp_noise_m = 0.01;
  double icp_overlap = 0.6;
  double icp_overlap_slack = 0.05;
  double icp_init_rot_deg = 10.0;
  double icp_init_trans_m = 0.3;
  double icp_rot_deg = 0.5;
  double icp_trans_m = 0.02;
  double icp_exact = 1e-6;

  // Finite-difference gradients.
  int grad_samples = 100;
  double grad_rel = 1e-3;
  double grad_step_rel = 1e-6;
  double grad_boundary_px = 1e-3;

  // Metrics and algebraic closure.
  double metrics_exact = 1e-12;
  int closure_states = 1000;

  // Synthetic renderer oracles.
  double render_plane_depth = 1e-9;
  double render_reprojection_m = 1e-6;
  double prior_noise_deg = 0.5;

  std::uint64_t seed = 0;
};

struct Check {
  std::string name;
  bool passed = false;
  /// Worst-case residual and the bound it was held to.
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const;
  /// One `PASS|FAIL name value=... tol=... detail` line per check.
  std::string to_text() const;
};

/// geometry, rig, warping, losses, normals, ground, pose, icp, synth,
/// metrics, gradcheck, closure, oracle.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Throws kUnknownSuite.
std::vector<SuiteResult> run_suite(const std::string& name, const VerifyTolerances& tol = {});

// Suite bodies, callable on their own.
SuiteResult verify_geometry(const VerifyTolerances& tol);
SuiteResult verify_rig(const VerifyTolerances& tol);
SuiteResult verify_warping(const VerifyTolerances& tol);
SuiteResult verify_losses(const VerifyTolerances& tol);
SuiteResult verify_normals(const VerifyTolerances& tol);
SuiteResult verify_ground(const VerifyTolerances& tol);
SuiteResult verify_pose(const VerifyTolerances& tol);
SuiteResult verify_icp(const VerifyTolerances& tol);
SuiteResult verify_synth(const VerifyTolerances& tol);
SuiteResult verify_metrics(const VerifyTolerances& tol);
SuiteResult verify_gradcheck(const VerifyTolerances& tol);
/// Context composition closure, the built-in pair table and the VPC loop.
SuiteResult verify_closure(const VerifyTolerances& tol);
/// Ground-truth inputs drive every loss term below closure_loss.
SuiteResult verify_oracle(const VerifyTolerances& tol);

}  // namespace articugeo
