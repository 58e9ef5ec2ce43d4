#include "articugeo/verify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "articugeo/depth_metrics.hpp"
#include "articugeo/pose_consistency.hpp"
#include "articugeo/surface_normal.hpp"
#include "verify_internal.hpp"

namespace articugeo {

using namespace verify_detail;

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string SuiteResult::to_text() const {
  std::string out;
  char buf[96];
  for (const auto& c : checks) {
    out += c.passed ? "PASS " : "FAIL ";
    out += suite + "." + c.name;
    std::snprintf(buf, sizeof(buf), " value=%.6g tol=%.6g", c.value, c.tolerance);
    out += buf;
    if (!c.detail.empty()) out += " " + c.detail;
    out += '\n';
  }
  return out;
}

namespace {

using SuiteFn = SuiteResult (*)(const VerifyTolerances&);

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
  static const std::vector<std::pair<std::string, SuiteFn>> table = {
      {"geometry", verify_geometry}, {"rig", verify_rig},       {"warping", verify_warping},
      {"losses", verify_losses},     {"normals", verify_normals}, {"ground", verify_ground},
      {"pose", verify_pose},         {"icp", verify_icp},       {"synth", verify_synth},
      {"metrics", verify_metrics},   {"gradcheck", verify_gradcheck}, {"closure", verify_closure},
      {"oracle", verify_oracle},
  };
  return table;
}

double max_abs_diff(const SE3Transform& a, const SE3Transform& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

bool bit_equal(const SE3Transform& a, const SE3Transform& b) { return a.to_row_major() == b.to_row_major(); }

/// Random rig state with both joint motions and a cross-vehicle transform.
RigState random_state(Rng& rng, int timestamp) {
  RigState s;
  s.timestamp = timestamp;
  s.cross_vehicle = random_transform(rng, M_PI / 3, 6.0);
  s.joint_motion_front = random_transform(rng, 0.3, 2.0);
  s.joint_motion_rear = random_transform(rng, 0.3, 2.0);
  return s;
}

ImageBuffer random_image(Rng& rng, int w, int h, int channels) {
  ImageBuffer img(w, h, channels);
  for (auto& v : img.data()) v = uniform(rng, 0.0, 1.0);
  return img;
}

NormalMap random_normals(Rng& rng, int w, int h) {
  NormalMap n(w, h);
  for (std::size_t i = 0; i < n.normals.size(); ++i) {
    n.normals[i] = random_unit(rng);
    n.valid[i] = uniform(rng, 0.0, 1.0) < 0.9 ? 1 : 0;
  }
  return n;
}

std::string pair_table_text(const std::array<std::vector<CameraPair>, 3>& table) {
  std::string out;
  for (int t = 0; t < 3; ++t) {
    out += "Type-" + std::to_string(t) + ":";
    for (const auto& [a, b] : table[t]) out += " (" + camera_name(a) + "&" + camera_name(b) + ")";
    out += "\n";
  }
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : suite_table()) n.push_back(name);
    return n;
  }();
  return names;
}

std::vector<SuiteResult> run_suite(const std::string& name, const VerifyTolerances& tol) {
  std::vector<SuiteResult> out;
  for (const auto& [suite, fn] : suite_table()) {
    if (name == "all" || name == suite) out.push_back(fn(tol));
  }
  if (out.empty()) {
    std::string known = "all";
    for (const auto& n : suite_names()) known += ", " + n;
    throw Error(ErrorCode::kUnknownSuite, "unknown suite '" + name + "' (known: " + known + ")");
  }
  return out;
}

SuiteResult verify_geometry(const VerifyTolerances& tol) {
  SuiteBuilder sb("geometry");
  Rng rng(mix_seed(tol.seed, 1));
  const CameraModel cam = test_camera(320, 192);

  sb.guard("project_unproject", [&] {
    double worst = 0.0;
    std::size_t depth_mismatch = 0;
    for (int i = 0; i < 2000; ++i) {
      const Pixel p{uniform(rng, 0.0, cam.width - 1.0), uniform(rng, 0.0, cam.height - 1.0)};
      const double d = uniform(rng, 0.1, 200.0);
      const Point3 x = unproject(p, d, cam);
      if (x.z() != d) ++depth_mismatch;
      const auto pr = project<double>(x, cam);
      worst = std::max({worst, std::abs(pr.pixel.u - p.u) / std::max(1.0, std::abs(p.u)),
                        std::abs(pr.pixel.v - p.v) / std::max(1.0, std::abs(p.v)), std::abs(pr.depth - d) / d});
    }
    sb.at_most("project_unproject", worst, tol.geometry_rel, "2000 random pixels and depths");
    sb.holds("unproject_keeps_depth", depth_mismatch, "z == depth exactly");
  });

  sb.guard("group_axioms", [&] {
    double worst = 0.0;
    std::size_t roundtrip = 0;
    for (int i = 0; i < 1000; ++i) {
      const SE3Transform a = random_transform(rng, M_PI, 10.0);
      const SE3Transform b = random_transform(rng, M_PI, 10.0);
      const SE3Transform c = random_transform(rng, M_PI, 10.0);
      worst = std::max(worst, max_abs_diff((a * b) * c, a * (b * c)));
      worst = std::max(worst, max_abs_diff(a * a.inverse(), SE3Transform::identity()));
      worst = std::max(worst, max_abs_diff(a.inverse() * a, SE3Transform::identity()));
      worst = std::max(worst, max_abs_diff(SE3Transform::identity() * a, a));
      worst = std::max(worst, max_abs_diff(a.inverse().inverse(), a));
      const Point3 p(uniform(rng, -5, 5), uniform(rng, -5, 5), uniform(rng, -5, 5));
      worst = std::max(worst, ((a * b) * p - a * (b * p)).cwiseAbs().maxCoeff());
      const auto m = a.to_row_major();
      if (!bit_equal(SE3Transform::from_row_major(m), a)) ++roundtrip;
    }
    sb.at_most("group_axioms", worst, tol.group_abs, "associativity, inverse, identity on 1000 triples");
    sb.holds("row_major_roundtrip", roundtrip);
  });

  sb.guard("behind_camera", [&] {
    std::size_t missing = 0;
    try {
      project<double>(Point3(0.0, 0.0, -1.0), cam);
      ++missing;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBehindCamera) ++missing;
    }
    try {
      unproject(Pixel{1.0, 1.0}, 0.0, cam);
      ++missing;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInvalidDepth) ++missing;
    }
    sb.holds("error_codes", missing, "behind camera and zero depth are rejected");
  });
  return sb.take();
}

SuiteResult verify_rig(const VerifyTolerances& tol) {
  SuiteBuilder sb("rig");
  Rng rng(mix_seed(tol.seed, 2));
  const RigConfig rig = default_rig();

  sb.guard("default_rig_valid", [&] {
    rig.validate();
    sb.holds("default_rig_valid", 0);
  });

  sb.guard("cv_pairs_cross_vehicles", [&] {
    std::size_t bad = 0;
    for (int t = 0; t < 3; ++t) {
      for (const auto& [a, b] : cv_pairs(t)) bad += rig.vehicle_of(a) == rig.vehicle_of(b) ? 1 : 0;
    }
    sb.holds("cv_pairs_cross_vehicles", bad, "every listed pair spans both vehicles");
  });

  sb.guard("wv_pairs_same_vehicle", [&] {
    const auto wv = rig.within_vehicle_pairs();
    std::size_t bad = wv.empty() ? 1 : 0;
    for (const auto& [a, b] : wv) bad += rig.vehicle_of(a) != rig.vehicle_of(b) ? 1 : 0;
    sb.holds("wv_pairs_same_vehicle", bad, std::to_string(wv.size()) + " pairs");
  });

  sb.guard("wv_spatiotemporal_composition", [&] {
    std::size_t mismatches = 0;
    std::size_t n = 0;
    const auto wv = rig.within_vehicle_pairs();
    for (int i = 0; i < 200; ++i) {
      const RigState st = random_state(rng, 0);
      const RigState stau = random_state(rng, 1);
      for (const auto& [a, b] : wv) {
        for (const auto& [tgt, src] : {std::pair{a, b}, std::pair{b, a}}) {
          const SE3Transform full =
              context_transform({ContextKind::kWvSpatioTemporal, 0, tgt, src, 1}, rig, st, stau);
          const SE3Transform temporal = context_transform({ContextKind::kTemporal, 0, src, src, 1}, rig, st, stau);
          const SE3Transform spatial = context_transform({ContextKind::kWvSpatial, 0, tgt, src, 0}, rig, st, stau);
          mismatches += bit_equal(full, temporal * spatial) ? 0 : 1;
          ++n;
        }
      }
    }
    sb.holds("wv_spatiotemporal_composition", mismatches, std::to_string(n) + " contexts, bitwise");
  });

  sb.guard("joint_homomorphism", [&] {
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const CameraModel& cam = rig.cameras[i % kNumCameras];
      const SE3Transform a = random_transform(rng, M_PI, 5.0);
      const SE3Transform b = random_transform(rng, M_PI, 5.0);
      worst = std::max(worst, max_abs_diff(camera_pose_from_joint(cam, a * b),
                                           camera_pose_from_joint(cam, a) * camera_pose_from_joint(cam, b)));
    }
    sb.at_most("joint_homomorphism", worst, tol.group_abs, "f(a b) = f(a) f(b)");
  });

  sb.guard("incomplete_state", [&] {
    std::size_t missing = 0;
    RigState empty;
    try {
      context_transform({ContextKind::kCvSpatial, 0, 8, 2, 0}, rig, empty, empty);
      ++missing;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kIncompleteState) ++missing;
    }
    sb.holds("incomplete_state", missing, "missing cross-vehicle transform is reported");
  });
  return sb.take();
}

SuiteResult verify_closure(const VerifyTolerances& tol) {
  SuiteBuilder sb("closure");
  Rng rng(mix_seed(tol.seed, 3));
  const RigConfig rig = default_rig();

  sb.guard("cv_spatiotemporal_composition", [&] {
    std::size_t mismatches = 0;
    for (int i = 0; i < tol.closure_states; ++i) {
      const int offset = uniform(rng, 0.0, 1.0) < 0.5 ? -1 : 1;
      const RigState st = random_state(rng, 0);
      const RigState stau = random_state(rng, offset);
      const int type = static_cast<int>(rng() % 3);
      const auto& pairs = cv_pairs(type);
      auto [tgt, src] = pairs[rng() % pairs.size()];
      if (rng() % 2) std::swap(tgt, src);
      const SE3Transform full =
          context_transform({ContextKind::kCvSpatioTemporal, type, tgt, src, offset}, rig, st, stau);
      const SE3Transform temporal = context_transform({ContextKind::kTemporal, 0, src, src, offset}, rig, st, stau);
      const SE3Transform spatial = context_transform({ContextKind::kCvSpatial, type, tgt, src, 0}, rig, st, stau);
      mismatches += bit_equal(full, temporal * spatial) ? 0 : 1;
    }
    sb.holds("cv_spatiotemporal_composition", mismatches,
             std::to_string(tol.closure_states) + " random rig states, bitwise");
  });

  sb.guard("cv_pairs_table", [&] {
    static const char* kExpected =
        "Type-0: (C8&C2) (C7&C3)\n"
        "Type-1: (C9&C2) (C6&C3) (C8&C1) (C7&C4)\n"
        "Type-2: (C5&C2) (C5&C3) (C9&C1) (C6&C4) (C8&C0) (C7&C0)\n";
    const std::string got = pair_table_text({cv_pairs(0), cv_pairs(1), cv_pairs(2)});
    sb.holds("cv_pairs_table", got == kExpected ? 0 : 1, got == kExpected ? "verbatim" : "got: " + got);
  });

  sb.guard("vpc_loop_identity", [&] {
    TrajectorySpec spec;
    spec.frames = 10;
    const Trajectory traj = make_trajectory(spec);
    double worst = 0.0;
    for (int t = 0; t < traj.frames(); ++t) {
      for (int tau = 0; tau < traj.frames(); ++tau) {
        const ArticulatedMotion m = articulated_motion(traj, t, tau);
        worst = std::max(worst, max_abs_diff(cross_vehicle_pose_error(m.front, m.rear, m.cross_t, m.cross_tau),
                                             SE3Transform::identity()));
      }
    }
    sb.at_most("vpc_loop_identity", worst, tol.vpc_identity, "all frame pairs of a 10-frame drive");
  });
  return sb.take();
}

SuiteResult verify_warping(const VerifyTolerances& tol) {
  SuiteBuilder sb("warping");
  Rng rng(mix_seed(tol.seed, 4));
  const CameraModel cam = test_camera(160, 96);
  const Scene scene = smooth_room_scene();
  const SE3Transform target_pose = camera_pose({-2.0, 0.5, 1.5}, 0.1, 0.05);
  const SE3Transform source_pose = camera_pose({-1.6, 0.3, 1.6}, -0.15, 0.1);
  const CameraRender target = render_camera(scene, cam, target_pose);
  const CameraRender source = render_camera(scene, cam, source_pose);
  const SE3Transform x = source_pose.inverse() * target_pose;

  sb.guard("identity_warp", [&] {
    const auto w = warp_image(cam, cam, target.depth, SE3Transform::identity(), target.image);
    double worst = 0.0;
    std::size_t valid = 0;
    for (int y = 0; y < cam.height; ++y) {
      for (int xx = 0; xx < cam.width; ++xx) {
        if (!w.mask(xx, y)) continue;
        ++valid;
        for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(w.image(xx, y, c) - target.image(xx, y, c)));
      }
    }
    sb.at_most("identity_warp", worst, tol.warp_identity, std::to_string(valid) + " valid pixels");
  });

  sb.guard("mask_monotone", [&] {
    const auto base = warp_image(cam, cam, target.depth, x, source.image);
    std::size_t grown = 0;
    for (int trial = 0; trial < 5; ++trial) {
      DepthMap d = target.depth;
      PixelMask src_valid(cam.width, cam.height, 1);
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (uniform(rng, 0.0, 1.0) < 0.1) d[i] = 0.0;
        if (uniform(rng, 0.0, 1.0) < 0.05) src_valid[i] = 0;
      }
      const auto shrunk = warp_image(cam, cam, d, x, source.image);
      const auto masked = warp_image(cam, cam, target.depth, x, source.image, &src_valid);
      for (std::size_t i = 0; i < base.mask.size(); ++i) {
        if (shrunk.mask[i] && !base.mask[i]) ++grown;
        if (masked.mask[i] && !base.mask[i]) ++grown;
      }
    }
    sb.holds("mask_monotone", grown, "invalidating depth or source pixels never grows the mask");
  });

  sb.guard("rigid_equivariance", [&] {
    const auto a = warp_image(cam, cam, target.depth, x, source.image);
    double worst = 0.0;
    std::size_t mismatch = 0;
    for (int trial = 0; trial < 3; ++trial) {
      const SE3Transform g = random_transform(rng, M_PI, 20.0);
      const SE3Transform xg = (g * source_pose).inverse() * (g * target_pose);
      const auto b = warp_image(cam, cam, target.depth, xg, source.image);
      for (std::size_t i = 0; i < a.mask.size(); ++i) {
        if (a.mask[i] != b.mask[i]) {
          ++mismatch;
          continue;
        }
        if (!a.mask[i]) continue;
        for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(a.image.data()[3 * i + c] - b.image.data()[3 * i + c]));
      }
    }
    sb.at_most("rigid_equivariance", worst, tol.warp_identity,
               std::to_string(mismatch) + " mask flips over 3 world motions");
    sb.at_most("rigid_equivariance_mask", static_cast<double>(mismatch) / (3.0 * a.mask.size()), 1e-3,
               "fraction of pixels whose validity flips");
  });

  sb.guard("reprojected_depth", [&] {
    // Both views see the same surface, so reprojected source depth matches
    // target depth up to bilinear resampling.
    const auto rd = reproject_depth(cam, cam, source.depth, x.inverse(), target.depth);
    std::vector<double> rel;
    for (std::size_t i = 0; i < rd.mask.size(); ++i) {
      if (rd.mask[i]) rel.push_back(std::abs(rd.depth[i] - target.depth[i]) / target.depth[i]);
    }
    std::sort(rel.begin(), rel.end());
    const double median = rel.empty() ? NAN : rel[rel.size() / 2];
    sb.at_most("reprojected_depth_median_rel", median, 1e-3, std::to_string(rel.size()) + " pixels");
  });
  return sb.take();
}

SuiteResult verify_losses(const VerifyTolerances& tol) {
  SuiteBuilder sb("losses");
  Rng rng(mix_seed(tol.seed, 5));
  const int w = 40;
  const int h = 30;

  sb.guard("pe_nonnegative", [&] {
    double lowest = INFINITY;
    double self = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int channels = trial % 2 ? 3 : 1;
      const ImageBuffer a = random_image(rng, w, h, channels);
      const ImageBuffer b = random_image(rng, w, h, channels);
      const PixelMask all(w, h, 1);
      const auto cross = photometric_error(a, b, all);
      const auto same = photometric_error(a, a, all);
      for (double v : cross.data()) lowest = std::min(lowest, v);
      for (double v : same.data()) self = std::max(self, std::abs(v));
    }
    sb.at_least("pe_nonnegative", lowest, 0.0, "min over random pairs");
    sb.at_most("pe_self_zero", self, tol.loss_exact, "max |pe(x, x)|");
  });

  sb.guard("temporal_min_dominance", [&] {
    double worst = -INFINITY;
    for (int trial = 0; trial < 20; ++trial) {
      const ImageBuffer target = random_image(rng, w, h, 3);
      std::vector<WarpedImage<double>> warped;
      double single = INFINITY;
      for (int k = 0; k < 3; ++k) {
        warped.push_back({random_image(rng, w, h, 3), PixelMask(w, h, 1)});
        single = std::min(single, loss_spatial(target, warped.back()).value);
      }
      worst = std::max(worst, loss_temporal(target, warped).value - single);
    }
    sb.at_most("temporal_min_dominance", worst, 0.0, "loss_temporal - min single-source loss");
  });

  sb.guard("traversal_order", [&] {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const NormalMap a = random_normals(rng, w, h);
      const NormalMap b = random_normals(rng, w, h);
      std::vector<std::size_t> perm(a.normals.size());
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      NormalMap pa(w, h);
      NormalMap pb(w, h);
      PixelMask mask(w, h, 1);
      for (std::size_t i = 0; i < perm.size(); ++i) {
        pa.normals[i] = a.normals[perm[i]];
        pa.valid[i] = a.valid[perm[i]];
        pb.normals[i] = b.normals[perm[i]];
        pb.valid[i] = b.valid[perm[i]];
      }
      const double v0 = nc(a, b, mask).value;
      const double v1 = nc(pa, pb, mask).value;
      worst = std::max(worst, std::abs(v0 - v1) / std::max(std::abs(v0), 1e-300));

      // A horizontal flip of both images permutes the SSIM windows too.
      const ImageBuffer x = random_image(rng, w, h, 3);
      const ImageBuffer y = random_image(rng, w, h, 3);
      ImageBuffer fx = x;
      ImageBuffer fy = y;
      for (int yy = 0; yy < h; ++yy) {
        for (int xx = 0; xx < w; ++xx) {
          for (int c = 0; c < 3; ++c) {
            fx(xx, yy, c) = x(w - 1 - xx, yy, c);
            fy(xx, yy, c) = y(w - 1 - xx, yy, c);
          }
        }
      }
      const double p0 = loss_spatial(x, WarpedImage<double>{y, mask}).value;
      const double p1 = loss_spatial(fx, WarpedImage<double>{fy, mask}).value;
      worst = std::max(worst, std::abs(p0 - p1) / p0);
    }
    sb.at_most("traversal_order", worst, tol.loss_exact, "relative change under pixel permutation");
  });

  sb.guard("nc_range", [&] {
    std::size_t bad = 0;
    for (int trial = 0; trial < 10; ++trial) {
      const NormalMap a = random_normals(rng, w, h);
      const NormalMap b = random_normals(rng, w, h);
      const auto m = nc_map(a, b, PixelMask(w, h, 1));
      for (std::size_t i = 0; i < m.mask.size(); ++i) {
        if (m.mask[i] && (m.values[i] < 0.0 || m.values[i] > 1.0)) ++bad;
      }
      if (std::abs(nc(a, a, PixelMask(w, h, 1)).value) > tol.loss_exact) ++bad;
    }
    sb.holds("nc_range", bad, "NC in [0, 1], NC(a, a) = 0");
  });

  sb.guard("smoothness_constant_depth", [&] {
    const ImageBuffer img = random_image(rng, w, h, 3);
    const double v = loss_smoothness(DepthMap(w, h, 7.0), img).value;
    sb.at_most("smoothness_constant_depth", std::abs(v), tol.loss_exact);
  });

  sb.guard("aggregate_total", [&] {
    LossWeights weights;
    std::vector<TermResult> terms;
    double expected = 0.0;
    for (LossTerm t : {LossTerm::kPhotoTemporal, LossTerm::kSdc, LossTerm::kNc, LossTerm::kCameraHeight}) {
      const double v = uniform(rng, 0.0, 1.0);
      terms.push_back({t, {v, 10}});
      expected += term_weight(t, weights) * v;
    }
    terms.push_back({LossTerm::kVpc, {}});
    const LossReport r = aggregate(terms, weights);
    sb.at_most("aggregate_total", std::abs(r.total - expected), tol.loss_exact, "absent terms add nothing");
    const LossReport back = LossReport::from_text(r.to_text());
    sb.holds("report_roundtrip", back.to_text() == r.to_text() ? 0 : 1);
  });
  return sb.take();
}

SuiteResult verify_pose(const VerifyTolerances& tol) {
  SuiteBuilder sb("pose");
  Rng rng(mix_seed(tol.seed, 6));
  const VpcWeights weights;

  sb.guard("loop_identity", [&] {
    double worst_te = 0.0;
    double worst_loss = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      TrajectorySpec spec;
      spec.frames = 10;
      if (trial > 0) {
        spec.speed = uniform(rng, 0.1, 1.5);
        spec.yaw_rate = uniform(rng, -0.05, 0.05);
        spec.start_yaw = uniform(rng, -M_PI, M_PI);
        spec.articulation_start = uniform(rng, -0.5, 0.5);
        spec.articulation_swing = uniform(rng, -0.5, 0.5);
      }
      const Trajectory traj = make_trajectory(spec);
      for (int t = 0; t < traj.frames(); ++t) {
        for (int tau = 0; tau < traj.frames(); ++tau) {
          const ArticulatedMotion m = articulated_motion(traj, t, tau);
          const SE3Transform te = cross_vehicle_pose_error(m.front, m.rear, m.cross_t, m.cross_tau);
          worst_te = std::max(worst_te, max_abs_diff(te, SE3Transform::identity()));
          worst_loss = std::max(worst_loss, loss_vpc(te, weights));
        }
      }
    }
    sb.at_most("loop_identity", worst_te, tol.vpc_identity, "max |T_e - I| over 10 drives");
    sb.at_most("loop_loss", worst_loss, tol.vpc_loss, "max L_VPC");
  });

  TrajectorySpec spec;
  const Trajectory traj = make_trajectory(spec);
  const ArticulatedMotion m = articulated_motion(traj, 3, 4);
  auto loss_with_rear = [&](const SE3Transform& rear) {
    return loss_vpc(cross_vehicle_pose_error(m.front, rear, m.cross_t, m.cross_tau), weights);
  };

  sb.guard("translation_linear", [&] {
    const Eigen::Vector3d dir = random_unit(rng);
    const double got = loss_with_rear(SE3Transform::from_translation(0.1 * dir) * m.rear);
    sb.at_most("translation_linear", std::abs(got - 0.1 * weights.translation), tol.vpc_linear,
               fmt("L_VPC=%.12g for a 0.1 m offset", got));
    double prev = -1.0;
    std::size_t violations = 0;
    std::string values;
    for (double delta : {0.01, 0.05, 0.1, 0.5}) {
      const double v = loss_with_rear(SE3Transform::from_translation(delta * dir) * m.rear);
      violations += v > prev ? 0 : 1;
      prev = v;
      values += fmt(" %.6g", v);
    }
    sb.holds("translation_monotone", violations, "L_VPC over 0.01, 0.05, 0.1, 0.5 m:" + values);
  });

  sb.guard("rotation_monotone", [&] {
    const Eigen::Vector3d axis = random_unit(rng);
    double prev = -1.0;
    std::size_t violations = 0;
    for (double deg : {0.5, 5.0, 30.0, 60.0, 90.0, 135.0, 179.0}) {
      const double v = loss_with_rear(SE3Transform::from_axis_angle(axis, deg * kDeg) * m.rear);
      violations += v > prev ? 0 : 1;
      prev = v;
    }
    sb.holds("rotation_monotone", violations, "pure rotation up to 179 degrees");
  });

  sb.guard("zero_iff_identity", [&] {
    std::size_t bad = loss_vpc(SE3Transform::identity(), weights) == 0.0 ? 0 : 1;
    bad += loss_vpc(SE3Transform::from_translation({1e-9, 0.0, 0.0}), weights) > 0.0 ? 0 : 1;
    bad += loss_vpc(SE3Transform::from_axis_angle({0.0, 0.0, 1.0}, 1e-6), weights) > 0.0 ? 0 : 1;
    sb.holds("zero_iff_identity", bad);
  });

  sb.guard("distribute_pose", [&] {
    const RigConfig rig = default_rig();
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const RigState st = random_state(rng, 0);
      const RigState stau = random_state(rng, 1);
      for (Vehicle v : {Vehicle::kFront, Vehicle::kRear}) {
        const auto poses = distribute_pose({v, *stau.joint_motion(v), {}}, rig);
        for (const auto& [a, b] : rig.within_vehicle_pairs()) {
          if (rig.vehicle_of(a) != v) continue;
          const SE3Transform via = poses.at(b) * (rig.cameras[b].extrinsic_to_lidar.inverse() *
                                                   rig.cameras[a].extrinsic_to_lidar);
          const SE3Transform ctx = context_transform({ContextKind::kWvSpatioTemporal, 0, a, b, 1}, rig, st, stau);
          mismatches += bit_equal(via, ctx) ? 0 : 1;
        }
      }
    }
    sb.holds("distribute_pose", mismatches, "distributed camera poses reproduce the spatial-temporal transform");
  });

  sb.guard("motion_file_roundtrip", [&] {
    std::vector<MotionRecord> recs;
    for (int k = 0; k < traj.frames(); ++k) {
      recs.push_back({k, Vehicle::kFront, traj.front_pose(k)});
      recs.push_back({k, Vehicle::kRear, traj.rear_pose(k)});
    }
    const auto back = parse_motion_records(format_motion_records(recs), "roundtrip");
    std::size_t bad = back.size() == recs.size() ? 0 : 1;
    for (std::size_t i = 0; i < std::min(back.size(), recs.size()); ++i) {
      bad += back[i].frame == recs[i].frame && back[i].vehicle == recs[i].vehicle && bit_equal(back[i].pose, recs[i].pose)
                 ? 0
                 : 1;
    }
    sb.holds("motion_file_roundtrip", bad, "bit-exact");
  });
  return sb.take();
}

SuiteResult verify_metrics(const VerifyTolerances& tol) {
  SuiteBuilder sb("metrics");
  Rng rng(mix_seed(tol.seed, 10));
  const int w = 64;
  const int h = 48;
  auto random_depth = [&](double lo, double hi) {
    DepthMap d(w, h);
    for (auto& v : d.data()) v = uniform(rng, lo, hi);
    return d;
  };
  auto scaled = [](DepthMap d, double s) {
    for (auto& v : d.data()) v *= s;
    return d;
  };

  sb.guard("identity_fixed_point", [&] {
    const DepthMap g = random_depth(0.5, 80.0);
    const MetricReport r = evaluate(g, g);
    const double err = std::max({r.abs_rel, r.sq_rel, r.rmse, r.rmse_log});
    const double delta = std::max({1.0 - r.delta1, 1.0 - r.delta2, 1.0 - r.delta3});
    sb.at_most("identity_errors", err, tol.metrics_exact, "abs_rel, sq_rel, rmse, rmse_log");
    sb.at_most("identity_deltas", delta, tol.metrics_exact, "delta1..3 = 1");
  });

  sb.guard("scale_1_2", [&] {
    const DepthMap g = random_depth(0.5, 80.0);
    const MetricReport r = evaluate(scaled(g, 1.2), g);
    sb.at_most("scale_1_2_abs_rel", std::abs(r.abs_rel - 0.2), tol.metrics_exact, fmt("abs_rel=%.17g", r.abs_rel));
    sb.at_most("scale_1_2_delta1", 1.0 - r.delta1, tol.metrics_exact, fmt("delta1=%.17g", r.delta1));
  });

  sb.guard("scale_1_3", [&] {
    const DepthMap g = random_depth(0.5, 70.0);
    const MetricReport r = evaluate(scaled(g, 1.3), g);
    sb.at_most("scale_1_3_delta1", r.delta1, tol.metrics_exact, fmt("delta1=%.17g", r.delta1));
    sb.at_most("scale_1_3_abs_rel", std::abs(r.abs_rel - 0.3), tol.metrics_exact);
  });

  sb.guard("depth_cap", [&] {
    DepthMap g = random_depth(1.0, 150.0);
    std::size_t inside = 0;
    for (double v : g.data()) inside += v <= 100.0 ? 1 : 0;
    // Predictions beyond the cap are clamped to it.
    DepthMap p = g;
    for (auto& v : p.data()) v = v <= 100.0 && v > 99.0 ? 500.0 : v;
    const MetricReport r = evaluate(p, g);
    std::size_t bad = r.pixel_count == inside ? 0 : 1;
    MetricOptions opts;
    opts.max_depth = 50.0;
    std::size_t inside50 = 0;
    for (double v : g.data()) inside50 += v <= 50.0 ? 1 : 0;
    bad += evaluate(g, g, opts).pixel_count == inside50 ? 0 : 1;
    sb.holds("depth_cap", bad, std::to_string(inside) + " of " + std::to_string(g.size()) + " pixels within 100 m");
    sb.at_most("depth_cap_clamp", 1.0 - r.delta1, tol.metrics_exact, "predictions above the cap are clamped to it");
  });

  sb.guard("delta_monotone", [&] {
    std::size_t bad = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const DepthMap g = random_depth(0.5, 100.0);
      const DepthMap p = random_depth(0.5, 100.0);
      const MetricReport r = evaluate(p, g);
      bad += r.delta1 <= r.delta2 && r.delta2 <= r.delta3 ? 0 : 1;
    }
    sb.holds("delta_monotone", bad, "delta1 <= delta2 <= delta3 on 50 random pairs");
  });

  sb.guard("median_scaling", [&] {
    const DepthMap g = random_depth(0.5, 30.0);
    MetricOptions opts;
    opts.median_scaling = true;
    const MetricReport r = evaluate(scaled(g, 2.5), g, opts);
    sb.at_most("median_scaling", r.abs_rel, tol.metrics_exact, "scaled prediction evaluates to zero error");
  });

  sb.guard("empty_evaluation", [&] {
    std::size_t missing = 0;
    try {
      evaluate(DepthMap(4, 4, 0.0), DepthMap(4, 4, 0.0));
      ++missing;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyEvaluation) ++missing;
    }
    sb.holds("empty_evaluation", missing);
  });
  return sb.take();
}

}  // namespace articugeo
