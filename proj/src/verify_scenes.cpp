// Suites that need rendered scenes: normals, ground, ICP, renderer oracles,
// gradient checks and the loss oracle.

#include <algorithm>
#include <chrono>

#include "articugeo/config.hpp"
#include "articugeo/ground_height.hpp"
#include "articugeo/sensitivity.hpp"
#include "articugeo/synthetic_dataset.hpp"
#include "articugeo/verify.hpp"
#include "verify_internal.hpp"

namespace articugeo {

using namespace verify_detail;

namespace {

/// Sign-agnostic angle, degrees.
double axis_angle_deg(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return std::acos(std::clamp(std::abs(a.normalized().dot(b.normalized())), 0.0, 1.0)) * 180.0 / M_PI;
}

bool interior(int x, int y, int w, int h, int margin) {
  return x >= margin && y >= margin && x < w - margin && y < h - margin;
}

struct Mean {
  double sum = 0.0;
  std::size_t n = 0;
  void add(double v) {
    sum += v;
    ++n;
  }
  double value() const { return n ? sum / static_cast<double>(n) : NAN; }
};

/// A single wall filling the view of a level camera at the origin.
Scene wall_scene() {
  Scene s;
  s.walls = {{{6.0, 0.0}, {-1.0, 0.0}, -50.0, 50.0, default_texture()}};
  return s;
}

/// Flat ground with one box, seen from above: depth steps along the box outline.
Scene step_scene() {
  Scene s = ground_scene();
  s.boxes = {{{3.5, -1.0, 0.0}, {5.0, 1.0, 1.2}, default_texture()}};
  return s;
}

/// Source pose such that X maps target-camera to source-camera coordinates.
SE3Transform source_pose_for(const SE3Transform& target_pose, const SE3Transform& x) {
  return target_pose * x.inverse();
}

/// Pixels within `band` (Chebyshev) of a depth discontinuity.
PixelMask discontinuity_band(const DepthMap& d, int band, double rel_jump = 0.05) {
  const int w = d.width();
  const int h = d.height();
  PixelMask edge(w, h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double a = d(x, y);
      for (auto [dx, dy] : {std::pair{1, 0}, std::pair{0, 1}}) {
        if (x + dx >= w || y + dy >= h) continue;
        const double b = d(x + dx, y + dy);
        if (a > 0.0 && b > 0.0 && std::abs(a - b) > rel_jump * std::min(a, b)) {
          edge(x, y) = 1;
          edge(x + dx, y + dy) = 1;
        }
      }
    }
  }
  PixelMask out(w, h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!edge(x, y)) continue;
      for (int yy = std::max(0, y - band); yy <= std::min(h - 1, y + band); ++yy) {
        for (int xx = std::max(0, x - band); xx <= std::min(w - 1, x + band); ++xx) out(xx, yy) = 1;
      }
    }
  }
  return out;
}

}  // namespace

SuiteResult verify_normals(const VerifyTolerances& tol) {
  SuiteBuilder sb("normals");
  Rng rng(mix_seed(tol.seed, 11));
  const CameraModel cam = test_camera(320, 192);
  const int w = cam.width;
  const int h = cam.height;

  struct Planar {
    const char* name;
    Scene scene;
    SE3Transform pose;
  };
  const std::vector<Planar> planes = {
      {"ground", ground_scene(), camera_pose({0.0, 0.0, 1.5}, 0.0, 25.0 * kDeg)},
      {"wall", wall_scene(), camera_pose({0.0, 0.0, 1.5}, 0.1, 0.0)},
  };

  // Direct reprojection of normals rebuilt from source GT depth, compared in
  // the source frame against R N_target.
  auto equivariance = [&](bool pure_translation) {
    double worst_mean = 0.0;
    std::string detail;
    for (const auto& pl : planes) {
      const CameraRender target = render_camera(pl.scene, cam, pl.pose);
      const NormalMap nt = normal_from_depth(target.depth, cam);
      for (int trial = 0; trial < 4; ++trial) {
        SE3Transform x = random_transform(rng, 15.0 * kDeg, 0.5);
        if (pure_translation) x = SE3Transform::from_translation(x.translation());
        const CameraRender source = render_camera(pl.scene, cam, source_pose_for(pl.pose, x));
        const NormalMap ns = normal_from_depth(source.depth, cam);
        const auto direct = reproject_normals_direct(ns, target.depth, x, cam, cam);
        Mean m;
        for (int y = 0; y < h; ++y) {
          for (int xx = 0; xx < w; ++xx) {
            if (!interior(xx, y, w, h, 2) || !direct.mask(xx, y) || !direct.normals.valid(xx, y) || !nt.valid(xx, y)) {
              continue;
            }
            const Eigen::Vector3d expected = pure_translation ? nt.normals(xx, y) : x.rotation() * nt.normals(xx, y);
            m.add(angle_deg(direct.normals.normals(xx, y), expected));
          }
        }
        if (m.n < 1000) throw Error(ErrorCode::kEmptyOverlap, std::string(pl.name) + ": too few overlapping pixels");
        worst_mean = std::max(worst_mean, m.value());
      }
      detail += std::string(detail.empty() ? "" : ", ") + pl.name;
    }
    return std::pair{worst_mean, "worst mean over 4 motions per scene (" + detail + ")"};
  };

  sb.guard("rotation_equivariance", [&] {
    const auto [v, d] = equivariance(false);
    sb.at_most("rotation_equivariance", v, tol.equivariance_deg, d);
  });
  sb.guard("translation_invariance", [&] {
    const auto [v, d] = equivariance(true);
    sb.at_most("translation_invariance", v, tol.equivariance_deg, d);
  });

  sb.guard("unit_norm", [&] {
    const Scene room = smooth_room_scene();
    const SE3Transform pose = camera_pose({-2.0, 0.5, 1.5}, 0.1, 0.05);
    const SE3Transform x = random_transform(rng, 10.0 * kDeg, 0.5);
    const CameraRender t = render_camera(room, cam, pose);
    const CameraRender s = render_camera(room, cam, source_pose_for(pose, x));
    const NormalMap n = normal_from_depth(t.depth, cam);
    const auto r = reconstruct_normals(normal_from_depth(s.depth, cam), t.depth, x, cam, cam);
    double worst = 0.0;
    for (std::size_t i = 0; i < n.normals.size(); ++i) {
      if (n.valid[i]) worst = std::max(worst, std::abs(n.normals[i].norm() - 1.0));
      if (r.normals.valid[i]) worst = std::max(worst, std::abs(r.normals.normals[i].norm() - 1.0));
    }
    sb.at_most("unit_norm", worst, tol.unit_norm, "normal_from_depth and direct reprojection outputs");

    double scale_worst = 0.0;
    std::size_t mask_changes = 0;
    for (double s_ : {0.5, 2.0, 3.0}) {
      DepthMap d = t.depth;
      for (auto& v : d.data()) v *= s_;
      const NormalMap ns = normal_from_depth(d, cam);
      for (std::size_t i = 0; i < n.normals.size(); ++i) {
        if (ns.valid[i] != n.valid[i]) ++mask_changes;
        if (n.valid[i] && ns.valid[i]) scale_worst = std::max(scale_worst, (ns.normals[i] - n.normals[i]).norm());
      }
    }
    sb.at_most("scale_invariance", scale_worst, tol.unit_norm,
               std::to_string(mask_changes) + " validity changes for s in {0.5, 2, 3}");
  });

  sb.guard("step_direct_vs_depth", [&] {
    const Scene scene = step_scene();
    const SE3Transform pose = camera_pose({0.0, 0.0, 2.5}, 0.0, 30.0 * kDeg);
    const CameraRender target = render_camera(scene, cam, pose);
    const PixelMask band = discontinuity_band(target.depth, tol.step_band_px);
    Mean direct_err;
    Mean depth_err;
    for (int trial = 0; trial < 3; ++trial) {
      const SE3Transform x = random_transform(rng, 5.0 * kDeg, 0.4);
      const CameraRender source = render_camera(scene, cam, source_pose_for(pose, x));
      const auto direct = reconstruct_normals(normal_from_depth(source.depth, cam), target.depth, x, cam, cam);
      const auto via = reproject_normals_via_depth(source.depth, target.depth, x, cam, cam);
      for (int y = 0; y < h; ++y) {
        for (int xx = 0; xx < w; ++xx) {
          if (!band(xx, y) || !target.depth(xx, y)) continue;
          if (!direct.mask(xx, y) || !direct.normals.valid(xx, y) || !via.mask(xx, y)) continue;
          const Eigen::Vector3d& gt = target.normals.normals(xx, y);
          direct_err.add(axis_angle_deg(direct.normals.normals(xx, y), gt));
          depth_err.add(axis_angle_deg(via.normals.normals(xx, y), gt));
        }
      }
    }
    if (direct_err.n < 200) throw Error(ErrorCode::kEmptyOverlap, "too few band pixels");
    sb.add("step_direct_vs_depth", direct_err.value() < depth_err.value(), direct_err.value(), depth_err.value(),
           fmt("mean error direct %.4g deg < depth-interpolated %.4g deg", direct_err.value(), depth_err.value()) +
               " over " + std::to_string(direct_err.n) + " band pixels");
  });

  sb.guard("c1_agreement", [&] {
    const Scene room = smooth_room_scene();
    const SE3Transform pose = camera_pose({-2.0, 0.5, 1.5}, 0.1, 0.05);
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const SE3Transform x = random_transform(rng, 10.0 * kDeg, 0.5);
      const CameraRender t = render_camera(room, cam, pose);
      const CameraRender s = render_camera(room, cam, source_pose_for(pose, x));
      const auto direct = reconstruct_normals(normal_from_depth(s.depth, cam), t.depth, x, cam, cam);
      const auto via = reproject_normals_via_depth(s.depth, t.depth, x, cam, cam);
      Mean m;
      for (std::size_t i = 0; i < t.depth.size(); ++i) {
        if (direct.mask[i] && direct.normals.valid[i] && via.mask[i]) {
          m.add(angle_deg(direct.normals.normals[i], via.normals.normals[i]));
        }
      }
      worst = std::max(worst, m.value());
    }
    sb.at_most("c1_agreement", worst, tol.c1_agreement_deg, "mean angle, rounded room, 3 motions");
  });
  return sb.take();
}

SuiteResult verify_ground(const VerifyTolerances& tol) {
  SuiteBuilder sb("ground");
  const RigConfig rig = default_rig();
  TrajectorySpec spec;
  spec.frames = 1;
  const Trajectory traj = make_trajectory(spec);
  const FrameRender flat = render(ground_scene(), rig, traj, 0);
  const FrameRender room = render(smooth_room_scene(), rig, traj, 0);

  sb.guard("mask_monotone", [&] {
    std::size_t violations = 0;
    for (int c = 0; c < kNumCameras; ++c) {
      const Priors p = prior_provider(room.cameras[c], 1.0, 3.0, tol.seed, c);
      PixelMask prev;
      for (double deg : {1.0, 2.0, 5.0, 10.0, 20.0, 45.0}) {
        GroundParams gp;
        gp.s_thr = deg * kDeg;
        const PixelMask m = ground_mask(p.normals, p.depth, rig.cameras[c], gp);
        if (!prev.empty()) {
          for (std::size_t i = 0; i < m.size(); ++i) violations += prev[i] && !m[i] ? 1 : 0;
        }
        prev = m;
      }
    }
    sb.holds("mask_monotone", violations, "growing s_thr never drops a pixel (noisy priors)");
  });

  sb.guard("mask_vs_truth", [&] {
    std::size_t gt = 0, hit = 0, flagged = 0, wrong = 0;
    for (int c = 0; c < kNumCameras; ++c) {
      const Priors p = prior_provider(flat.cameras[c], 1.0, 0.0, tol.seed, c);
      const PixelMask m = ground_mask(p.normals, p.depth, rig.cameras[c]);
      const PixelMask& truth = flat.cameras[c].ground;
      for (std::size_t i = 0; i < m.size(); ++i) {
        gt += truth[i];
        hit += truth[i] && m[i];
        flagged += m[i];
        wrong += m[i] && !truth[i];
      }
    }
    sb.at_least("mask_coverage", static_cast<double>(hit) / gt, tol.ground_mask_coverage, "flat ground, clean priors");
    sb.at_most("mask_false_positive", static_cast<double>(wrong) / flagged, tol.ground_mask_false_positive);
  });

  // Per camera: ground mask from clean priors, normals from the evaluated depth.
  auto ch_for_scale = [&](int c, double s) {
    const CameraRender& cr = flat.cameras[c];
    const Priors p = prior_provider(cr, 1.0, 0.0, tol.seed, c);
    const PixelMask m = ground_mask(p.normals, p.depth, rig.cameras[c]);
    DepthMap d = cr.depth;
    for (auto& v : d.data()) v *= s;
    const auto hm = height_map(d, normal_from_depth(d, rig.cameras[c]), rig.cameras[c]);
    return loss_ch(hm, m, rig.camera_heights_gt[c]);
  };

  sb.guard("flat_ground_gt", [&] {
    double worst = 0.0;
    for (int c = 0; c < kNumCameras; ++c) {
      const auto v = ch_for_scale(c, 1.0);
      if (!v.present()) throw Error(ErrorCode::kEmptyEvaluation, camera_name(c) + " sees no ground");
      worst = std::max(worst, v.value / rig.camera_heights_gt[c]);
    }
    sb.at_most("flat_ground_gt", worst, tol.ch_flat_ground_rel, "L_CH / h_gt with GT depth, all cameras");
  });

  sb.guard("ch_scale_linearity", [&] {
    double worst = 0.0;
    std::string where;
    for (double s : {0.5, 2.0, 3.0}) {
      for (int c = 0; c < kNumCameras; ++c) {
        const double expected = std::abs(s - 1.0) * rig.camera_heights_gt[c];
        const double rel = std::abs(ch_for_scale(c, s).value - expected) / expected;
        if (rel >= worst) {
          worst = rel;
          where = camera_name(c) + fmt(" s=%.1f", s);
        }
      }
    }
    sb.at_most("ch_scale_linearity", worst, tol.ch_scale_rel, "relative error vs |s-1| h_gt, worst at " + where);
  });

  sb.guard("normal_terms_scale", [&] {
    RigLayout layout;
    layout.width = 160;
    layout.height = 96;
    const RigConfig small = default_rig(layout);
    TrajectorySpec ts;
    ts.frames = 3;
    const Dataset base = make_synthetic_dataset(ground_scene(), small, make_trajectory(ts));
    LossOptions opts;
    opts.contexts.sdc = opts.contexts.smoothness = opts.contexts.snc = false;
    opts.contexts.camera_height = opts.contexts.vpc = false;
    const LossReport r0 = compute_losses(base, opts);
    const char* names[] = {"nc", "pnc_T", "pnc_S", "pnc_ST", "pnc_MVRC"};
    double worst = 0.0;
    std::string where;
    for (double s : {0.5, 2.0, 3.0}) {
      Dataset scaled = base;
      for (auto& f : scaled.frames) {
        for (auto& v : f.views) {
          for (auto& d : v.depth.data()) d *= s;
        }
      }
      const LossReport r = compute_losses(scaled, opts);
      for (const char* n : names) {
        const LossEntry* a = r0.find(n);
        const LossEntry* b = r.find(n);
        if (!a || !b || !a->present() || !b->present()) throw Error(ErrorCode::kEmptyEvaluation, std::string(n) + " absent");
        const double change = std::abs(a->value - b->value);
        if (change >= worst) {
          worst = change;
          where = std::string(n) + fmt(" s=%.1f", s);
        }
      }
    }
    sb.at_most("normal_terms_scale", worst, tol.normal_scale_change,
               "max |change| of NC and PNC terms under depth scaling, worst " + where);
  });

  sb.guard("pipeline_ch_scale", [&] {
    RigLayout layout;
    layout.width = 160;
    layout.height = 96;
    TrajectorySpec ts;
    ts.frames = 1;
    Dataset data = make_synthetic_dataset(ground_scene(), default_rig(layout), make_trajectory(ts));
    for (auto& v : data.frames[0].views) {
      for (auto& d : v.depth.data()) d *= 2.0;
    }
    LossOptions opts;
    opts.contexts = ContextToggles{false, false, {}, false, false, false, false, false, false, false, true, false};
    const LossEntry* ch = compute_losses(data, opts).find("ch");
    const double h = data.rig.camera_heights_gt[0];
    const double v = ch ? ch->value : NAN;
    sb.at_most("pipeline_ch_scale", std::abs(v - h) / h, tol.ch_scale_rel, fmt("L_CH=%.6g with depth x2, h_gt=%.3g", v, h));
  });
  return sb.take();
}

namespace {

struct IcpTrial {
  double rot_deg = 0.0;
  double trans_m = 0.0;
  double overlap = 0.0;
  bool monotone = true;
  int iterations = 0;
};

/// Two partial scans of a boxy room from a random articulated pose, each
/// limited to a +-110 degree azimuth window facing its own vehicle's forward
/// axis, registered from a 10 degree / 0.3 m perturbation of ground truth.
IcpTrial icp_trial(const VerifyTolerances& tol, int index) {
  Rng rng(mix_seed(tol.seed, 12, index));
  Scene scene = room_scene(12.0, 9.0, 40.0);
  scene.boxes = {{{3, 4, 0}, {5, 6, 2.5}, default_texture()},
                 {{-9, -5, 0}, {-7, -2, 1.8}, default_texture()},
                 {{6, -7, 0}, {8, -5.5, 3}, default_texture()},
                 {{-4, 5, 0}, {-2.5, 7.5, 1.2}, default_texture()}};
  TrajectorySpec ts;
  ts.frames = 1;
  ts.start_x = uniform(rng, -2.0, 2.0);
  ts.start_y = uniform(rng, -1.0, 1.0);
  ts.start_yaw = uniform(rng, -0.3, 0.3);
  ts.articulation_start = uniform(rng, -0.3, 0.3);
  const Trajectory traj = make_trajectory(ts);

  LidarPattern pattern;
  pattern.azimuth_min_deg = -110.0;
  pattern.azimuth_max_deg = 110.0;
  pattern.n_azimuth = static_cast<int>(1800 * 220 / 360);
  const PointCloud target = sample_lidar(scene, traj.front_pose(0), pattern, tol.icp_noise_m, mix_seed(tol.seed, 12, index, 1));
  const PointCloud source = sample_lidar(scene, traj.rear_pose(0), pattern, tol.icp_noise_m, mix_seed(tol.seed, 12, index, 2));
  const SE3Transform gt = traj.cross_vehicle(0);

  IcpTrial out;
  std::size_t inside = 0;
  for (const auto& p : source.points) {
    const Point3 q = gt * p;
    const double az = std::atan2(q.y(), q.x()) * 180.0 / M_PI;
    inside += az >= pattern.azimuth_min_deg && az <= pattern.azimuth_max_deg ? 1 : 0;
  }
  out.overlap = static_cast<double>(inside) / static_cast<double>(source.size());

  const SE3Transform perturb = SE3Transform::from_axis_angle(random_unit(rng), tol.icp_init_rot_deg * kDeg,
                                                             random_unit(rng) * tol.icp_init_trans_m);
  IcpConfig cfg = default_calibration_icp();
  cfg.initial_guess = perturb * gt;
  const IcpResult r = icp_register(source, target, cfg);
  out.rot_deg = rotation_angle_between(r.transform, gt) * 180.0 / M_PI;
  out.trans_m = (r.transform.translation() - gt.translation()).norm();
  out.iterations = r.iterations;
  for (std::size_t i = 1; i < r.residual_history.size(); ++i) {
    if (r.residual_history[i] > r.residual_history[i - 1]) out.monotone = false;
  }
  return out;
}

}  // namespace

SuiteResult verify_icp(const VerifyTolerances& tol) {
  SuiteBuilder sb("icp");
  Rng rng(mix_seed(tol.seed, 13));

  sb.guard("recovery", [&] {
    double rot = 0.0, trans = 0.0, lo = 1.0, hi = 0.0;
    std::size_t rising = 0;
    for (int i = 0; i < tol.icp_trials; ++i) {
      const IcpTrial t = icp_trial(tol, i);
      rot = std::max(rot, t.rot_deg);
      trans = std::max(trans, t.trans_m);
      lo = std::min(lo, t.overlap);
      hi = std::max(hi, t.overlap);
      rising += t.monotone ? 0 : 1;
    }
    const std::string trials = std::to_string(tol.icp_trials) + " trials";
    sb.at_most("recovery_rotation", rot, tol.icp_rot_deg, "worst degrees over " + trials);
    sb.at_most("recovery_translation", trans, tol.icp_trans_m, "worst meters over " + trials);
    sb.holds("residual_monotone", rising, "trials with a residual increase");
    sb.at_most("overlap", std::max(std::abs(lo - tol.icp_overlap), std::abs(hi - tol.icp_overlap)),
               tol.icp_overlap_slack, fmt("overlap range %.3f..%.3f", lo, hi));
  });

  Scene scene = room_scene(12.0, 9.0, 40.0);
  scene.boxes = {{{3, 4, 0}, {5, 6, 2.5}, default_texture()}};
  const SE3Transform pose = SE3Transform::from_translation({0.5, -0.5, 2.0});
  const PointCloud cloud = sample_lidar(scene, pose, LidarPattern{}, tol.icp_noise_m, mix_seed(tol.seed, 13, 1));

  sb.guard("identical_clouds", [&] {
    IcpConfig cfg = default_calibration_icp();
    cfg.initial_guess = SE3Transform::from_axis_angle(random_unit(rng), 5.0 * kDeg, random_unit(rng) * 0.1);
    const IcpResult r = icp_register(cloud, cloud, cfg);
    const double err = (r.transform.matrix() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff();
    sb.at_most("identical_clouds", err, tol.icp_exact, "max |T - I| from a 5 degree / 0.1 m start");
  });

  sb.guard("left_invariance", [&] {
    const SE3Transform moved = SE3Transform::from_axis_angle({0.0, 0.0, 1.0}, 0.2, {0.6, 0.2, 0.0});
    const PointCloud src = transform_cloud(cloud, moved.inverse());
    IcpConfig cfg;
    cfg.initial_guess = SE3Transform::from_axis_angle({0.0, 0.0, 1.0}, 0.15, {0.5, 0.1, 0.0});
    const IcpResult a = icp_register(src, cloud, cfg);
    const SE3Transform g = random_transform(rng, M_PI, 5.0);
    IcpConfig cfg_g = cfg;
    cfg_g.initial_guess = g * cfg.initial_guess * g.inverse();
    const IcpResult b = icp_register(transform_cloud(src, g), transform_cloud(cloud, g), cfg_g);
    const double err = ((g * a.transform * g.inverse()).matrix() - b.transform.matrix()).cwiseAbs().maxCoeff();
    sb.at_most("left_invariance", err, tol.icp_exact, "G T G^-1 vs registration of G-moved clouds");
  });

  sb.guard("empty_overlap", [&] {
    std::size_t missing = 0;
    try {
      icp_register(PointCloud{}, cloud);
      ++missing;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyOverlap) ++missing;
    }
    sb.holds("empty_overlap", missing, "empty source is an empty-overlap error");
  });

  sb.guard("projection_occlusion", [&] {
    const RigConfig rig = default_rig();
    std::size_t violations = 0;
    std::size_t projected = 0;
    for (int c : {5, 6, 9}) {
      const CameraModel& cam = rig.cameras[c];
      const SE3Transform to_cam = cam.extrinsic_to_lidar.inverse();
      const DepthMap d = project_cloud_to_image(cloud, to_cam, cam);
      for (const auto& p : cloud.points) {
        const Point3 q = to_cam * p;
        if (!(q.z() > 0.0)) continue;
        const long u = std::lround(cam.fx * q.x() / q.z() + cam.cx);
        const long v = std::lround(cam.fy * q.y() / q.z() + cam.cy);
        if (u < 0 || v < 0 || u >= cam.width || v >= cam.height) continue;
        ++projected;
        if (!(d(u, v) > 0.0) || d(u, v) > q.z()) ++violations;
      }
    }
    sb.holds("projection_occlusion", violations, std::to_string(projected) + " projected points");
  });
  return sb.take();
}

SuiteResult verify_synth(const VerifyTolerances& tol) {
  SuiteBuilder sb("synth");
  const CameraModel cam = test_camera(320, 192);

  sb.guard("plane_depth", [&] {
    const double height = 1.5;
    const CameraRender r = render_camera(ground_scene(), cam, camera_pose({0.0, 0.0, height}, 0.3, 0.0));
    double worst = 0.0;
    std::size_t wrong_validity = 0;
    for (int y = 0; y < cam.height; ++y) {
      for (int x = 0; x < cam.width; ++x) {
        const double d = r.depth(x, y);
        if (y <= cam.cy) {
          wrong_validity += d > 0.0 && y < cam.cy ? 1 : 0;
          continue;
        }
        const double expected = height * cam.fy / (y - cam.cy);
        const double rx = (x - cam.cx) / cam.fx;
        const double ry = (y - cam.cy) / cam.fy;
        // Beyond the scene's range cap the ray legitimately misses.
        if (expected * std::sqrt(1.0 + rx * rx + ry * ry) > 0.999 * ground_scene().max_range) continue;
        if (!(d > 0.0)) {
          ++wrong_validity;
          continue;
        }
        worst = std::max(worst, std::abs(d - expected) / expected);
      }
    }
    sb.at_most("plane_depth", worst, tol.render_plane_depth, "relative error vs h fy / (v - cy)");
    sb.holds("plane_validity", wrong_validity, "sky rows empty, ground rows filled");
  });

  sb.guard("surface_reprojection", [&] {
    // Lifted pixels of a box room lie on one of its planes.
    const Scene scene = room_scene(8.0, 6.0, 5.0);
    const SE3Transform pose = camera_pose({-1.0, 0.5, 1.7}, 0.4, 10.0 * kDeg);
    const CameraRender r = render_camera(scene, cam, pose);
    double worst = 0.0;
    for (int y = 0; y < cam.height; ++y) {
      for (int x = 0; x < cam.width; ++x) {
        const double d = r.depth(x, y);
        if (!(d > 0.0)) continue;
        const Point3 p = pose * unproject(Pixel{double(x), double(y)}, d, cam);
        const double dist = std::min({std::abs(p.z()), std::abs(std::abs(p.x()) - 8.0), std::abs(std::abs(p.y()) - 6.0)});
        worst = std::max(worst, dist);
      }
    }
    sb.at_most("surface_reprojection", worst, tol.render_reprojection_m, "meters off the nearest plane");
  });

  sb.guard("gt_normals", [&] {
    const CameraRender r = render_camera(smooth_room_scene(), cam, camera_pose({-2.0, 0.5, 1.5}, 0.1, 0.05));
    const NormalMap n = normal_from_depth(r.depth, cam);
    double worst = 0.0;
    std::size_t count = 0;
    for (int y = 0; y + 1 < cam.height; ++y) {
      for (int x = 0; x + 1 < cam.width; ++x) {
        if (!n.valid(x, y) || !r.normals.valid(x, y)) continue;
        // Flat interior: the whole stencil shares one surface normal.
        const auto& g = r.normals.normals(x, y);
        if ((r.normals.normals(x + 1, y) - g).norm() > 1e-12 || (r.normals.normals(x, y + 1) - g).norm() > 1e-12) continue;
        worst = std::max(worst, angle_deg(n.normals(x, y), g));
        ++count;
      }
    }
    sb.at_most("gt_normals", worst, tol.gt_normal_deg, std::to_string(count) + " flat-interior pixels");
  });

  sb.guard("deterministic", [&] {
    TrajectorySpec ts;
    ts.frames = 2;
    const Trajectory traj = make_trajectory(ts);
    RenderOptions opts;
    opts.lidar = true;
    opts.lidar_noise = 0.01;
    opts.seed = tol.seed + 5;
    RigLayout layout;
    layout.width = 96;
    layout.height = 64;
    const RigConfig rig = default_rig(layout);
    const Scene scene = room_scene();
    const FrameRender a = render(scene, rig, traj, 1, opts);
    const FrameRender b = render(scene, rig, traj, 1, opts);
    std::size_t diffs = 0;
    for (int c = 0; c < kNumCameras; ++c) {
      diffs += a.cameras[c].image == b.cameras[c].image ? 0 : 1;
      diffs += a.cameras[c].depth == b.cameras[c].depth ? 0 : 1;
      diffs += a.cameras[c].normals.normals == b.cameras[c].normals.normals ? 0 : 1;
    }
    diffs += a.lidar_front->points == b.lidar_front->points ? 0 : 1;
    diffs += a.lidar_rear->points == b.lidar_rear->points ? 0 : 1;
    const Priors pa = prior_provider(a.cameras[5], 1.3, 2.0, tol.seed, 9);
    const Priors pb = prior_provider(b.cameras[5], 1.3, 2.0, tol.seed, 9);
    diffs += pa.normals.normals == pb.normals.normals && pa.depth == pb.depth ? 0 : 1;
    sb.holds("deterministic", diffs, "rasters, sweeps and priors of two identical renders");
  });

  sb.guard("prior_noise", [&] {
    const CameraRender r = render_camera(smooth_room_scene(), cam, camera_pose({0.0, 0.0, 1.5}, 0.0, 0.0));
    const Priors p = prior_provider(r, 2.0, tol.prior_noise_deg, tol.seed, 3);
    double worst = 0.0;
    double depth_err = 0.0;
    for (std::size_t i = 0; i < r.depth.size(); ++i) {
      if (!r.normals.valid[i]) continue;
      worst = std::max(worst, std::abs(angle_deg(p.normals.normals[i], r.normals.normals[i]) - tol.prior_noise_deg));
      depth_err = std::max(depth_err, std::abs(p.depth[i] - 2.0 * r.depth[i]));
    }
    sb.at_most("prior_noise_angle", worst, 1e-6, "deviation from the configured angle, degrees");
    sb.at_most("prior_depth_scale", depth_err, tol.loss_exact, "pseudo depth = scale x GT");
  });

  sb.guard("lidar_on_surfaces", [&] {
    const Scene scene = room_scene(8.0, 6.0, 5.0);
    const SE3Transform pose = SE3Transform::from_translation({0.5, -0.3, 2.0});
    const PointCloud pc = sample_lidar(scene, pose, LidarPattern{}, 0.0, 1);
    double worst = 0.0;
    for (const auto& q : pc.points) {
      const Point3 p = pose * q;
      worst = std::max(worst, std::min({std::abs(p.z()), std::abs(std::abs(p.x()) - 8.0), std::abs(std::abs(p.y()) - 6.0),
                                        std::abs(p.z() - 5.0)}));
    }
    sb.at_most("lidar_on_surfaces", worst, tol.render_reprojection_m, std::to_string(pc.size()) + " noise-free returns");
  });

  sb.guard("default_texture", [&] { sb.holds("default_texture", default_texture().is_valid() ? 0 : 1); });
  return sb.take();
}

SuiteResult verify_gradcheck(const VerifyTolerances& tol) {
  SuiteBuilder sb("gradcheck");
  const CameraModel cam = test_camera(128, 80);
  const int w = cam.width;
  const int h = cam.height;
  const Scene scene = smooth_room_scene();
  const SE3Transform target_pose = camera_pose({-2.0, 0.0, 1.5}, 0.0, 0.0);
  const SE3Transform x = SE3Transform::from_axis_angle({0.0, 1.0, 0.0}, 0.08, {-0.4, 0.05, 0.1});
  const CameraRender tr = render_camera(scene, cam, target_pose);
  const CameraRender srr = render_camera(scene, cam, source_pose_for(target_pose, x));

  SensitivityProblem p;
  p.target_cam = cam;
  p.source_cam = cam;
  p.target_to_source = x;
  p.target_image = tr.image;
  p.source_image = srr.image;
  p.target_prior = prior_provider(tr, 1.0, 2.0, tol.seed + 1, 0).normals;
  p.source_prior = prior_provider(srr, 1.0, 2.0, tol.seed + 1, 1).normals;
  // Evaluate away from the optimum so the gradients are not all near zero.
  DepthMap sd = srr.depth;
  DepthMap d = tr.depth;
  for (int yy = 0; yy < h; ++yy) {
    for (int xx = 0; xx < w; ++xx) {
      sd(xx, yy) *= 1.0 + 0.03 * std::sin(0.21 * xx + 0.4) * std::cos(0.17 * yy);
      d(xx, yy) *= 1.0 + 0.03 * std::cos(0.13 * xx) * std::sin(0.19 * yy + 1.0);
    }
  }
  p.source_normals = normal_from_depth(sd, cam);

  for (SensitivityLoss loss : all_sensitivity_losses()) {
    const std::string name = to_string(loss);
    sb.guard(name, [&] {
      Rng rng(mix_seed(tol.seed, 14, static_cast<std::uint64_t>(loss)));
      double worst = 0.0;
      int n = 0;
      int skipped = 0;
      while (n < tol.grad_samples) {
        if (skipped > 100 * tol.grad_samples) throw Error(ErrorCode::kEmptyEvaluation, "too few usable pixels");
        const int px = 2 + static_cast<int>(rng() % (w - 4));
        const int py = 2 + static_cast<int>(rng() % (h - 4));
        if (cell_boundary_distance(p, d, px, py) < tol.grad_boundary_px) {
          ++skipped;
          continue;
        }
        DepthMap dir(w, h, 0.0);
        dir(px, py) = 1.0;
        const double ad = directional_derivative(p, loss, d, dir);
        const double fd = central_difference(p, loss, d, dir, tol.grad_step_rel * d(px, py));
        const double scale = std::max(std::abs(ad), std::abs(fd));
        worst = std::max(worst, scale > 0.0 ? std::abs(ad - fd) / scale : 0.0);
        ++n;
      }
      sb.at_most(name, worst, tol.grad_rel,
                 std::to_string(n) + " interior pixels, " + std::to_string(skipped) + " boundary or unmatched skipped");
    });
  }
  return sb.take();
}

SuiteResult verify_oracle(const VerifyTolerances& tol) {
  SuiteBuilder sb("oracle");
  sb.guard("closure", [&] {
    const auto start = std::chrono::steady_clock::now();
    TrajectorySpec spec;
    spec.frames = tol.closure_frames;
    const Dataset data = make_synthetic_dataset(smooth_room_scene(), default_rig(), make_trajectory(spec));
    const LossReport report = compute_losses(data, LossOptions{});
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const LossEntry& e : report.entries) {
      // Smoothness is a regularizer, not a consistency term; it has no oracle.
      if (e.name == "smooth") continue;
      if (!e.present()) {
        sb.add(e.name, false, NAN, tol.closure_loss, "no valid pixel");
        continue;
      }
      sb.at_most(e.name, e.value, tol.closure_loss, std::to_string(e.count) + " samples");
    }
    sb.at_most("runtime_s", seconds, tol.closure_runtime_s,
               std::to_string(thread_count()) + " thread(s), render and losses of " + std::to_string(spec.frames) +
                   " frames");
  });
  return sb.take();
}

}  // namespace articugeo
