#include "articugeo/pipeline.hpp"

#include <map>

#include "articugeo/surface_normal.hpp"

namespace articugeo {

const FrameData* Dataset::frame(int index) const {
  for (const auto& f : frames) {
    if (f.index == index) return &f;
  }
  return nullptr;
}

std::string SpatialSource::group() const {
  return cross_vehicle ? "cv" + std::to_string(cv_type) : "wv";
}

std::vector<SpatialSource> spatial_sources(const RigConfig& rig, int target, const ContextToggles& toggles) {
  std::vector<SpatialSource> out;
  auto partner = [target](const CameraPair& p) {
    if (p.first == target) return p.second;
    if (p.second == target) return p.first;
    return -1;
  };
  if (toggles.within_vehicle) {
    for (const auto& p : rig.within_vehicle_pairs()) {
      const int j = partner(p);
      if (j >= 0) out.push_back({j, false, 0});
    }
  }
  for (int type : toggles.cv_types) {
    for (const auto& p : rig.cross_vehicle_pairs(type)) {
      const int j = partner(p);
      if (j >= 0) out.push_back({j, true, type});
    }
  }
  return out;
}

RigState frame_state(const FrameData& t, const FrameData& tau) {
  RigState s;
  s.timestamp = tau.index;
  s.cross_vehicle = tau.cross_vehicle;
  s.joint_motion_front = relative_motion(t.front_pose, tau.front_pose);
  s.joint_motion_rear = relative_motion(t.rear_pose, tau.rear_pose);
  return s;
}

namespace {

constexpr const char* kGroups[] = {"wv", "cv0", "cv1", "cv2"};

class Sums {
 public:
  void add(LossTerm term, const TermValue<double>& v) { terms_[term].add(v); }
  void add_group(const std::string& name, const TermValue<double>& v) { groups_[name].add(v); }
  void declare_group(const std::string& name) { groups_[name]; order_.push_back(name); }

  TermValue<double> term(LossTerm t) const {
    auto it = terms_.find(t);
    return it == terms_.end() ? TermValue<double>{} : it->second.result();
  }
  std::vector<BreakdownResult> breakdown() const {
    std::vector<BreakdownResult> out;
    for (const auto& name : order_) out.push_back({name, groups_.at(name).result()});
    return out;
  }

 private:
  std::map<LossTerm, TermAccumulator<double>> terms_;
  std::map<std::string, TermAccumulator<double>> groups_;
  std::vector<std::string> order_;
};

const NormalMap& prior_normals(const ViewData& v, int cam, int frame) {
  if (!v.prior_normals) {
    throw Error(ErrorCode::kMissingPriors, "prior normals missing for " + camera_name(cam) + " frame " +
                                               std::to_string(frame));
  }
  return *v.prior_normals;
}

const DepthMap& prior_depth(const ViewData& v, int cam, int frame) {
  if (!v.prior_depth) {
    throw Error(ErrorCode::kMissingPriors, "prior depth missing for " + camera_name(cam) + " frame " +
                                               std::to_string(frame));
  }
  return *v.prior_depth;
}

}  // namespace

LossReport compute_losses(const Dataset& data, const LossOptions& opts) {
  const RigConfig& rig = data.rig;
  const ContextToggles& tg = opts.contexts;
  const double alpha = opts.weights.alpha;
  require(opts.weights.is_valid(), ErrorCode::kInvalidArgument, "compute_losses: invalid weights");
  for (int type : tg.cv_types) {
    require(type >= 0 && type <= 2, ErrorCode::kInvalidArgument, "cv type must be 0, 1 or 2");
  }
  require(!data.frames.empty(), ErrorCode::kEmptyContexts, "compute_losses: no frames");

  // Spatial groups that can appear at all under the toggles.
  std::vector<std::string> groups;
  if (tg.within_vehicle) groups.push_back(kGroups[0]);
  for (int type : tg.cv_types) groups.push_back(kGroups[1 + type]);
  const bool spatial_on = !groups.empty();
  const bool temporal_on = !opts.temporal_offsets.empty();
  const bool st_on = spatial_on && temporal_on && tg.spatiotemporal;
  const bool mvrc_on = st_on && tg.mvrc;

  // Source pixels without depth hold no scene content and are never sampled.
  std::map<int, std::array<PixelMask, kNumCameras>> masks;
  for (const FrameData& f : data.frames) {
    auto& m = masks[f.index];
    for (int c = 0; c < kNumCameras; ++c) m[c] = valid_depth_mask(f.views[c].depth);
  }

  Sums sums;
  auto declare = [&](const char* term, bool on) {
    if (!on) return;
    for (const auto& g : groups) sums.declare_group(std::string(term) + "." + g);
  };
  declare("photo_S", spatial_on);
  declare("photo_ST", st_on);
  declare("photo_MVRC", mvrc_on);
  declare("sdc", spatial_on && tg.sdc);
  declare("snc", spatial_on && tg.snc);
  declare("pnc_S", spatial_on && tg.pnc);
  declare("pnc_ST", st_on && tg.pnc);
  declare("pnc_MVRC", mvrc_on && tg.pnc);

  for (const FrameData& ft : data.frames) {
    std::vector<std::pair<const FrameData*, RigState>> taus;
    if (temporal_on) {
      for (int off : opts.temporal_offsets) {
        if (const FrameData* f = data.frame(ft.index + off)) taus.emplace_back(f, frame_state(ft, *f));
      }
    }
    RigState state_t;
    state_t.timestamp = ft.index;
    state_t.cross_vehicle = ft.cross_vehicle;

    // Estimated normals of this frame, shared by NC, SNC and camera height.
    std::array<NormalMap, kNumCameras> est_normals;
    for (int c = 0; c < kNumCameras; ++c) est_normals[c] = normal_from_depth(ft.views[c].depth, rig.cameras[c]);

    for (int i = 0; i < kNumCameras; ++i) {
      const ViewData& tv = ft.views[i];
      const CameraModel& cam_i = rig.cameras[i];
      const DepthMap& d_i = tv.depth;

      if (tg.temporal && !taus.empty()) {
        std::vector<WarpedImage<double>> warped;
        std::vector<ReprojectedNormals<double>> pnc_rec;
        for (const auto& [fs, st] : taus) {
          const SE3Transform t = context_transform({ContextKind::kTemporal, 0, i, i, fs->index - ft.index}, rig,
                                                   state_t, st);
          warped.push_back(warp_image(cam_i, cam_i, d_i, t, fs->views[i].image, &masks.at(fs->index)[i]));
          if (tg.pnc) {
            pnc_rec.push_back(reconstruct_normals(prior_normals(fs->views[i], i, fs->index), d_i, t, cam_i, cam_i));
          }
        }
        sums.add(LossTerm::kPhotoTemporal, loss_temporal(tv.image, warped, alpha));
        if (tg.pnc) sums.add(LossTerm::kPncTemporal, loss_pnc_min(pnc_rec, prior_normals(tv, i, ft.index)));
      }

      if (tg.smoothness) sums.add(LossTerm::kSmoothness, loss_smoothness(d_i, tv.image));
      if (tg.nc) {
        const PixelMask all(d_i.width(), d_i.height(), 1);
        sums.add(LossTerm::kNc, nc(est_normals[i], prior_normals(tv, i, ft.index), all));
      }
      if (tg.camera_height) {
        const PixelMask ground =
            ground_mask(prior_normals(tv, i, ft.index), prior_depth(tv, i, ft.index), cam_i, opts.ground);
        const auto hm = height_map(d_i, est_normals[i], cam_i);
        sums.add(LossTerm::kCameraHeight, loss_ch(hm, ground, rig.camera_heights_gt[i]));
      }

      for (const SpatialSource& src : spatial_sources(rig, i, tg)) {
        const int j = src.source_cam;
        const std::string g = "." + src.group();
        const CameraModel& cam_j = rig.cameras[j];
        const ContextKind sk = src.cross_vehicle ? ContextKind::kCvSpatial : ContextKind::kWvSpatial;
        const ContextKind stk = src.cross_vehicle ? ContextKind::kCvSpatioTemporal : ContextKind::kWvSpatioTemporal;
        const SE3Transform t_s = context_transform({sk, src.cv_type, i, j, 0}, rig, state_t, state_t);

        const auto warp_s = warp_image(cam_i, cam_j, d_i, t_s, ft.views[j].image, &masks.at(ft.index)[j]);
        const auto ps = loss_spatial(tv.image, warp_s, alpha);
        sums.add(LossTerm::kPhotoSpatial, ps);
        sums.add_group("photo_S" + g, ps);

        if (tg.sdc) {
          const auto rd = reproject_depth(cam_j, cam_i, ft.views[j].depth, t_s.inverse(), d_i);
          const auto v = loss_sdc(d_i, rd.depth, rd.mask);
          sums.add(LossTerm::kSdc, v);
          sums.add_group("sdc" + g, v);
        }
        if (tg.snc) {
          const auto v = loss_snc(est_normals[i], est_normals[j], d_i, t_s, cam_i, cam_j);
          sums.add(LossTerm::kSnc, v);
          sums.add_group("snc" + g, v);
        }
        std::optional<ReprojectedNormals<double>> rec_s;
        if (tg.pnc) {
          rec_s = reconstruct_normals(prior_normals(ft.views[j], j, ft.index), d_i, t_s, cam_i, cam_j);
          const auto v = loss_pnc_spatial(*rec_s, prior_normals(tv, i, ft.index));
          sums.add(LossTerm::kPncSpatial, v);
          sums.add_group("pnc_S" + g, v);
        }

        if (!st_on || taus.empty()) continue;
        std::vector<WarpedImage<double>> warp_st;
        std::vector<ReprojectedNormals<double>> rec_st;
        for (const auto& [fs, st] : taus) {
          const SE3Transform t_st =
              context_transform({stk, src.cv_type, i, j, fs->index - ft.index}, rig, state_t, st);
          warp_st.push_back(warp_image(cam_i, cam_j, d_i, t_st, fs->views[j].image, &masks.at(fs->index)[j]));
          if (tg.pnc) {
            rec_st.push_back(reconstruct_normals(prior_normals(fs->views[j], j, fs->index), d_i, t_st, cam_i, cam_j));
          }
        }
        const auto pst = loss_spatiotemporal(tv.image, warp_st, alpha);
        sums.add(LossTerm::kPhotoSpatioTemporal, pst);
        sums.add_group("photo_ST" + g, pst);
        if (tg.pnc) {
          const auto v = loss_pnc_min(rec_st, prior_normals(tv, i, ft.index));
          sums.add(LossTerm::kPncSpatioTemporal, v);
          sums.add_group("pnc_ST" + g, v);
        }
        if (mvrc_on) {
          const auto pm = loss_mvrc(warp_s, warp_st, alpha);
          sums.add(LossTerm::kPhotoMvrc, pm);
          sums.add_group("photo_MVRC" + g, pm);
          if (tg.pnc) {
            const auto v = loss_pnc_mvrc(*rec_s, rec_st);
            sums.add(LossTerm::kPncMvrc, v);
            sums.add_group("pnc_MVRC" + g, v);
          }
        }
      }
    }

    if (tg.vpc) {
      for (const auto& [fs, st] : taus) {
        const SE3Transform te = cross_vehicle_pose_error(*st.joint_motion_front, *st.joint_motion_rear,
                                                         ft.cross_vehicle, fs->cross_vehicle);
        sums.add(LossTerm::kVpc, {loss_vpc(te, opts.vpc_weights), 1});
      }
    }
  }

  std::vector<TermResult> terms;
  auto emit = [&](LossTerm t, bool on) {
    if (on) terms.push_back({t, sums.term(t)});
  };
  emit(LossTerm::kPhotoTemporal, tg.temporal && temporal_on);
  emit(LossTerm::kPhotoSpatial, spatial_on);
  emit(LossTerm::kPhotoSpatioTemporal, st_on);
  emit(LossTerm::kPhotoMvrc, mvrc_on);
  emit(LossTerm::kSdc, spatial_on && tg.sdc);
  emit(LossTerm::kSmoothness, tg.smoothness);
  emit(LossTerm::kNc, tg.nc);
  emit(LossTerm::kSnc, spatial_on && tg.snc);
  emit(LossTerm::kPncTemporal, tg.pnc && tg.temporal && temporal_on);
  emit(LossTerm::kPncSpatial, tg.pnc && spatial_on);
  emit(LossTerm::kPncSpatioTemporal, tg.pnc && st_on);
  emit(LossTerm::kPncMvrc, tg.pnc && mvrc_on);
  emit(LossTerm::kCameraHeight, tg.camera_height);
  emit(LossTerm::kVpc, tg.vpc && temporal_on);
  return aggregate(terms, opts.weights, sums.breakdown());
}

}  // namespace articugeo
