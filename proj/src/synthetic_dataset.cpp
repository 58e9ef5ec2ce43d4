#include "articugeo/synthetic_dataset.hpp"

namespace articugeo {

Dataset make_synthetic_dataset(const Scene& scene, const RigConfig& rig, const Trajectory& traj,
                               const SyntheticPriors& priors) {
  scene.validate();
  rig.validate();
  traj.validate();
  Dataset data;
  data.rig = rig;
  for (int k = 0; k < traj.frames(); ++k) {
    FrameRender fr = render(scene, rig, traj, k);
    FrameData f;
    f.index = k;
    f.front_pose = traj.front_pose(k);
    f.rear_pose = traj.rear_pose(k);
    f.cross_vehicle = traj.cross_vehicle(k);
    for (int c = 0; c < kNumCameras; ++c) {
      CameraRender& cr = fr.cameras[c];
      Priors p = prior_provider(cr, priors.depth_scale, priors.normal_noise_deg, priors.seed, prior_stream(k, c));
      ViewData& v = f.views[c];
      v.image = std::move(cr.image);
      v.depth = std::move(cr.depth);
      v.prior_depth = std::move(p.depth);
      v.prior_normals = std::move(p.normals);
    }
    data.frames.push_back(std::move(f));
  }
  return data;
}

}  // namespace articugeo
