#include "articugeo/synth_world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "articugeo/parallel.hpp"

namespace articugeo {

Eigen::Vector3d Texture::color(const Eigen::Vector3d& x) const {
  Eigen::Vector3d c = base;
  for (const auto& g : gratings) c += g.amplitude * std::sin(2.0 * M_PI * g.wavevector.dot(x) + g.phase);
  return c;
}

bool Texture::is_valid() const {
  Eigen::Vector3d swing = Eigen::Vector3d::Zero();
  for (const auto& g : gratings) {
    if (!g.wavevector.allFinite() || !g.amplitude.allFinite() || !std::isfinite(g.phase)) return false;
    swing += g.amplitude.cwiseAbs();
  }
  return base.allFinite() && (base - swing).minCoeff() >= 0.0 && (base + swing).maxCoeff() <= 1.0;
}

Texture default_texture() {
  Texture t;
  t.base = {0.5, 0.5, 0.5};
  t.gratings = {
      {{1.0 / 10.6, 1.0 / 14.2, 1.0 / 9.4}, 0.3, {0.12, 0.08, 0.10}},
      {{-1.0 / 12.2, 1.0 / 8.6, -1.0 / 11.8}, 1.1, {0.09, 0.13, 0.07}},
      {{1.0 / 7.4, -1.0 / 16.6, 1.0 / 13.4}, 2.0, {0.07, 0.09, 0.12}},
  };
  return t;
}

void Scene::validate() const {
  require(max_range > 0.0, ErrorCode::kInvalidArgument, "scene: max_range must be positive");
  if (ground) {
    require(ground->texture.is_valid(), ErrorCode::kInvalidArgument, "scene: ground texture leaves [0, 1]");
  }
  if (room) {
    const Eigen::Vector3d ext = room->max - room->min;
    require(room->radius > 0.0 && 2.0 * room->radius <= ext.minCoeff(), ErrorCode::kInvalidArgument,
            "scene: room radius must be positive and fit every extent");
    require(room->texture.is_valid(), ErrorCode::kInvalidArgument, "scene: room texture leaves [0, 1]");
    if (ground) {
      require(ground->height <= room->min.z(), ErrorCode::kInvalidArgument, "scene: ground above the room floor");
    }
  }
  for (std::size_t i = 0; i < walls.size(); ++i) {
    const Wall& w = walls[i];
    const std::string who = "scene: wall " + std::to_string(i);
    require(std::abs(w.normal.norm() - 1.0) < 1e-9, ErrorCode::kInvalidArgument, who + " normal is not unit");
    require(w.z_min < w.z_max, ErrorCode::kInvalidArgument, who + " has empty height range");
    require(w.texture.is_valid(), ErrorCode::kInvalidArgument, who + " texture leaves [0, 1]");
  }
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Box& b = boxes[i];
    const std::string who = "scene: box " + std::to_string(i);
    require((b.max - b.min).minCoeff() > 0.0, ErrorCode::kInvalidArgument, who + " is empty");
    require(b.texture.is_valid(), ErrorCode::kInvalidArgument, who + " texture leaves [0, 1]");
    if (ground) {
      require(b.min.z() >= ground->height, ErrorCode::kInvalidArgument, who + " reaches below the ground");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const Box& o = boxes[j];
      const bool overlap = (b.min.array() < o.max.array()).all() && (o.min.array() < b.max.array()).all();
      require(!overlap, ErrorCode::kInvalidArgument, who + " intersects box " + std::to_string(j));
    }
  }
}

namespace {

void consider(std::optional<Hit>& best, double t, const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
              const Eigen::Vector3d& normal, const Texture* tex, bool ground) {
  if (best && t >= best->t) return;
  Hit h;
  h.t = t;
  h.point = origin + t * dir;
  h.normal = normal;
  h.texture = tex;
  h.ground = ground;
  best = h;
}

// Distance from x to the inner box, with the closest inner point.
double inner_distance(const RoundedRoom& r, const Eigen::Vector3d& x, Eigen::Vector3d& closest) {
  const Eigen::Vector3d lo = r.min.array() + r.radius;
  const Eigen::Vector3d hi = r.max.array() - r.radius;
  closest = x.cwiseMax(lo).cwiseMin(hi);
  return (x - closest).norm();
}

// Exit point of a ray starting inside the room. The distance to the inner box
// is convex along the ray, so Newton iteration from the bounding-box exit
// approaches the root monotonically from outside.
std::optional<double> room_exit(const RoundedRoom& r, const Eigen::Vector3d& o, const Eigen::Vector3d& d) {
  double t_far = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (d[a] > 0.0) t_far = std::min(t_far, (r.max[a] - o[a]) / d[a]);
    if (d[a] < 0.0) t_far = std::min(t_far, (r.min[a] - o[a]) / d[a]);
  }
  if (!(t_far > 0.0) || !std::isfinite(t_far)) return std::nullopt;
  Eigen::Vector3d c;
  double t = t_far;
  for (int it = 0; it < 100; ++it) {
    const Eigen::Vector3d x = o + t * d;
    const double dist = inner_distance(r, x, c);
    const double g = dist - r.radius;
    if (dist <= 0.0) break;
    const double slope = d.dot(x - c) / dist;
    if (!(slope > 0.0)) break;
    const double step = g / slope;
    t -= step;
    if (std::abs(step) <= 1e-15 * t) break;
  }
  // Flat faces get the closed-form plane intersection.
  const Eigen::Vector3d x = o + t * d;
  inner_distance(r, x, c);
  int outside = -1;
  int n_out = 0;
  for (int a = 0; a < 3; ++a) {
    if (std::abs(x[a] - c[a]) > 1e-9) {
      outside = a;
      ++n_out;
    }
  }
  if (n_out == 1) {
    const double plane = x[outside] > c[outside] ? r.max[outside] : r.min[outside];
    t = (plane - o[outside]) / d[outside];
  }
  return t;
}

}  // namespace

bool RoundedRoom::contains(const Eigen::Vector3d& x) const {
  Eigen::Vector3d c;
  return inner_distance(*this, x, c) < radius;
}

std::optional<Hit> intersect(const Scene& scene, const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) {
  const double t_max = scene.max_range / dir.norm();
  std::optional<Hit> best;
  if (scene.ground && dir.z() != 0.0) {
    const double t = (scene.ground->height - origin.z()) / dir.z();
    if (t > 0.0 && t <= t_max) consider(best, t, origin, dir, Eigen::Vector3d::UnitZ(), &scene.ground->texture, true);
  }
  if (scene.room && scene.room->contains(origin)) {
    const RoundedRoom& r = *scene.room;
    const auto t = room_exit(r, origin, dir);
    if (t && *t > 0.0 && *t <= t_max && !(best && *t >= best->t)) {
      const Eigen::Vector3d x = origin + *t * dir;
      Eigen::Vector3d c;
      inner_distance(r, x, c);
      Eigen::Vector3d n = Eigen::Vector3d::Zero();
      bool floor = false;
      int n_out = 0;
      int axis = 0;
      for (int a = 0; a < 3; ++a) {
        if (std::abs(x[a] - c[a]) > 1e-9) {
          ++n_out;
          axis = a;
        }
      }
      if (n_out == 1) {
        n[axis] = x[axis] > c[axis] ? -1.0 : 1.0;
        floor = axis == 2 && n[axis] > 0.0;
      } else {
        n = (c - x).normalized();
      }
      consider(best, *t, origin, dir, n, &r.texture, floor);
    }
  }
  for (const Wall& w : scene.walls) {
    const double denom = w.normal.x() * dir.x() + w.normal.y() * dir.y();
    if (denom == 0.0) continue;
    const double t = (w.normal.dot(w.point) - w.normal.x() * origin.x() - w.normal.y() * origin.y()) / denom;
    if (!(t > 0.0 && t <= t_max)) continue;
    const double z = origin.z() + t * dir.z();
    if (z < w.z_min || z > w.z_max) continue;
    consider(best, t, origin, dir, Eigen::Vector3d(w.normal.x(), w.normal.y(), 0.0), &w.texture, false);
  }
  for (const Box& b : scene.boxes) {
    // Slab test; the entry face gives the normal.
    double t0 = 0.0;
    double t1 = t_max;
    int axis = -1;
    bool inside_hit = true;
    for (int a = 0; a < 3; ++a) {
      if (dir[a] == 0.0) {
        if (origin[a] < b.min[a] || origin[a] > b.max[a]) {
          inside_hit = false;
          break;
        }
        continue;
      }
      double ta = (b.min[a] - origin[a]) / dir[a];
      double tb = (b.max[a] - origin[a]) / dir[a];
      if (ta > tb) std::swap(ta, tb);
      if (ta > t0) {
        t0 = ta;
        axis = a;
      }
      t1 = std::min(t1, tb);
      if (t0 > t1) {
        inside_hit = false;
        break;
      }
    }
    // Rays starting inside a box (axis < 0) see nothing of it.
    if (!inside_hit || axis < 0) continue;
    Eigen::Vector3d n = Eigen::Vector3d::Zero();
    n[axis] = dir[axis] > 0.0 ? -1.0 : 1.0;
    consider(best, t0, origin, dir, n, &b.texture, false);
  }
  return best;
}

Scene room_scene(double half_x, double half_y, double wall_height) {
  Scene s;
  s.ground = GroundPlane{};
  s.walls = {
      {{half_x, 0.0}, {-1.0, 0.0}, 0.0, wall_height, default_texture()},
      {{-half_x, 0.0}, {1.0, 0.0}, 0.0, wall_height, default_texture()},
      {{0.0, half_y}, {0.0, -1.0}, 0.0, wall_height, default_texture()},
      {{0.0, -half_y}, {0.0, 1.0}, 0.0, wall_height, default_texture()},
  };
  return s;
}

Scene smooth_room_scene() {
  Scene s;
  s.room = RoundedRoom{};
  return s;
}

Scene ground_scene() {
  Scene s;
  s.ground = GroundPlane{};
  return s;
}

SE3Transform HingeGeometry::rear_to_front(double phi) const {
  return SE3Transform::from_translation({-front_arm, 0.0, 0.0}) *
         SE3Transform::from_axis_angle(Eigen::Vector3d::UnitZ(), phi) *
         SE3Transform::from_translation({-rear_arm, 0.0, 0.0});
}

SE3Transform Trajectory::front_pose(int frame) const {
  require(frame >= 0 && frame < frames(), ErrorCode::kOutOfRange,
          "trajectory: frame " + std::to_string(frame) + " out of range");
  return front_poses[frame];
}

SE3Transform Trajectory::rear_pose(int frame) const { return front_pose(frame) * cross_vehicle(frame); }

SE3Transform Trajectory::cross_vehicle(int frame) const {
  require(frame >= 0 && frame < static_cast<int>(articulation.size()), ErrorCode::kOutOfRange,
          "trajectory: frame " + std::to_string(frame) + " out of range");
  return hinge.rear_to_front(articulation[frame]);
}

void Trajectory::validate() const {
  require(!front_poses.empty(), ErrorCode::kInvalidArgument, "trajectory: no frames");
  require(front_poses.size() == articulation.size(), ErrorCode::kInvalidArgument,
          "trajectory: pose and articulation counts differ");
  require(hinge.front_arm >= 0.0 && hinge.rear_arm >= 0.0, ErrorCode::kInvalidArgument,
          "trajectory: negative hinge arm");
  for (std::size_t k = 0; k < front_poses.size(); ++k) {
    const std::string who = "trajectory: frame " + std::to_string(k);
    require(front_poses[k].is_valid(1e-6), ErrorCode::kInvalidArgument, who + " pose is not rigid");
    require(std::abs(articulation[k]) <= M_PI / 2, ErrorCode::kInvalidArgument,
            who + " articulation exceeds 90 degrees");
    if (k > 0) {
      const SE3Transform step = front_poses[k - 1].inverse() * front_poses[k];
      require(step.translation().norm() <= 10.0 &&
                  rotation_angle_between(front_poses[k - 1], front_poses[k]) <= M_PI / 4,
              ErrorCode::kInvalidArgument, who + " jumps from the previous frame");
    }
  }
}

Trajectory make_trajectory(const TrajectorySpec& spec) {
  require(spec.frames > 0, ErrorCode::kInvalidArgument, "trajectory: frames must be positive");
  Trajectory traj;
  traj.hinge = spec.hinge;
  double x = spec.start_x;
  double y = spec.start_y;
  double yaw = spec.start_yaw;
  for (int k = 0; k < spec.frames; ++k) {
    traj.front_poses.push_back(
        SE3Transform::from_axis_angle(Eigen::Vector3d::UnitZ(), yaw, {x, y, spec.lidar_height}));
    const double frac = spec.frames > 1 ? static_cast<double>(k) / (spec.frames - 1) : 0.0;
    traj.articulation.push_back(spec.articulation_start + frac * spec.articulation_swing);
    // Midpoint heading keeps the path on a circular arc.
    const double mid = yaw + 0.5 * spec.yaw_rate;
    x += spec.speed * std::cos(mid);
    y += spec.speed * std::sin(mid);
    yaw += spec.yaw_rate;
  }
  traj.validate();
  return traj;
}

ArticulatedMotion articulated_motion(const Trajectory& traj, int t, int tau) {
  ArticulatedMotion m;
  m.front = traj.front_pose(tau).inverse() * traj.front_pose(t);
  m.rear = traj.rear_pose(tau).inverse() * traj.rear_pose(t);
  m.cross_t = traj.cross_vehicle(t);
  m.cross_tau = traj.cross_vehicle(tau);
  return m;
}

RigState rig_state(const Trajectory& traj, int t, int tau) {
  const ArticulatedMotion m = articulated_motion(traj, t, tau);
  RigState s;
  s.timestamp = tau;
  s.cross_vehicle = m.cross_tau;
  s.joint_motion_front = m.front;
  s.joint_motion_rear = m.rear;
  return s;
}

std::vector<double> LidarPattern::elevations() const {
  if (!elevations_deg.empty()) return elevations_deg;
  std::vector<double> e(32);
  for (int i = 0; i < 32; ++i) e[i] = -25.0 + 40.0 * i / 31.0;
  return e;
}

bool LidarPattern::is_valid() const {
  if (n_azimuth <= 0 || !(azimuth_min_deg < azimuth_max_deg)) return false;
  if (azimuth_max_deg - azimuth_min_deg > 360.0) return false;
  for (double e : elevations()) {
    if (!(e > -90.0 && e < 90.0)) return false;
  }
  return true;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  };
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ a);
  h = splitmix(h ^ b);
  return splitmix(h ^ c);
}

PointCloud sample_lidar(const Scene& scene, const SE3Transform& lidar_pose, const LidarPattern& pattern,
                        double noise_sigma, std::uint64_t seed) {
  require(pattern.is_valid(), ErrorCode::kInvalidArgument, "sample_lidar: invalid pattern");
  require(noise_sigma >= 0.0, ErrorCode::kInvalidArgument, "sample_lidar: negative noise");
  const std::vector<double> elev = pattern.elevations();
  std::vector<double> sorted = elev;
  std::sort(sorted.begin(), sorted.end());
  const double elev_step = sorted.size() > 1 ? (sorted.back() - sorted.front()) / (sorted.size() - 1) : 0.0;
  const double az_span = pattern.azimuth_max_deg - pattern.azimuth_min_deg;
  const double az_step = az_span / pattern.n_azimuth;
  const double deg = M_PI / 180.0;

  std::mt19937_64 rng(mix_seed(seed, 0x11da5));
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);

  PointCloud cloud;
  for (int a = 0; a < pattern.n_azimuth; ++a) {
    for (double e : elev) {
      double az = pattern.azimuth_min_deg + (a + 0.5) * az_step;
      double el = e;
      if (pattern.jitter) {
        az += unit(rng) * az_step;
        el += unit(rng) * elev_step;
      }
      const double n = noise(rng);
      const Eigen::Vector3d d_local(std::cos(el * deg) * std::cos(az * deg), std::cos(el * deg) * std::sin(az * deg),
                                    std::sin(el * deg));
      const Eigen::Vector3d d_world = lidar_pose.rotation() * d_local;
      const auto hit = intersect(scene, lidar_pose.translation(), d_world);
      if (!hit) continue;
      const double range = hit->t + noise_sigma * n;
      if (!(range > 0.0)) continue;
      cloud.points.push_back(range * d_local);
    }
  }
  return cloud;
}

CameraRender render_camera(const Scene& scene, const CameraModel& cam, const SE3Transform& camera_to_world) {
  require(cam.is_valid(), ErrorCode::kInvalidArgument, "render: invalid camera");
  CameraRender out;
  out.image = ImageBuffer(cam.width, cam.height, 3);
  out.depth = DepthMap(cam.width, cam.height, 0.0);
  out.normals = NormalMap(cam.width, cam.height, NormalOrientation::kTowardCamera);
  out.ground = PixelMask(cam.width, cam.height, 0);
  const Eigen::Matrix3d& r = camera_to_world.rotation();
  const Eigen::Vector3d& o = camera_to_world.translation();
  parallel_rows(cam.height, [&](int y) {
    for (int x = 0; x < cam.width; ++x) {
      const Eigen::Vector3d ray = cam.ray<double>(x, y);
      const auto hit = intersect(scene, o, r * ray);
      if (!hit) continue;
      // The ray has unit z in the camera frame, so t is the camera depth.
      out.depth(x, y) = hit->t;
      Eigen::Vector3d n = r.transpose() * hit->normal;
      if (n.dot(ray) > 0.0) n = -n;
      out.normals.normals(x, y) = n;
      out.normals.valid(x, y) = 1;
      out.ground(x, y) = hit->ground ? 1 : 0;
      const Eigen::Vector3d c = hit->texture->color(hit->point);
      for (int ch = 0; ch < 3; ++ch) out.image(x, y, ch) = c[ch];
    }
  });
  return out;
}

FrameRender render(const Scene& scene, const RigConfig& rig, const Trajectory& traj, int frame,
                   const RenderOptions& opts) {
  FrameRender fr;
  fr.frame = frame;
  const SE3Transform front = traj.front_pose(frame);
  const SE3Transform rear = traj.rear_pose(frame);
  for (int c = 0; c < kNumCameras; ++c) {
    const SE3Transform& lidar = rig.vehicle_of(c) == Vehicle::kFront ? front : rear;
    fr.cameras[c] = render_camera(scene, rig.cameras[c], lidar * rig.cameras[c].extrinsic_to_lidar);
  }
  if (opts.lidar) {
    fr.lidar_front = sample_lidar(scene, front, opts.pattern, opts.lidar_noise, mix_seed(opts.seed, frame, 0));
    fr.lidar_rear = sample_lidar(scene, rear, opts.pattern, opts.lidar_noise, mix_seed(opts.seed, frame, 1));
  }
  return fr;
}

Priors prior_provider(const CameraRender& gt, double scale, double normal_noise_deg, std::uint64_t seed,
                      std::uint64_t stream) {
  require(scale > 0.0, ErrorCode::kInvalidArgument, "prior_provider: scale must be positive");
  require(normal_noise_deg >= 0.0, ErrorCode::kInvalidArgument, "prior_provider: negative normal noise");
  Priors p;
  p.depth = gt.depth;
  for (auto& d : p.depth.data()) d *= scale;
  p.normals = gt.normals;
  if (normal_noise_deg == 0.0) return p;
  const double angle = normal_noise_deg * M_PI / 180.0;
  std::mt19937_64 rng(mix_seed(seed, 0x9a1035, stream));
  std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
  for (std::size_t i = 0; i < p.normals.normals.size(); ++i) {
    const double psi = uni(rng);
    if (!p.normals.valid[i]) continue;
    const Eigen::Vector3d n = p.normals.normals[i].normalized();
    // Orthonormal basis of the plane perpendicular to n.
    const Eigen::Vector3d helper = std::abs(n.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    const Eigen::Vector3d b1 = n.cross(helper).normalized();
    const Eigen::Vector3d b2 = n.cross(b1);
    const Eigen::Vector3d axis = std::cos(psi) * b1 + std::sin(psi) * b2;
    p.normals.normals[i] = Eigen::AngleAxisd(angle, axis) * n;
  }
  return p;
}

}  // namespace articugeo
