#include "articugeo/calib_icp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

#include "articugeo/kd_tree.hpp"
#include "articugeo/parallel.hpp"

namespace articugeo {

PointCloud transform_cloud(const PointCloud& cloud, const SE3Transform& t) {
  PointCloud out;
  out.intensities = cloud.intensities;
  out.points.reserve(cloud.size());
  for (const auto& p : cloud.points) out.points.push_back(t * p);
  return out;
}

SE3Transform align_point_pairs(const std::vector<Point3>& src, const std::vector<Point3>& dst) {
  require(src.size() == dst.size(), ErrorCode::kDimensionMismatch, "align_point_pairs: size mismatch");
  require(!src.empty(), ErrorCode::kEmptyOverlap, "align_point_pairs: no correspondences");
  const double n = static_cast<double>(src.size());
  Eigen::Vector3d ms = Eigen::Vector3d::Zero();
  Eigen::Vector3d md = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    ms += src[i];
    md += dst[i];
  }
  ms /= n;
  md /= n;
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) h += (src[i] - ms) * (dst[i] - md).transpose();

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();
  require(sv[0] > 0.0 && sv[2] > 1e-9 * sv[0], ErrorCode::kDegenerateGeometry,
          "align_point_pairs: correspondence covariance has rank < 3");
  const Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((v * u.transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  const Eigen::Matrix3d r = v * d * u.transpose();
  return SE3Transform(r, md - r * ms).orthonormalized();
}

bool IcpConfig::is_valid() const {
  if (!(max_iterations > 0 && convergence_eps > 0.0 && max_correspondence_dist > 0.0 &&
        initial_guess.is_valid(1e-6))) {
    return false;
  }
  double prev = max_correspondence_dist;
  for (double g : refine_dists) {
    if (!(g > 0.0 && g < prev)) return false;
    prev = g;
  }
  return true;
}

namespace {

struct Matches {
  std::vector<Point3> src;
  std::vector<Point3> dst;
  double rms = 0.0;
};

// Nearest target point per transformed source point; the truncated energy
// charges gate^2 to unmatched points.
Matches match(const PointCloud& source, const KdTree& tree, const SE3Transform& t, double gate) {
  const double gate2 = gate * gate;
  const std::size_t n = source.size();
  std::vector<std::optional<KdTree::Neighbor>> nn(n);
  constexpr int kChunk = 256;
  const int chunks = static_cast<int>((n + kChunk - 1) / kChunk);
  parallel_rows(chunks, [&](int c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    for (std::size_t i = lo; i < hi; ++i) nn[i] = tree.nearest(t * source.points[i], gate2);
  });
  Matches m;
  double energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (nn[i]) {
      m.src.push_back(source.points[i]);
      m.dst.push_back(tree.points()[nn[i]->index]);
      energy += nn[i]->squared_distance;
    } else {
      energy += gate2;
    }
  }
  m.rms = std::sqrt(energy / static_cast<double>(n));
  return m;
}

}  // namespace

IcpResult icp_register(const PointCloud& source, const PointCloud& target, const IcpConfig& cfg) {
  require(cfg.is_valid(), ErrorCode::kInvalidArgument, "icp_register: invalid configuration");
  require(!source.empty() && !target.empty(), ErrorCode::kEmptyOverlap, "icp_register: empty point cloud");
  const KdTree tree(target.points);

  std::vector<double> gates{cfg.max_correspondence_dist};
  gates.insert(gates.end(), cfg.refine_dists.begin(), cfg.refine_dists.end());

  IcpResult res;
  res.transform = cfg.initial_guess;
  for (std::size_t stage = 0; stage < gates.size(); ++stage) {
    const double gate = gates[stage];
    Matches m = match(source, tree, res.transform, gate);
    if (m.src.empty()) {
      require(stage > 0, ErrorCode::kEmptyOverlap,
              "icp_register: no correspondences within max_correspondence_dist");
      break;
    }
    res.rms_residual = m.rms;
    res.inliers = m.src.size();
    res.residual_history.push_back(m.rms);
    res.converged = false;

    for (int it = 0; it < cfg.max_iterations; ++it) {
      const SE3Transform next = align_point_pairs(m.src, m.dst);
      Matches nm = match(source, tree, next, gate);
      ++res.iterations;
      // The alignment cannot raise the truncated energy; a rise is rounding
      // noise at a fixed point, so the previous pose is kept.
      if (nm.rms > res.rms_residual || nm.src.empty()) {
        res.residual_history.push_back(res.rms_residual);
        res.converged = true;
        break;
      }
      const double change = res.rms_residual - nm.rms;
      res.transform = next;
      res.rms_residual = nm.rms;
      res.inliers = nm.src.size();
      res.residual_history.push_back(nm.rms);
      m = std::move(nm);
      if (change < cfg.convergence_eps) {
        res.converged = true;
        break;
      }
    }
  }
  return res;
}

DepthMap project_cloud_to_image(const PointCloud& cloud, const SE3Transform& cloud_to_camera,
                                const CameraModel& cam) {
  require(cloud_to_camera.is_valid(1e-6), ErrorCode::kInvalidArgument,
          "project_cloud_to_image: invalid transform");
  DepthMap out(cam.width, cam.height, 0.0);
  for (const auto& p : cloud.points) {
    const Point3 q = cloud_to_camera * p;
    if (!(q.z() > 0.0)) continue;
    const double u = cam.fx * q.x() / q.z() + cam.cx;
    const double v = cam.fy * q.y() / q.z() + cam.cy;
    const double ur = std::round(u);
    const double vr = std::round(v);
    if (ur < 0 || vr < 0 || ur > cam.width - 1 || vr > cam.height - 1) continue;
    double& cell = out(static_cast<int>(ur), static_cast<int>(vr));
    if (cell == 0.0 || q.z() < cell) cell = q.z();
  }
  return out;
}

std::string format_ply(const PointCloud& cloud) {
  std::string out = "ply\nformat ascii 1.0\nelement vertex " + std::to_string(cloud.size()) +
                    "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
  char buf[96];
  for (const auto& p : cloud.points) {
    std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", p.x(), p.y(), p.z());
    out += buf;
  }
  return out;
}

PointCloud parse_ply(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> Error {
    return Error(ErrorCode::kParse, origin + ":" + std::to_string(lineno) + ": " + msg);
  };
  auto next = [&]() {
    if (!std::getline(in, line)) throw fail("unexpected end of file");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  next();
  if (line != "ply") throw fail("missing 'ply' magic");
  next();
  if (line != "format ascii 1.0") throw fail("only 'format ascii 1.0' is supported");
  long long count = -1;
  std::vector<std::string> props;
  for (;;) {
    next();
    if (line == "end_header") break;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "comment" || kw == "obj_info") continue;
    if (kw == "element") {
      std::string name;
      if (!(ls >> name >> count) || name != "vertex" || count < 0) throw fail("expected 'element vertex N'");
    } else if (kw == "property") {
      std::string type, name;
      if (!(ls >> type >> name)) throw fail("malformed property line");
      if (type != "float" && type != "double") throw fail("unsupported property type " + type);
      props.push_back(name);
    } else {
      throw fail("unexpected header line '" + line + "'");
    }
  }
  if (count < 0) throw fail("missing vertex element");
  if (props.size() < 3 || props[0] != "x" || props[1] != "y" || props[2] != "z") {
    throw fail("vertex properties must start with x y z");
  }
  int ix = -1;
  for (std::size_t i = 3; i < props.size(); ++i) {
    if (props[i] == "intensity") ix = static_cast<int>(i);
  }
  PointCloud cloud;
  cloud.points.reserve(static_cast<std::size_t>(count));
  std::vector<double> vals(props.size());
  for (long long i = 0; i < count; ++i) {
    next();
    std::istringstream ls(line);
    for (double& v : vals) {
      if (!(ls >> v)) throw fail("expected " + std::to_string(props.size()) + " values");
    }
    if (!std::isfinite(vals[0]) || !std::isfinite(vals[1]) || !std::isfinite(vals[2])) {
      throw fail("non-finite coordinate");
    }
    cloud.points.emplace_back(vals[0], vals[1], vals[2]);
    if (ix >= 0) cloud.intensities.push_back(vals[ix]);
  }
  return cloud;
}

PointCloud read_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open point cloud " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ply(ss.str(), path);
}

void write_ply(const std::string& path, const PointCloud& cloud) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot write point cloud " + path);
  out << format_ply(cloud);
}

}  // namespace articugeo
