#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>
#include <cstdint>
#include <vector>

#include "poseval/errors.hpp"
#include "poseval/rng.hpp"

namespace poseval {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

// Ordered 3D point set, one point per column, meters.
using Points = Eigen::Matrix3Xd;

// Rigid transform; rotation is a proper orthonormal 3x3 matrix.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Pose() = default;
  Pose(const Mat3& r, const Vec3& t) : rotation(r), translation(t) {}

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

inline Pose compose(const Pose& a, const Pose& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

inline Pose inverse(const Pose& a) {
  const Mat3 rt = a.rotation.transpose();
  return {rt, -(rt * a.translation)};
}

inline Points transform_points(const Pose& pose, const Points& pts) {
  return (pose.rotation * pts).colwise() + pose.translation;
}

inline bool is_rotation(const Mat3& r, double tol = 1e-9) {
  return ((r * r.transpose()) - Mat3::Identity()).cwiseAbs().maxCoeff() < tol &&
         std::abs(r.determinant() - 1.0) < tol;
}

// Rotation about a coordinate axis (0=x, 1=y, 2=z) by angle in radians.
inline Mat3 axis_rotation(int axis, double angle) {
  Vec3 u = Vec3::Zero();
  u[axis] = 1.0;
  return Eigen::AngleAxisd(angle, u).toRotationMatrix();
}

// Exact 180-degree rotation about a coordinate axis (entries are +-1).
inline Mat3 half_turn(int axis) {
  Vec3 d = -Vec3::Ones();
  d[axis] = 1.0;
  return d.asDiagonal();
}

// Geodesic distance on SO(3), in [0, pi].
inline double rotation_angle(const Mat3& a, const Mat3& b) {
  const double c = ((a.transpose() * b).trace() - 1.0) * 0.5;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

// Uniform rotation on SO(3) via Shoemake's subgroup method.
Mat3 random_rotation(Rng& rng);
inline Mat3 random_rotation(std::uint64_t seed) {
  Rng rng(seed);
  return random_rotation(rng);
}

// Least-squares rigid alignment: minimizes sum |R*src_i + t - dst_i|^2.
// Throws DegenerateConfiguration when the centered source has rank < 2.
Pose kabsch(const Points& src, const Points& dst);

struct RobustAlignment {
  Pose pose;
  std::vector<std::uint8_t> inliers;  // per correspondence, 1 = retained
  double trimmed_rms = 0.0;           // rms residual over the trimmed fit set
  int iterations = 0;
};

// Iteratively trimmed Kabsch: each round refits on the (1 - trim_fraction)
// share of correspondences with the smallest residuals until the kept set
// stabilizes. Final inlier flags mark residuals within max(1e-9, 3*rms) of
// the converged fit, so clean data keeps every point. Throws NonConvergence
// when the kept set is still changing after max_iterations rounds.
RobustAlignment robust_procrustes(const Points& src, const Points& dst,
                                  double trim_fraction,
                                  int max_iterations = 20);

struct PinholeCamera {
  double fx = 0, fy = 0;
  double cx = 0, cy = 0;
  int width = 0, height = 0;
};

// (u, v, z): pixel coordinates plus camera-frame depth in meters.
// Throws BehindCamera when the point depth is <= 0.
inline Vec3 project(const PinholeCamera& cam, const Vec3& pt) {
  if (!(pt.z() > 0.0)) throw BehindCamera("project: point has z <= 0");
  return {cam.fx * pt.x() / pt.z() + cam.cx, cam.fy * pt.y() / pt.z() + cam.cy,
          pt.z()};
}

inline Vec3 unproject(const PinholeCamera& cam, double u, double v, double z) {
  if (!(z > 0.0)) throw BehindCamera("unproject: z <= 0");
  return {(u - cam.cx) * z / cam.fx, (v - cam.cy) * z / cam.fy, z};
}

// Dense depth grid in meters; 0 encodes an invalid measurement.
struct DepthMap {
  int width = 0, height = 0;
  Eigen::MatrixXd values;  // height rows x width cols

  DepthMap() = default;
  DepthMap(int w, int h) : width(w), height(h), values(Eigen::MatrixXd::Zero(h, w)) {}

  bool contains(int u, int v) const {
    return u >= 0 && u < width && v >= 0 && v < height;
  }
  double at(int u, int v) const { return values(v, u); }
  double& at(int u, int v) { return values(v, u); }
};

}  // namespace poseval
