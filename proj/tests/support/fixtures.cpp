#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <vector>

namespace fixtures {

namespace {

void append_ring(std::vector<Vec3>& out, double a, double b, double z,
                 int per_ring) {
  for (int k = 0; k < per_ring; ++k) {
    const double t = 2.0 * std::numbers::pi * k / per_ring;
    out.emplace_back(a * std::cos(t), b * std::sin(t), z);
  }
}

Points to_points(const std::vector<Vec3>& v) {
  Points pts(3, static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) pts.col(i) = v[i];
  return pts;
}

}  // namespace

Points cylinder_points(double radius, double half_height, int per_ring) {
  std::vector<Vec3> v;
  v.reserve(2 * per_ring);
  append_ring(v, radius, radius, half_height, per_ring);
  append_ring(v, radius, radius, -half_height, per_ring);
  return to_points(v);
}

Points cuboid_points(double hx, double hy, double hz) {
  std::vector<Vec3> v;
  for (int sx : {-1, 0, 1})
    for (int sy : {-1, 0, 1})
      for (int sz : {-1, 0, 1}) {
        if (sx == 0 && sy == 0 && sz == 0) continue;
        v.emplace_back(sx * hx, sy * hy, sz * hz);
      }
  return to_points(v);  // 26 points: corners, edge midpoints, face centers
}

Points bottle_points(double a, double b, double half_height, int rings,
                     int per_ring) {
  std::vector<Vec3> v;
  for (int r = 0; r < rings; ++r) {
    const double z = half_height * (r + 1) / rings;
    const double shrink = 1.0 - 0.4 * r / rings;  // tapers toward the top
    append_ring(v, a * shrink, b * shrink, z, per_ring);
    append_ring(v, a * shrink, b * shrink, -z, per_ring);
  }
  return to_points(v);
}

Points random_points(Rng& rng, int count, const Vec3& half_extents) {
  Points pts(3, count);
  for (int i = 0; i < count; ++i)
    pts.col(i) = Vec3(rng.uniform(-half_extents.x(), half_extents.x()),
                      rng.uniform(-half_extents.y(), half_extents.y()),
                      rng.uniform(-half_extents.z(), half_extents.z()));
  return pts;
}

Pose random_pose(Rng& rng, double max_translation) {
  return {poseval::random_rotation(rng),
          rng.unit_vector() * rng.uniform(0.0, max_translation)};
}

double gamma_sample(Rng& rng, double shape, double scale) {
  if (shape < 1.0) {
    const double u = 1.0 - rng.uniform();  // (0, 1]
    return gamma_sample(rng, shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - rng.uniform();  // (0, 1]
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v * scale;
  }
}

double nakagami_sample(Rng& rng, double m, double omega) {
  return std::sqrt(gamma_sample(rng, m, omega / m));
}

void write_obj(const std::filesystem::path& path, const Points& points_m) {
  std::ofstream out(path);
  for (Eigen::Index i = 0; i < points_m.cols(); ++i) {
    const Vec3 mm = points_m.col(i) * 1000.0;
    out << "v " << mm.x() << " " << mm.y() << " " << mm.z() << "\n";
  }
}

DepthMap render_depth(const PinholeCamera& cam, const Pose& pose,
                      const Points& model_points) {
  DepthMap depth(cam.width, cam.height);
  const Points pts = poseval::transform_points(pose, model_points);
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    const Vec3 p = pts.col(i);
    if (!(p.z() > 0.0)) continue;
    const int u = static_cast<int>(std::lround(cam.fx * p.x() / p.z() + cam.cx));
    const int v = static_cast<int>(std::lround(cam.fy * p.y() / p.z() + cam.cy));
    if (!depth.contains(u, v)) continue;
    double& cell = depth.at(u, v);
    if (cell == 0.0 || p.z() < cell) cell = p.z();
  }
  return depth;
}

std::filesystem::path scratch_dir(const std::string& label) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("poseval_test_" + label + "_" +
                    std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
