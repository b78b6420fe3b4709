#include "poseval/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <numbers>
#include <numeric>

namespace poseval {

Mat3 random_rotation(Rng& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  const double u3 = rng.uniform();
  const double two_pi = 2.0 * std::numbers::pi;
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  const Eigen::Quaterniond q(b * std::cos(two_pi * u3),  // w
                             a * std::sin(two_pi * u2),  // x
                             a * std::cos(two_pi * u2),  // y
                             b * std::sin(two_pi * u3)); // z
  return q.toRotationMatrix();
}

Pose kabsch(const Points& src, const Points& dst) {
  const Eigen::Index n = src.cols();
  if (dst.cols() != n || n < 3)
    throw std::invalid_argument("kabsch: needs equal point counts >= 3");

  const Vec3 cs = src.rowwise().mean();
  const Vec3 cd = dst.rowwise().mean();
  const Points x = src.colwise() - cs;
  const Points y = dst.colwise() - cd;

  // rank of the centered source via the spectrum of x*x^T
  Eigen::SelfAdjointEigenSolver<Mat3> es(x * x.transpose());
  const Vec3 ev = es.eigenvalues();  // ascending
  if (!(ev[2] > 0.0) || ev[1] <= 1e-18 * ev[2])
    throw DegenerateConfiguration("kabsch: centered source has rank < 2");

  const Mat3 h = x * y.transpose();
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0)
    d(2, 2) = -1.0;
  const Mat3 r = svd.matrixV() * d * svd.matrixU().transpose();
  return {r, cd - r * cs};
}

namespace {

Eigen::VectorXd residuals(const Pose& pose, const Points& src,
                          const Points& dst) {
  return (transform_points(pose, src) - dst).colwise().norm();
}

Points select_columns(const Points& pts, const std::vector<int>& idx) {
  Points out(3, static_cast<Eigen::Index>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i) out.col(i) = pts.col(idx[i]);
  return out;
}

}  // namespace

RobustAlignment robust_procrustes(const Points& src, const Points& dst,
                                  double trim_fraction, int max_iterations) {
  const int n = static_cast<int>(src.cols());
  if (dst.cols() != n || n < 3)
    throw std::invalid_argument("robust_procrustes: needs equal counts >= 3");
  if (!(trim_fraction >= 0.0 && trim_fraction < 0.5))
    throw std::invalid_argument("robust_procrustes: trim_fraction in [0,0.5)");

  const int keep = n - static_cast<int>(std::floor(trim_fraction * n));
  if (keep < 3)
    throw std::invalid_argument("robust_procrustes: fewer than 3 kept points");

  std::vector<int> kept(n);
  std::iota(kept.begin(), kept.end(), 0);

  Pose pose;
  Pose prev_pose;
  bool have_prev = false;
  for (int iter = 0; iter < max_iterations; ++iter) {
    pose = kabsch(select_columns(src, kept), select_columns(dst, kept));
    const Eigen::VectorXd res = residuals(pose, src, dst);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (res[a] != res[b]) return res[a] < res[b];
      return a < b;
    });
    std::vector<int> next(order.begin(), order.begin() + keep);
    std::sort(next.begin(), next.end());

    // Stable when the kept set stops changing, or when the fit itself has
    // stopped moving (ties among equal residuals can shuffle the set
    // forever on exact data).
    const bool pose_settled =
        have_prev && rotation_angle(prev_pose.rotation, pose.rotation) +
                             (prev_pose.translation - pose.translation).norm() <
                         1e-10;
    prev_pose = pose;
    have_prev = true;

    if (next == kept || pose_settled) {
      double ss = 0.0;
      for (int i : kept) ss += res[i] * res[i];
      const double rms = std::sqrt(ss / keep);
      const double tol = std::max(1e-9, 3.0 * rms);
      RobustAlignment out;
      out.pose = pose;
      out.inliers.assign(n, 0);
      for (int i = 0; i < n; ++i) out.inliers[i] = res[i] <= tol ? 1 : 0;
      out.trimmed_rms = rms;
      out.iterations = iter + 1;
      return out;
    }
    kept = std::move(next);
  }
  throw NonConvergence("robust_procrustes: trim set did not stabilize");
}

}  // namespace poseval
