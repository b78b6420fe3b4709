#include "poseval/fieldcal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace poseval {

DepthCalibration fit_depth_scale(const std::vector<double>& reference,
                                 const std::vector<double>& measured) {
  if (reference.empty() || measured.empty())
    throw EmptyInput("fit_depth_scale: empty input");
  if (reference.size() != measured.size())
    throw std::invalid_argument("fit_depth_scale: length mismatch");

  const size_t n = reference.size();
  double mr = 0.0, mm = 0.0, mae_before = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (!(reference[i] > 0.0) || !(measured[i] > 0.0))
      throw NonPositiveDepth("fit_depth_scale: depths must be > 0");
    mr += measured[i] * reference[i];
    mm += measured[i] * measured[i];
    mae_before += std::abs(measured[i] - reference[i]);
  }
  const double scale = mr / mm;
  double mae_after = 0.0;
  for (size_t i = 0; i < n; ++i)
    mae_after += std::abs(scale * measured[i] - reference[i]);

  DepthCalibration out;
  out.scale = scale;
  out.mae_before = mae_before / n;
  out.mae_after = mae_after / n;
  out.sample_count = static_cast<int>(n);
  return out;
}

namespace {

constexpr double kVisibilityEps = 0.005;  // 5 mm z-buffer band

struct ProjectedPoint {
  int u, v;
  double z;
};

// Objective for one candidate pose: mean |point depth - map depth| over the
// visible points with valid measurements; nullopt when nothing is valid.
std::optional<std::pair<double, int>> depth_objective(
    const Points& pts_cam, const PinholeCamera& cam, const DepthMap& depth,
    const std::optional<PixelMask>& mask) {
  std::vector<ProjectedPoint> hits;
  hits.reserve(pts_cam.cols());
  std::map<std::pair<int, int>, double> zbuf;
  for (Eigen::Index i = 0; i < pts_cam.cols(); ++i) {
    const Vec3 p = pts_cam.col(i);
    if (!(p.z() > 0.0)) continue;
    const int u = static_cast<int>(std::lround(cam.fx * p.x() / p.z() + cam.cx));
    const int v = static_cast<int>(std::lround(cam.fy * p.y() / p.z() + cam.cy));
    if (!depth.contains(u, v)) continue;
    hits.push_back({u, v, p.z()});
    auto [it, inserted] = zbuf.try_emplace({u, v}, p.z());
    if (!inserted && p.z() < it->second) it->second = p.z();
  }

  double total = 0.0;
  int count = 0;
  for (const auto& h : hits) {
    if (h.z > zbuf[{h.u, h.v}] + kVisibilityEps) continue;  // self-occluded
    const double measured = depth.at(h.u, h.v);
    if (!(measured > 0.0)) continue;
    if (mask && !mask->contains(h.u, h.v)) continue;
    total += std::abs(h.z - measured);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return std::make_pair(total / count, count);
}

}  // namespace

DepthRefinement refine_depth_ls(const Pose& pose, const SampledModel& model,
                                const PinholeCamera& cam, const DepthMap& depth,
                                double alpha_lo, double alpha_hi, int steps,
                                const std::optional<PixelMask>& mask) {
  if (!(pose.translation.z() > 0.0))
    throw std::invalid_argument("refine_depth_ls: pose z must be > 0");
  if (steps < 2) throw std::invalid_argument("refine_depth_ls: steps >= 2");
  if (!(alpha_hi > alpha_lo))
    throw std::invalid_argument("refine_depth_ls: empty alpha range");

  std::optional<DepthRefinement> best;
  for (int k = 0; k < steps; ++k) {
    const double alpha =
        alpha_lo + (alpha_hi - alpha_lo) * static_cast<double>(k) / (steps - 1);
    const Pose candidate(pose.rotation, alpha * pose.translation);
    const auto obj = depth_objective(transform_points(candidate, model.points),
                                     cam, depth, mask);
    if (!obj) continue;
    if (!best || obj->first < best->objective)
      best = DepthRefinement{candidate, alpha, obj->first, obj->second};
  }
  if (!best)
    throw NoValidPixels("refine_depth_ls: no projected point hit a valid pixel");
  return *best;
}

std::vector<ViewValidation> cross_view_validate(
    const std::vector<AnnotatedPose>& view_a,
    const std::vector<AnnotatedPose>& view_b, const ModelMap& models,
    double trim_fraction) {
  std::map<int, Pose> a_by_id, b_by_id;
  for (const auto& r : view_a)
    if (!a_by_id.emplace(r.object_id, r.pose).second)
      throw std::invalid_argument("cross_view_validate: duplicate object in A");
  for (const auto& r : view_b)
    if (!b_by_id.emplace(r.object_id, r.pose).second)
      throw std::invalid_argument("cross_view_validate: duplicate object in B");

  std::vector<int> common;
  for (const auto& [object_id, pose] : a_by_id)
    if (b_by_id.count(object_id)) common.push_back(object_id);
  if (common.size() < 4)
    throw TooFewObjects("cross_view_validate: needs >= 4 common objects");

  // Four frame points per pose: origin plus half-diameter axis endpoints.
  auto frame_points = [&](const Pose& pose, double half_diameter) {
    Points pts(3, 4);
    pts.col(0) = pose.translation;
    for (int a = 0; a < 3; ++a)
      pts.col(a + 1) =
          pose.translation + half_diameter * pose.rotation.col(a);
    return pts;
  };

  std::vector<ViewValidation> results;
  for (int held_out : common) {
    Points src(3, 4 * (common.size() - 1)), dst(3, 4 * (common.size() - 1));
    Eigen::Index col = 0;
    for (int other : common) {
      if (other == held_out) continue;
      const auto it = models.find(other);
      if (it == models.end())
        throw MissingModel("no model for object id " + std::to_string(other));
      const double half = 0.5 * it->second.diameter;
      src.middleCols(col, 4) = frame_points(a_by_id.at(other), half);
      dst.middleCols(col, 4) = frame_points(b_by_id.at(other), half);
      col += 4;
    }
    const RobustAlignment aligned = robust_procrustes(src, dst, trim_fraction);

    const auto it = models.find(held_out);
    if (it == models.end())
      throw MissingModel("no model for object id " + std::to_string(held_out));
    const Pose transferred = compose(aligned.pose, a_by_id.at(held_out));

    ViewValidation v;
    v.object_id = held_out;
    v.add_error = add(transferred, b_by_id.at(held_out), it->second);
    v.extrinsics = aligned.pose;
    v.inliers = aligned.inliers;
    results.push_back(std::move(v));
  }
  return results;  // common is sorted, so results are ordered by object id
}

NakagamiFit fit_nakagami(const std::vector<double>& samples) {
  if (samples.size() < 3)
    throw std::invalid_argument("fit_nakagami: needs >= 3 samples");
  const size_t n = samples.size();
  double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
  for (double x : samples) {
    if (!(x > 0.0))
      throw std::invalid_argument("fit_nakagami: samples must be > 0");
    const double x2 = x * x;
    sum += x;
    sum2 += x2;
    sum4 += x2 * x2;
  }
  const double omega = sum2 / n;
  const double var2 = sum4 / n - omega * omega;
  if (!(var2 > 0.0))
    throw DegenerateSamples("fit_nakagami: variance of squared samples is 0");

  NakagamiFit fit;
  fit.omega = omega;
  fit.m = omega * omega / var2;
  fit.sample_mean = sum / n;
  fit.mode =
      fit.m >= 0.5 ? std::sqrt(omega * (2.0 * fit.m - 1.0) / (2.0 * fit.m))
                   : 0.0;
  fit.sample_count = static_cast<int>(n);
  return fit;
}

}  // namespace poseval
