#pragma once

#include <optional>
#include <vector>

#include "poseval/evaluation.hpp"
#include "poseval/geometry.hpp"
#include "poseval/metrics.hpp"

namespace poseval {

struct DepthCalibration {
  double scale = 1.0;
  double mae_before = 0.0;  // mean |measured - reference|, meters
  double mae_after = 0.0;   // mean |scale*measured - reference|, meters
  int sample_count = 0;
};

// Least-squares scale between paired depth measurements:
// scale = sum(measured*reference) / sum(measured^2). The reported errors
// are mean absolute differences before (scale 1) and after.
DepthCalibration fit_depth_scale(const std::vector<double>& reference,
                                 const std::vector<double>& measured);

struct PixelMask {
  int width = 0, height = 0;
  std::vector<std::uint8_t> inside;  // row-major, v*width + u

  bool contains(int u, int v) const {
    return u >= 0 && u < width && v >= 0 && v < height &&
           inside[static_cast<size_t>(v) * width + u] != 0;
  }
};

struct DepthRefinement {
  Pose pose;
  double alpha = 1.0;
  double objective = 0.0;  // mean absolute depth residual at alpha, meters
  int evaluated_points = 0;
};

// Line search over candidate poses (R, alpha*t). The objective is the mean
// absolute difference between visible projected model-point depths and the
// depth map, skipping invalid (0) pixels and, when a mask is given, pixels
// outside it. A point is visible when its depth is within 5 mm of the
// smallest model-point depth landing in the same pixel. Throws
// NoValidPixels when no candidate touches a valid depth pixel.
DepthRefinement refine_depth_ls(const Pose& pose, const SampledModel& model,
                                const PinholeCamera& cam, const DepthMap& depth,
                                double alpha_lo = 0.7, double alpha_hi = 1.3,
                                int steps = 121,
                                const std::optional<PixelMask>& mask = {});

struct AnnotatedPose {
  int object_id = 0;
  Pose pose;  // camera frame
};

struct ViewValidation {
  int object_id = 0;
  double add_error = 0.0;  // meters
  Pose extrinsics;         // view A -> view B estimated without this object
  std::vector<std::uint8_t> inliers;  // per frame-point correspondence
};

// Leave-one-out cross-view consistency: for each object common to both
// views, the remaining objects contribute four frame points each (pose
// origin plus axis endpoints scaled by half the model diameter) to a robust
// Procrustes estimate of the A->B extrinsics; the held-out pose is
// transferred and scored with ADD against its direct view-B annotation.
// Needs at least 4 common objects (throws TooFewObjects).
std::vector<ViewValidation> cross_view_validate(
    const std::vector<AnnotatedPose>& view_a,
    const std::vector<AnnotatedPose>& view_b, const ModelMap& models,
    double trim_fraction = 0.2);

struct NakagamiFit {
  double m = 0.0;      // shape
  double omega = 0.0;  // spread, squared sample units
  double sample_mean = 0.0;
  double mode = 0.0;  // analytic density peak; 0 when m < 1/2
  int sample_count = 0;
};

// Method of moments on positive samples: omega = mean(x^2),
// m = omega^2 / var(x^2). Throws DegenerateSamples when var(x^2) = 0.
NakagamiFit fit_nakagami(const std::vector<double>& samples);

}  // namespace poseval
