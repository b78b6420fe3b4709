#include "poseval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace poseval {

const char* to_string(MetricKind m) {
  switch (m) {
    case MetricKind::Add: return "add";
    case MetricKind::AddS: return "add-s";
    case MetricKind::MeanSsd: return "mean-ssd";
    case MetricKind::Mssd: return "mssd";
    case MetricKind::AddH: return "add-h";
  }
  return "add";
}

MetricKind metric_kind_from_string(const std::string& name) {
  if (name == "add") return MetricKind::Add;
  if (name == "add-s" || name == "adds") return MetricKind::AddS;
  if (name == "mean-ssd" || name == "meanssd") return MetricKind::MeanSsd;
  if (name == "mssd") return MetricKind::Mssd;
  if (name == "add-h" || name == "addh") return MetricKind::AddH;
  throw std::invalid_argument("unknown metric kind: " + name);
}

std::vector<int> farthest_point_sample(const Points& pts, int k) {
  const int n = static_cast<int>(pts.cols());
  if (k < 1) throw std::invalid_argument("farthest_point_sample: k >= 1");
  std::vector<int> out;
  if (k >= n) {
    out.resize(n);
    std::iota(out.begin(), out.end(), 0);
    return out;
  }

  int start = 0;
  for (int i = 1; i < n; ++i) {
    const Vec3 a = pts.col(i), b = pts.col(start);
    if (std::tie(a.x(), a.y(), a.z()) < std::tie(b.x(), b.y(), b.z()))
      start = i;
  }

  out.reserve(k);
  out.push_back(start);
  Eigen::VectorXd dist =
      (pts.colwise() - pts.col(start)).colwise().squaredNorm();
  for (int picked = 1; picked < k; ++picked) {
    int next = 0;
    for (int i = 1; i < n; ++i)
      if (dist[i] > dist[next]) next = i;
    out.push_back(next);
    dist = dist.cwiseMin(
        (pts.colwise() - pts.col(next)).colwise().squaredNorm().transpose());
  }
  return out;
}

double mesh_diameter(const Points& pts) {
  const int n = static_cast<int>(pts.cols());
  double best_sq = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double m = (pts.rightCols(n - i - 1).colwise() - pts.col(i))
                         .colwise()
                         .squaredNorm()
                         .maxCoeff();
    best_sq = std::max(best_sq, m);
  }
  return std::sqrt(best_sq);
}

SampledModel make_sampled_model(int object_id, const Points& vertices,
                                const SymmetrySet& symmetries,
                                int max_points) {
  if (vertices.cols() < 1)
    throw std::invalid_argument("make_sampled_model: empty vertex set");
  if (!vertices.allFinite())
    throw std::invalid_argument("make_sampled_model: non-finite vertex");

  SampledModel m;
  m.object_id = object_id;
  m.source_count = static_cast<int>(vertices.cols());
  m.diameter = mesh_diameter(vertices);
  m.symmetries = symmetries;

  const std::vector<int> idx = farthest_point_sample(vertices, max_points);
  m.points.resize(3, static_cast<Eigen::Index>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i) m.points.col(i) = vertices.col(idx[i]);
  return m;
}

double add(const Pose& gt, const Pose& pred, const SampledModel& model) {
  return (transform_points(gt, model.points) -
          transform_points(pred, model.points))
      .colwise()
      .norm()
      .mean();
}

double add_s(const Pose& gt, const Pose& pred, const SampledModel& model) {
  // Brute-force O(k^2) nearest neighbors; at k = 500 that is ~250k distance
  // evaluations. Swap in a spatial index here if models ever grow.
  const Points g = transform_points(gt, model.points);
  const Points p = transform_points(pred, model.points);
  const int n = static_cast<int>(g.cols());
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    total += std::sqrt((p.colwise() - g.col(i)).colwise().squaredNorm().minCoeff());
  return total / n;
}

namespace {

template <bool UseMax>
SymmetryMetric symmetry_metric(const Pose& gt, const Pose& pred,
                               const SampledModel& model) {
  if (model.symmetries.rotations.empty())
    throw std::invalid_argument("model has no symmetry set");
  const Points p = transform_points(pred, model.points);
  SymmetryMetric best{std::numeric_limits<double>::infinity(), 0};
  for (int s = 0; s < model.symmetries.size(); ++s) {
    // Compose the rotation first so an injected pred = gt*S reproduces the
    // candidate placement bit for bit.
    const Mat3 rs = gt.rotation * model.symmetries.rotations[s];
    const Points g = (rs * model.points).colwise() + gt.translation;
    const auto norms = (g - p).colwise().norm();
    const double e = UseMax ? norms.maxCoeff() : norms.mean();
    if (e < best.error) best = {e, s};
  }
  return best;
}

}  // namespace

SymmetryMetric mean_ssd_detail(const Pose& gt, const Pose& pred,
                               const SampledModel& model) {
  return symmetry_metric<false>(gt, pred, model);
}

SymmetryMetric mssd_detail(const Pose& gt, const Pose& pred,
                           const SampledModel& model) {
  return symmetry_metric<true>(gt, pred, model);
}

double mean_ssd(const Pose& gt, const Pose& pred, const SampledModel& model) {
  return mean_ssd_detail(gt, pred, model).error;
}

double mssd(const Pose& gt, const Pose& pred, const SampledModel& model) {
  return mssd_detail(gt, pred, model).error;
}

AddHResult add_h_detail(const Pose& gt, const Pose& pred,
                        const SampledModel& model) {
  const Points g = transform_points(gt, model.points);
  const Points p = transform_points(pred, model.points);
  const int n = static_cast<int>(g.cols());
  CostMatrix cost(n, n);
  for (int i = 0; i < n; ++i)
    cost.row(i) = (p.colwise() - g.col(i)).colwise().norm();
  Assignment a = solve_lap(cost);
  return {a.total_cost / n, std::move(a.permutation)};
}

double add_h(const Pose& gt, const Pose& pred, const SampledModel& model) {
  return add_h_detail(gt, pred, model).error;
}

double evaluate_metric(MetricKind kind, const Pose& gt, const Pose& pred,
                       const SampledModel& model) {
  switch (kind) {
    case MetricKind::Add: return add(gt, pred, model);
    case MetricKind::AddS: return add_s(gt, pred, model);
    case MetricKind::MeanSsd: return mean_ssd(gt, pred, model);
    case MetricKind::Mssd: return mssd(gt, pred, model);
    case MetricKind::AddH: return add_h(gt, pred, model);
  }
  throw std::invalid_argument("unknown metric kind");
}

CorrespondenceMap correspondence_map(MetricKind kind, const Pose& gt,
                                     const Pose& pred,
                                     const SampledModel& model) {
  CorrespondenceMap map;
  map.metric = kind;
  const int n = static_cast<int>(model.points.cols());
  switch (kind) {
    case MetricKind::Add:
      for (int i = 0; i < n; ++i) map.pairs.emplace_back(i, i);
      break;
    case MetricKind::AddS: {
      const Points g = transform_points(gt, model.points);
      const Points p = transform_points(pred, model.points);
      // Eq.-style direction: each gt vertex picks its nearest pred vertex.
      for (int i = 0; i < n; ++i) {
        int j = 0;
        (p.colwise() - g.col(i)).colwise().squaredNorm().minCoeff(&j);
        map.pairs.emplace_back(i, j);
      }
      break;
    }
    case MetricKind::MeanSsd:
    case MetricKind::Mssd: {
      const SymmetryMetric m = kind == MetricKind::MeanSsd
                                   ? mean_ssd_detail(gt, pred, model)
                                   : mssd_detail(gt, pred, model);
      map.chosen_symmetry = m.symmetry_index;
      for (int i = 0; i < n; ++i) map.pairs.emplace_back(i, i);
      break;
    }
    case MetricKind::AddH: {
      const AddHResult r = add_h_detail(gt, pred, model);
      for (int i = 0; i < n; ++i) map.pairs.emplace_back(i, r.assignment[i]);
      break;
    }
  }
  return map;
}

}  // namespace poseval
