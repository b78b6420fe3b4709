#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "poseval/assignment.hpp"
#include "poseval/geometry.hpp"
#include "poseval/symmetry.hpp"

namespace poseval {

enum class MetricKind { Add, AddS, MeanSsd, Mssd, AddH };

const char* to_string(MetricKind m);
MetricKind metric_kind_from_string(const std::string& name);

// Deterministic subsample of a vertex set plus the metadata the metrics
// need. The diameter is the maximum pairwise distance over the ORIGINAL
// vertex set, not the subsample.
struct SampledModel {
  int object_id = 0;
  Points points;        // object frame, meters, k <= max_points columns
  int source_count = 0; // vertex count of the original set
  double diameter = 0.0;
  SymmetrySet symmetries;
};

// Farthest-point sampling started at the lexicographically smallest vertex,
// ties broken by the lower index. Returns all indices in input order when
// k >= point count.
std::vector<int> farthest_point_sample(const Points& pts, int k);

double mesh_diameter(const Points& pts);

SampledModel make_sampled_model(int object_id, const Points& vertices,
                                const SymmetrySet& symmetries,
                                int max_points = 500);

// Mean vertex displacement under identity correspondence.
double add(const Pose& gt, const Pose& pred, const SampledModel& model);

// Mean distance from each ground-truth-placed vertex to its nearest
// predicted-placed vertex (asymmetric, outer mean over ground truth).
double add_s(const Pose& gt, const Pose& pred, const SampledModel& model);

struct SymmetryMetric {
  double error = 0.0;
  int symmetry_index = 0;  // index into model.symmetries minimizing the error
};

// min over S of the mean (respectively max) vertex displacement with the
// ground truth pose composed with S.
SymmetryMetric mean_ssd_detail(const Pose& gt, const Pose& pred,
                               const SampledModel& model);
SymmetryMetric mssd_detail(const Pose& gt, const Pose& pred,
                           const SampledModel& model);
double mean_ssd(const Pose& gt, const Pose& pred, const SampledModel& model);
double mssd(const Pose& gt, const Pose& pred, const SampledModel& model);

struct AddHResult {
  double error = 0.0;
  std::vector<int> assignment;  // gt vertex i paired with pred vertex [i]
};

// Mean distance between paired vertices under the cost-minimizing bijection
// (linear sum assignment on pairwise distances).
AddHResult add_h_detail(const Pose& gt, const Pose& pred,
                        const SampledModel& model);
double add_h(const Pose& gt, const Pose& pred, const SampledModel& model);

double evaluate_metric(MetricKind kind, const Pose& gt, const Pose& pred,
                       const SampledModel& model);

// The vertex pairing a metric used: identity for ADD/MeanSSD/MSSD (the
// latter two also report the minimizing symmetry), nearest-neighbor for
// ADD-S (non-injective), the optimal bijection for ADD-H.
struct CorrespondenceMap {
  MetricKind metric = MetricKind::Add;
  std::vector<std::pair<int, int>> pairs;  // (gt vertex, pred vertex)
  std::optional<int> chosen_symmetry;
};

CorrespondenceMap correspondence_map(MetricKind kind, const Pose& gt,
                                     const Pose& pred,
                                     const SampledModel& model);

}  // namespace poseval
