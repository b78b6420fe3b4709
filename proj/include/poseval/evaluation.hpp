#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poseval/metrics.hpp"

namespace poseval {

struct GroundTruthInstance {
  int scene_id = 0;
  int image_id = 0;
  int object_id = 0;
  Pose pose;  // camera frame
  std::optional<double> visibility;  // fraction in [0, 1]
};

struct Prediction {
  int scene_id = 0;
  int image_id = 0;
  int object_id = 0;
  Pose pose;
  double score = 0.0;
};

using ModelMap = std::map<int, SampledModel>;

struct MatchRecord {
  int gt_index = 0;    // into the input gt array
  int pred_index = 0;  // into the input prediction array
  double error = 0.0;  // meters
};

// Each gt and each prediction appears in exactly one of the three lists.
struct MatchSet {
  std::vector<MatchRecord> matched;
  std::vector<int> unmatched_gt;
  std::vector<int> unmatched_pred;
};

// Greedy per-class matching within a single image: predictions in
// descending score order each claim the unmatched ground truth of their
// class with the smallest metric error; the claim stands only if the error
// is within `threshold`. Score ties are broken by object id and then by
// pose content, so the result is invariant to input record order.
// All records must share one (scene, image); throws MissingModel when an
// object id has no model.
MatchSet match_instances(const std::vector<GroundTruthInstance>& gts,
                         const std::vector<Prediction>& preds,
                         MetricKind metric, const ModelMap& models,
                         double threshold_m);

struct DetectionCurve {
  std::vector<double> thresholds_cm;
  std::vector<double> recall;  // fraction in [0, 1], one per threshold
};

std::vector<double> default_curve_thresholds_cm();  // 0.5 : 0.1 : 10.0

// Pooled detection-rate curve over the whole dataset (records may span many
// scenes/images; matching runs per image).
DetectionCurve detection_curve(const std::vector<GroundTruthInstance>& gts,
                               const std::vector<Prediction>& preds,
                               MetricKind metric, const ModelMap& models,
                               const std::vector<double>& thresholds_cm =
                                   default_curve_thresholds_cm(),
                               int threads = 1);

struct ObjectReportRow {
  int object_id = 0;
  std::string category;
  double diameter_cm = 0.0;
  std::optional<double> mean_visibility_pct;
  std::optional<double> mean_distance_cm;  // absent when the object has no gt
  int gt_count = 0;
  int pred_count = 0;
  std::optional<double> median_tp_error_cm;  // absent when no true positive
  std::optional<double> precision2, precision10;  // %, absent w/o predictions
  std::optional<double> recall2, recall10;        // %, absent w/o gt
};

// Equal-weight mean over member object rows; cells average the rows where
// the value is present.
struct AggregateReportRow {
  std::string label;
  int object_count = 0;
  std::optional<double> diameter_cm, mean_visibility_pct, mean_distance_cm;
  std::optional<double> median_tp_error_cm;
  std::optional<double> precision2, precision10, recall2, recall10;
};

struct EvalReport {
  MetricKind metric = MetricKind::MeanSsd;
  int total_gt = 0;
  int total_predictions = 0;
  // median over every true-positive error in the dataset (10 cm threshold)
  std::optional<double> pooled_median_tp_error_cm;
  std::vector<ObjectReportRow> objects;          // sorted by object id
  std::vector<AggregateReportRow> categories;    // sorted by label
  AggregateReportRow overall;
  DetectionCurve overall_curve;
  std::map<std::string, DetectionCurve> category_curves;
  std::map<int, DetectionCurve> object_curves;
};

// Median true-positive error uses matches at a 10 cm threshold; the
// precision/recall columns are evaluated at 2 cm and 10 cm.
EvalReport build_report(const std::vector<GroundTruthInstance>& gts,
                        const std::vector<Prediction>& preds,
                        MetricKind metric, const ModelMap& models,
                        const std::vector<double>& curve_thresholds_cm =
                            default_curve_thresholds_cm(),
                        int threads = 1);

enum class RotationMode { SymmetryPreserving, Arbitrary, Identity };

const char* to_string(RotationMode m);
RotationMode rotation_mode_from_string(const std::string& name);

struct SimulationRow {
  MetricKind metric;
  double step_cm = 0.0;
  double mean_cm = 0.0;
  double std_cm = 0.0;
};

struct SimulationTable {
  RotationMode mode = RotationMode::SymmetryPreserving;
  std::uint64_t seed = 0;
  int trials = 0;
  int non_identity_rotations = 0;  // rotation draws farther than 1e-12 from I
  std::vector<double> steps_cm;
  std::vector<SimulationRow> rows;  // metric-major, then step order
};

// Per trial and model: draw a rotation (uniform member of the symmetry set,
// uniform on SO(3), or identity) and a random translation direction, then
// sweep the translation magnitude over the step grid and evaluate ADD,
// ADD-S, MeanSSD and ADD-H. Mean/std are taken across models x trials.
SimulationTable simulate_metric_comparison(
    const std::vector<SampledModel>& models, RotationMode mode,
    std::uint64_t seed, double max_translation_cm = 10.0, double step_cm = 1.0,
    int trials = 5, int threads = 1);

struct ObjectStats {
  int object_id = 0;
  int instance_count = 0;
  double diameter_cm = 0.0;
  double mean_distance_cm = 0.0;
  std::optional<double> mean_visibility_pct;
};

// Plain per-object means of camera distance (norm of the translation) and
// visibility, when present.
std::vector<ObjectStats> dataset_stats(
    const std::vector<GroundTruthInstance>& gts, const ModelMap& models);

}  // namespace poseval
