#include "poseval/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "poseval/parallel.hpp"

namespace poseval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int pose_content_compare(const Pose& a, const Pose& b) {
  for (int i = 0; i < 3; ++i) {
    if (a.translation[i] < b.translation[i]) return -1;
    if (a.translation[i] > b.translation[i]) return 1;
  }
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      if (a.rotation(r, c) < b.rotation(r, c)) return -1;
      if (a.rotation(r, c) > b.rotation(r, c)) return 1;
    }
  return 0;
}

// Total order on record content so that matching does not depend on input
// record order: score (descending), object id, then pose entries.
bool pred_content_less(const Prediction& a, const Prediction& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.object_id != b.object_id) return a.object_id < b.object_id;
  return pose_content_compare(a.pose, b.pose) < 0;
}

bool gt_content_less(const GroundTruthInstance& a,
                     const GroundTruthInstance& b) {
  if (a.object_id != b.object_id) return a.object_id < b.object_id;
  return pose_content_compare(a.pose, b.pose) < 0;
}

const SampledModel& model_for(const ModelMap& models, int object_id) {
  const auto it = models.find(object_id);
  if (it == models.end())
    throw MissingModel("no model for object id " +
                       std::to_string(object_id));
  return it->second;
}

// Pairwise errors between the predictions and ground truths of one image,
// reusable across thresholds. Rows follow the content-sorted prediction
// order, columns the content-sorted gt order.
struct ImagePairing {
  std::vector<int> gt_index;    // global indices, content order
  std::vector<int> pred_index;  // global indices, content order
  Eigen::MatrixXd error;        // preds x gts, +inf across classes
};

ImagePairing build_pairing(const std::vector<GroundTruthInstance>& gts,
                           const std::vector<Prediction>& preds,
                           std::vector<int> gt_idx, std::vector<int> pred_idx,
                           MetricKind metric, const ModelMap& models) {
  std::stable_sort(gt_idx.begin(), gt_idx.end(), [&](int a, int b) {
    return gt_content_less(gts[a], gts[b]);
  });
  std::stable_sort(pred_idx.begin(), pred_idx.end(), [&](int a, int b) {
    return pred_content_less(preds[a], preds[b]);
  });

  ImagePairing pairing;
  pairing.error.setConstant(static_cast<Eigen::Index>(pred_idx.size()),
                            static_cast<Eigen::Index>(gt_idx.size()), kInf);
  for (size_t r = 0; r < pred_idx.size(); ++r) {
    const Prediction& pred = preds[pred_idx[r]];
    const SampledModel& model = model_for(models, pred.object_id);
    for (size_t c = 0; c < gt_idx.size(); ++c) {
      const GroundTruthInstance& gt = gts[gt_idx[c]];
      if (gt.object_id != pred.object_id) continue;
      pairing.error(r, c) = evaluate_metric(metric, gt.pose, pred.pose, model);
    }
  }
  pairing.gt_index = std::move(gt_idx);
  pairing.pred_index = std::move(pred_idx);
  return pairing;
}

MatchSet greedy_match(const ImagePairing& pairing, double threshold_m) {
  MatchSet out;
  const int ng = static_cast<int>(pairing.gt_index.size());
  const int np = static_cast<int>(pairing.pred_index.size());
  std::vector<char> gt_taken(ng, 0);
  for (int r = 0; r < np; ++r) {
    int best = -1;
    for (int c = 0; c < ng; ++c) {
      if (gt_taken[c]) continue;
      if (pairing.error(r, c) == kInf) continue;
      if (best < 0 || pairing.error(r, c) < pairing.error(r, best)) best = c;
    }
    if (best >= 0 && pairing.error(r, best) <= threshold_m) {
      gt_taken[best] = 1;
      out.matched.push_back(
          {pairing.gt_index[best], pairing.pred_index[r], pairing.error(r, best)});
    } else {
      out.unmatched_pred.push_back(pairing.pred_index[r]);
    }
  }
  for (int c = 0; c < ng; ++c)
    if (!gt_taken[c]) out.unmatched_gt.push_back(pairing.gt_index[c]);
  return out;
}

struct ImageKey {
  int scene_id, image_id;
  bool operator<(const ImageKey& o) const {
    return std::tie(scene_id, image_id) < std::tie(o.scene_id, o.image_id);
  }
};

// Deterministically ordered per-image groups, pairings built in parallel.
std::vector<ImagePairing> build_all_pairings(
    const std::vector<GroundTruthInstance>& gts,
    const std::vector<Prediction>& preds, MetricKind metric,
    const ModelMap& models, int threads) {
  for (const auto& g : gts) model_for(models, g.object_id);
  for (const auto& p : preds) model_for(models, p.object_id);

  std::map<ImageKey, std::pair<std::vector<int>, std::vector<int>>> groups;
  for (int i = 0; i < static_cast<int>(gts.size()); ++i)
    groups[{gts[i].scene_id, gts[i].image_id}].first.push_back(i);
  for (int i = 0; i < static_cast<int>(preds.size()); ++i)
    groups[{preds[i].scene_id, preds[i].image_id}].second.push_back(i);

  std::vector<std::pair<std::vector<int>, std::vector<int>>> flat;
  flat.reserve(groups.size());
  for (auto& [key, value] : groups) flat.push_back(std::move(value));

  std::vector<ImagePairing> pairings(flat.size());
  parallel_for(static_cast<int>(flat.size()), threads, [&](int i) {
    pairings[i] = build_pairing(gts, preds, std::move(flat[i].first),
                                std::move(flat[i].second), metric, models);
  });
  return pairings;
}

std::optional<double> median(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct MeanAccumulator {
  double sum = 0.0;
  int count = 0;
  void add(const std::optional<double>& v) {
    if (v) {
      sum += *v;
      ++count;
    }
  }
  std::optional<double> mean() const {
    if (count == 0) return std::nullopt;
    return sum / count;
  }
};

}  // namespace

MatchSet match_instances(const std::vector<GroundTruthInstance>& gts,
                         const std::vector<Prediction>& preds,
                         MetricKind metric, const ModelMap& models,
                         double threshold_m) {
  std::optional<ImageKey> key;
  auto check = [&key](int scene_id, int image_id) {
    const ImageKey k{scene_id, image_id};
    if (!key) {
      key = k;
    } else if (k < *key || *key < k) {
      throw std::invalid_argument("match_instances: records span images");
    }
  };
  for (const auto& g : gts) check(g.scene_id, g.image_id);
  for (const auto& p : preds) check(p.scene_id, p.image_id);
  for (const auto& g : gts) model_for(models, g.object_id);
  for (const auto& p : preds) model_for(models, p.object_id);

  std::vector<int> gt_idx(gts.size()), pred_idx(preds.size());
  std::iota(gt_idx.begin(), gt_idx.end(), 0);
  std::iota(pred_idx.begin(), pred_idx.end(), 0);
  return greedy_match(build_pairing(gts, preds, std::move(gt_idx),
                                    std::move(pred_idx), metric, models),
                      threshold_m);
}

std::vector<double> default_curve_thresholds_cm() {
  std::vector<double> t;
  for (int i = 5; i <= 100; ++i) t.push_back(i / 10.0);
  return t;
}

DetectionCurve detection_curve(const std::vector<GroundTruthInstance>& gts,
                               const std::vector<Prediction>& preds,
                               MetricKind metric, const ModelMap& models,
                               const std::vector<double>& thresholds_cm,
                               int threads) {
  if (gts.empty()) throw std::invalid_argument("detection_curve: empty gt");
  const auto pairings = build_all_pairings(gts, preds, metric, models, threads);
  DetectionCurve curve;
  curve.thresholds_cm = thresholds_cm;
  curve.recall.reserve(thresholds_cm.size());
  for (double tau_cm : thresholds_cm) {
    int matched = 0;
    for (const auto& pairing : pairings)
      matched += static_cast<int>(greedy_match(pairing, tau_cm / 100.0).matched.size());
    curve.recall.push_back(static_cast<double>(matched) /
                           static_cast<double>(gts.size()));
  }
  return curve;
}

EvalReport build_report(const std::vector<GroundTruthInstance>& gts,
                        const std::vector<Prediction>& preds,
                        MetricKind metric, const ModelMap& models,
                        const std::vector<double>& curve_thresholds_cm,
                        int threads) {
  if (gts.empty()) throw std::invalid_argument("build_report: empty gt");
  const auto pairings = build_all_pairings(gts, preds, metric, models, threads);

  constexpr double kTau2 = 0.02, kTau10 = 0.10;

  struct PerObject {
    int gt = 0, preds = 0;
    int tp2 = 0, fp2 = 0, tp10 = 0, fp10 = 0;
    std::vector<double> tp10_errors;
    MeanAccumulator distance_cm;
    MeanAccumulator visibility;
  };
  std::map<int, PerObject> tally;

  for (const auto& g : gts) {
    PerObject& o = tally[g.object_id];
    ++o.gt;
    o.distance_cm.add(g.pose.translation.norm() * 100.0);
    if (g.visibility) o.visibility.add(*g.visibility * 100.0);
  }
  for (const auto& p : preds) ++tally[p.object_id].preds;

  std::vector<double> all_tp10_errors;
  for (const auto& pairing : pairings) {
    const MatchSet at2 = greedy_match(pairing, kTau2);
    const MatchSet at10 = greedy_match(pairing, kTau10);
    for (const auto& m : at2.matched) ++tally[gts[m.gt_index].object_id].tp2;
    for (int p : at2.unmatched_pred) ++tally[preds[p].object_id].fp2;
    for (const auto& m : at10.matched) {
      PerObject& o = tally[gts[m.gt_index].object_id];
      ++o.tp10;
      o.tp10_errors.push_back(m.error * 100.0);
      all_tp10_errors.push_back(m.error * 100.0);
    }
    for (int p : at10.unmatched_pred) ++tally[preds[p].object_id].fp10;
  }

  EvalReport report;
  report.metric = metric;
  report.total_gt = static_cast<int>(gts.size());
  report.total_predictions = static_cast<int>(preds.size());
  report.pooled_median_tp_error_cm = median(std::move(all_tp10_errors));

  std::map<std::string, std::vector<const ObjectReportRow*>> by_category;
  for (const auto& [object_id, o] : tally) {
    const SampledModel& model = model_for(models, object_id);
    ObjectReportRow row;
    row.object_id = object_id;
    row.category = to_string(model.symmetries.cls);
    row.diameter_cm = model.diameter * 100.0;
    row.mean_visibility_pct = o.visibility.mean();
    row.mean_distance_cm = o.distance_cm.mean();
    row.gt_count = o.gt;
    row.pred_count = o.preds;
    row.median_tp_error_cm = median(o.tp10_errors);
    if (o.preds > 0) {
      row.precision2 = 100.0 * o.tp2 / (o.tp2 + o.fp2);
      row.precision10 = 100.0 * o.tp10 / (o.tp10 + o.fp10);
    }
    if (o.gt > 0) {
      row.recall2 = 100.0 * o.tp2 / o.gt;
      row.recall10 = 100.0 * o.tp10 / o.gt;
    }
    report.objects.push_back(row);
  }

  auto aggregate = [](const std::string& label,
                      const std::vector<const ObjectReportRow*>& rows) {
    AggregateReportRow agg;
    agg.label = label;
    agg.object_count = static_cast<int>(rows.size());
    MeanAccumulator diameter, visibility, distance, med, p2, p10, r2, r10;
    for (const auto* row : rows) {
      diameter.add(row->diameter_cm);
      visibility.add(row->mean_visibility_pct);
      distance.add(row->mean_distance_cm);
      med.add(row->median_tp_error_cm);
      p2.add(row->precision2);
      p10.add(row->precision10);
      r2.add(row->recall2);
      r10.add(row->recall10);
    }
    agg.diameter_cm = diameter.mean();
    agg.mean_visibility_pct = visibility.mean();
    agg.mean_distance_cm = distance.mean();
    agg.median_tp_error_cm = med.mean();
    agg.precision2 = p2.mean();
    agg.precision10 = p10.mean();
    agg.recall2 = r2.mean();
    agg.recall10 = r10.mean();
    return agg;
  };

  std::vector<const ObjectReportRow*> all_rows;
  for (const auto& row : report.objects) {
    by_category[row.category].push_back(&row);
    all_rows.push_back(&row);
  }
  for (const auto& [label, rows] : by_category)
    report.categories.push_back(aggregate(label, rows));
  report.overall = aggregate("overall", all_rows);

  // detection-rate curves: overall, per category, per object
  report.overall_curve.thresholds_cm = curve_thresholds_cm;
  for (auto& [label, rows] : by_category) {
    auto& c = report.category_curves[label];
    c.thresholds_cm = curve_thresholds_cm;
    c.recall.assign(curve_thresholds_cm.size(), 0.0);
  }
  for (const auto& row : report.objects) {
    auto& c = report.object_curves[row.object_id];
    c.thresholds_cm = curve_thresholds_cm;
    c.recall.assign(curve_thresholds_cm.size(), 0.0);
  }
  report.overall_curve.recall.assign(curve_thresholds_cm.size(), 0.0);

  std::map<std::string, int> category_gt;
  for (const auto& row : report.objects)
    category_gt[row.category] += row.gt_count;

  for (size_t t = 0; t < curve_thresholds_cm.size(); ++t) {
    const double tau = curve_thresholds_cm[t] / 100.0;
    std::map<int, int> matched_per_object;
    int matched_total = 0;
    for (const auto& pairing : pairings) {
      for (const auto& m : greedy_match(pairing, tau).matched) {
        ++matched_per_object[gts[m.gt_index].object_id];
        ++matched_total;
      }
    }
    report.overall_curve.recall[t] =
        static_cast<double>(matched_total) / report.total_gt;
    std::map<std::string, int> matched_per_category;
    for (const auto& row : report.objects) {
      const int m = matched_per_object.count(row.object_id)
                        ? matched_per_object[row.object_id]
                        : 0;
      if (row.gt_count > 0)
        report.object_curves[row.object_id].recall[t] =
            static_cast<double>(m) / row.gt_count;
      matched_per_category[row.category] += m;
    }
    for (auto& [label, curve] : report.category_curves)
      if (category_gt[label] > 0)
        curve.recall[t] =
            static_cast<double>(matched_per_category[label]) / category_gt[label];
  }
  return report;
}

const char* to_string(RotationMode m) {
  switch (m) {
    case RotationMode::SymmetryPreserving: return "symmetry";
    case RotationMode::Arbitrary: return "arbitrary";
    case RotationMode::Identity: return "identity";
  }
  return "symmetry";
}

RotationMode rotation_mode_from_string(const std::string& name) {
  if (name == "symmetry" || name == "symmetry_preserving")
    return RotationMode::SymmetryPreserving;
  if (name == "arbitrary") return RotationMode::Arbitrary;
  if (name == "identity" || name == "none") return RotationMode::Identity;
  throw std::invalid_argument("unknown rotation mode: " + name);
}

SimulationTable simulate_metric_comparison(
    const std::vector<SampledModel>& models, RotationMode mode,
    std::uint64_t seed, double max_translation_cm, double step_cm, int trials,
    int threads) {
  if (models.empty())
    throw std::invalid_argument("simulate_metric_comparison: no models");
  if (!(step_cm > 0.0) || trials < 1)
    throw std::invalid_argument("simulate_metric_comparison: bad parameters");

  SimulationTable table;
  table.mode = mode;
  table.seed = seed;
  table.trials = trials;
  const int n_steps =
      static_cast<int>(std::floor(max_translation_cm / step_cm + 1e-9)) + 1;
  for (int s = 0; s < n_steps; ++s) table.steps_cm.push_back(s * step_cm);

  const std::vector<MetricKind> kinds = {MetricKind::Add, MetricKind::AddS,
                                         MetricKind::MeanSsd, MetricKind::AddH};

  const int n_models = static_cast<int>(models.size());
  const int n_runs = n_models * trials;
  // values[run][kind][step], filled independently per run
  std::vector<std::vector<std::vector<double>>> values(
      n_runs, std::vector<std::vector<double>>(
                  kinds.size(), std::vector<double>(n_steps, 0.0)));
  std::vector<char> non_identity(n_runs, 0);

  const Rng base(seed);
  parallel_for(n_runs, threads, [&](int run) {
    const int model_idx = run / trials;
    const int trial = run % trials;
    const SampledModel& model = models[model_idx];
    Rng rng = base.fork(model_idx, trial);

    Mat3 rot = Mat3::Identity();
    switch (mode) {
      case RotationMode::SymmetryPreserving:
        rot = model.symmetries.rotations[rng.uniform_index(
            static_cast<std::uint64_t>(model.symmetries.size()))];
        break;
      case RotationMode::Arbitrary:
        rot = random_rotation(rng);
        break;
      case RotationMode::Identity:
        break;
    }
    non_identity[run] = rotation_angle(rot, Mat3::Identity()) > 1e-12 ? 1 : 0;
    const Vec3 direction = rng.unit_vector();

    const Pose gt;  // identity; every metric is invariant to a common pose
    for (int s = 0; s < n_steps; ++s) {
      const Pose pred(rot, direction * (table.steps_cm[s] / 100.0));
      for (size_t k = 0; k < kinds.size(); ++k)
        values[run][k][s] = evaluate_metric(kinds[k], gt, pred, model);
    }
  });

  for (char flag : non_identity) table.non_identity_rotations += flag;

  for (size_t k = 0; k < kinds.size(); ++k) {
    for (int s = 0; s < n_steps; ++s) {
      double sum = 0.0;
      for (int run = 0; run < n_runs; ++run) sum += values[run][k][s];
      const double mean = sum / n_runs;
      double ss = 0.0;
      for (int run = 0; run < n_runs; ++run) {
        const double d = values[run][k][s] - mean;
        ss += d * d;
      }
      const double sd = n_runs > 1 ? std::sqrt(ss / (n_runs - 1)) : 0.0;
      table.rows.push_back(
          {kinds[k], table.steps_cm[s], mean * 100.0, sd * 100.0});
    }
  }
  return table;
}

std::vector<ObjectStats> dataset_stats(
    const std::vector<GroundTruthInstance>& gts, const ModelMap& models) {
  std::map<int, ObjectStats> per_object;
  std::map<int, MeanAccumulator> distance, visibility;
  for (const auto& g : gts) {
    ObjectStats& s = per_object[g.object_id];
    s.object_id = g.object_id;
    ++s.instance_count;
    distance[g.object_id].add(g.pose.translation.norm() * 100.0);
    if (g.visibility) visibility[g.object_id].add(*g.visibility * 100.0);
  }
  std::vector<ObjectStats> out;
  for (auto& [object_id, s] : per_object) {
    s.diameter_cm = model_for(models, object_id).diameter * 100.0;
    s.mean_distance_cm = distance[object_id].mean().value_or(0.0);
    s.mean_visibility_pct = visibility[object_id].mean();
    out.push_back(s);
  }
  return out;
}

}  // namespace poseval
