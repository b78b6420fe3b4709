#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <string>

#include "poseval/evaluation.hpp"
#include "poseval/fieldcal.hpp"
#include "poseval/io.hpp"
#include "poseval/parallel.hpp"
#include "poseval/version.hpp"

namespace {

using namespace poseval;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;     // malformed files, bad arguments
constexpr int kExitSemantic = 3;  // well-formed input the operation rejects

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string fmt(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v, int prec = 6) {
  return v ? fmt(*v, prec) : std::string();
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Every output file starts with this header; `config` holds the semantic
// inputs only (not thread counts or output paths), so reruns and different
// parallelism settings produce identical bytes.
std::string csv_header(const std::string& config, std::uint64_t seed) {
  std::ostringstream ss;
  ss << "# poseval " << kVersion << "\n";
  ss << "# seed: " << seed << "\n";
  ss << "# config: " << config << "\n";
  ss << "# config-hash: " << hex64(fnv1a64(config)) << "\n";
  return ss.str();
}

ordered_json json_meta(const std::string& config, std::uint64_t seed) {
  ordered_json meta;
  meta["tool"] = "poseval";
  meta["version"] = kVersion;
  meta["seed"] = seed;
  meta["config"] = config;
  meta["config_hash"] = hex64(fnv1a64(config));
  return meta;
}

ordered_json to_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    io::write_text_atomic(out_path, content);
  }
}

ordered_json curve_to_json(const DetectionCurve& curve) {
  ordered_json j = ordered_json::array();
  for (size_t i = 0; i < curve.thresholds_cm.size(); ++i)
    j.push_back({{"threshold_cm", curve.thresholds_cm[i]},
                 {"recall", curve.recall[i]}});
  return j;
}

struct EvalArgs {
  std::string gt, pred, models, out = "report";
  std::string metric = "mean-ssd";
  std::string image_tag;
  int k = 500;
  double increment = 1.0;
  int threads = default_thread_count();
};

void filter_by_tag(const io::GtDataset& data,
                   std::vector<GroundTruthInstance>& gts,
                   std::vector<Prediction>& preds, const std::string& tag) {
  if (tag.empty()) return;
  auto keep = [&](int scene_id, int image_id) {
    const auto it = data.image_tags.find({scene_id, image_id});
    return it != data.image_tags.end() && it->second == tag;
  };
  std::erase_if(gts, [&](const GroundTruthInstance& g) {
    return !keep(g.scene_id, g.image_id);
  });
  std::erase_if(preds, [&](const Prediction& p) {
    return !keep(p.scene_id, p.image_id);
  });
}

int cmd_eval(const EvalArgs& args) {
  const MetricKind metric = metric_kind_from_string(args.metric);
  const io::GtDataset data = io::load_gt(args.gt);
  std::vector<GroundTruthInstance> gts = data.instances;
  std::vector<Prediction> preds = io::load_predictions_csv(args.pred);
  filter_by_tag(data, gts, preds, args.image_tag);
  const ModelMap models = io::load_models(args.models, args.k, args.increment);

  const EvalReport report = build_report(
      gts, preds, metric, models, default_curve_thresholds_cm(), args.threads);

  std::ostringstream config;
  config << "eval gt=" << args.gt << " pred=" << args.pred
         << " models=" << args.models << " metric=" << args.metric
         << " k=" << args.k << " increment=" << args.increment
         << " tag=" << args.image_tag;

  // CSV rows mirror the per-object statistics table
  std::ostringstream csv;
  csv << csv_header(config.str(), 0);
  csv << "object_id,category,diameter_cm,visibility_pct,distance_cm,gt_count,"
         "pred_count,median_error_cm,precision_2cm,precision_10cm,recall_2cm,"
         "recall_10cm\n";
  auto agg_row = [&](const AggregateReportRow& row) {
    csv << "," << row.label << "," << fmt_opt(row.diameter_cm, 1) << ","
        << fmt_opt(row.mean_visibility_pct, 1) << ","
        << fmt_opt(row.mean_distance_cm, 1) << ",,,"
        << fmt_opt(row.median_tp_error_cm, 2) << ","
        << fmt_opt(row.precision2, 1) << "," << fmt_opt(row.precision10, 1)
        << "," << fmt_opt(row.recall2, 1) << "," << fmt_opt(row.recall10, 1)
        << "\n";
  };
  for (const auto& row : report.objects) {
    csv << row.object_id << "," << row.category << ","
        << fmt(row.diameter_cm, 1) << "," << fmt_opt(row.mean_visibility_pct, 1)
        << "," << fmt_opt(row.mean_distance_cm, 1) << "," << row.gt_count << ","
        << row.pred_count << "," << fmt_opt(row.median_tp_error_cm, 2) << ","
        << fmt_opt(row.precision2, 1) << "," << fmt_opt(row.precision10, 1)
        << "," << fmt_opt(row.recall2, 1) << "," << fmt_opt(row.recall10, 1)
        << "\n";
  }
  for (const auto& row : report.categories) agg_row(row);
  agg_row(report.overall);
  io::write_text_atomic(args.out + ".csv", csv.str());

  ordered_json j;
  j["meta"] = json_meta(config.str(), 0);
  j["metric"] = to_string(report.metric);
  j["total_gt"] = report.total_gt;
  j["total_predictions"] = report.total_predictions;
  j["pooled_median_tp_error_cm"] = to_json(report.pooled_median_tp_error_cm);
  j["objects"] = ordered_json::array();
  for (const auto& row : report.objects) {
    j["objects"].push_back({{"object_id", row.object_id},
                            {"category", row.category},
                            {"diameter_cm", row.diameter_cm},
                            {"visibility_pct", to_json(row.mean_visibility_pct)},
                            {"distance_cm", to_json(row.mean_distance_cm)},
                            {"gt_count", row.gt_count},
                            {"pred_count", row.pred_count},
                            {"median_error_cm", to_json(row.median_tp_error_cm)},
                            {"precision_2cm", to_json(row.precision2)},
                            {"precision_10cm", to_json(row.precision10)},
                            {"recall_2cm", to_json(row.recall2)},
                            {"recall_10cm", to_json(row.recall10)}});
  }
  auto agg_json = [&](const AggregateReportRow& row) {
    return ordered_json{{"label", row.label},
                        {"object_count", row.object_count},
                        {"diameter_cm", to_json(row.diameter_cm)},
                        {"visibility_pct", to_json(row.mean_visibility_pct)},
                        {"distance_cm", to_json(row.mean_distance_cm)},
                        {"median_error_cm", to_json(row.median_tp_error_cm)},
                        {"precision_2cm", to_json(row.precision2)},
                        {"precision_10cm", to_json(row.precision10)},
                        {"recall_2cm", to_json(row.recall2)},
                        {"recall_10cm", to_json(row.recall10)}};
  };
  j["categories"] = ordered_json::array();
  for (const auto& row : report.categories)
    j["categories"].push_back(agg_json(row));
  j["overall"] = agg_json(report.overall);
  j["curves"] = ordered_json::object();
  j["curves"]["overall"] = curve_to_json(report.overall_curve);
  j["curves"]["categories"] = ordered_json::object();
  for (const auto& [label, c] : report.category_curves)
    j["curves"]["categories"][label] = curve_to_json(c);
  j["curves"]["objects"] = ordered_json::object();
  for (const auto& [object_id, c] : report.object_curves)
    j["curves"]["objects"][std::to_string(object_id)] = curve_to_json(c);
  io::write_text_atomic(args.out + ".json", j.dump(2) + "\n");

  std::cout << "wrote " << args.out << ".json and " << args.out << ".csv\n";
  return kExitOk;
}

struct CurveArgs {
  std::string gt, pred, models, out;
  std::string metric = "mean-ssd";
  std::string image_tag;
  int k = 500;
  double increment = 1.0;
  double min_cm = 0.5, max_cm = 10.0, step_cm = 0.1;
  int threads = default_thread_count();
};

int cmd_curve(const CurveArgs& args) {
  const MetricKind metric = metric_kind_from_string(args.metric);
  const io::GtDataset data = io::load_gt(args.gt);
  std::vector<GroundTruthInstance> gts = data.instances;
  std::vector<Prediction> preds = io::load_predictions_csv(args.pred);
  filter_by_tag(data, gts, preds, args.image_tag);
  const ModelMap models = io::load_models(args.models, args.k, args.increment);

  if (!(args.step_cm > 0.0) || args.max_cm < args.min_cm)
    throw std::invalid_argument("curve: bad threshold range");
  std::vector<double> thresholds;
  for (int i = 0;; ++i) {
    const double t = args.min_cm + i * args.step_cm;
    if (t > args.max_cm + 1e-9) break;
    thresholds.push_back(t);
  }

  const DetectionCurve curve =
      detection_curve(gts, preds, metric, models, thresholds, args.threads);

  std::ostringstream config;
  config << "curve gt=" << args.gt << " pred=" << args.pred
         << " models=" << args.models << " metric=" << args.metric
         << " k=" << args.k << " increment=" << args.increment
         << " tag=" << args.image_tag << " range=" << args.min_cm << ":"
         << args.step_cm << ":" << args.max_cm;

  std::ostringstream csv;
  csv << csv_header(config.str(), 0);
  csv << "threshold_cm,recall\n";
  for (size_t i = 0; i < curve.thresholds_cm.size(); ++i)
    csv << fmt(curve.thresholds_cm[i], 1) << "," << fmt(curve.recall[i], 6)
        << "\n";
  emit(csv.str(), args.out);
  return kExitOk;
}

struct SimulateArgs {
  std::string models, out;
  std::string modes = "symmetry,arbitrary";
  std::uint64_t seed = 0;
  int trials = 5;
  double max_cm = 10.0, step_cm = 1.0;
  int k = 500;
  double increment = 1.0;
  int threads = default_thread_count();
};

int cmd_simulate(const SimulateArgs& args) {
  const ModelMap model_map =
      io::load_models(args.models, args.k, args.increment);
  std::vector<SampledModel> models;
  for (const auto& [object_id, model] : model_map) models.push_back(model);

  std::vector<RotationMode> modes;
  std::istringstream ss(args.modes);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) modes.push_back(rotation_mode_from_string(tok));
  if (modes.empty()) throw std::invalid_argument("simulate: no modes given");

  std::ostringstream config;
  config << "simulate models=" << args.models << " modes=" << args.modes
         << " trials=" << args.trials << " max=" << args.max_cm
         << " step=" << args.step_cm << " k=" << args.k
         << " increment=" << args.increment;

  std::ostringstream csv;
  csv << csv_header(config.str(), args.seed);
  csv << "mode,metric,step_cm,mean_cm,std_cm\n";
  for (const RotationMode mode : modes) {
    const SimulationTable table =
        simulate_metric_comparison(models, mode, args.seed, args.max_cm,
                                   args.step_cm, args.trials, args.threads);
    for (const auto& row : table.rows)
      csv << to_string(mode) << "," << to_string(row.metric) << ","
          << fmt(row.step_cm, 1) << "," << fmt(row.mean_cm, 6) << ","
          << fmt(row.std_cm, 6) << "\n";
  }
  emit(csv.str(), args.out);
  return kExitOk;
}

struct CalibrateArgs {
  std::string pairs, out;
};

int cmd_calibrate_depth(const CalibrateArgs& args) {
  std::ifstream in(args.pairs);
  if (!in) throw IoError("cannot open " + args.pairs);
  std::vector<double> reference, measured;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.find("reference") != std::string::npos) continue;  // header
    const auto comma = line.find(',');
    const std::string ctx = args.pairs + ":" + std::to_string(line_no);
    if (comma == std::string::npos)
      throw ParseError(ctx + ": expected reference_m,measured_m");
    try {
      reference.push_back(std::stod(line.substr(0, comma)));
      measured.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ParseError(ctx + ": bad number");
    }
  }

  const DepthCalibration cal = fit_depth_scale(reference, measured);
  std::ostringstream config;
  config << "calibrate-depth pairs=" << args.pairs;

  std::ostringstream text;
  text << csv_header(config.str(), 0);
  text << "scale," << fmt(cal.scale, 6) << "\n";
  text << "mae_before_mm," << fmt(cal.mae_before * 1000.0, 3) << "\n";
  text << "mae_after_mm," << fmt(cal.mae_after * 1000.0, 3) << "\n";
  text << "samples," << cal.sample_count << "\n";
  emit(text.str(), args.out);
  return kExitOk;
}

struct RefineArgs {
  std::string models, pose, camera, depth, mask, out;
  int object_id = 0;
  double alpha_min = 0.7, alpha_max = 1.3;
  int steps = 121;
  int k = 500;
  double increment = 1.0;
};

int cmd_refine_ls(const RefineArgs& args) {
  const ModelMap models = io::load_models(args.models, args.k, args.increment);
  const auto it = models.find(args.object_id);
  if (it == models.end())
    throw MissingModel("no model for object id " +
                       std::to_string(args.object_id));
  const Pose pose = io::load_pose_json(args.pose);
  const PinholeCamera cam = io::load_camera_json(args.camera);
  const DepthMap depth =
      io::load_depth_raw16(args.depth, cam.width, cam.height);
  std::optional<PixelMask> mask;
  if (!args.mask.empty())
    mask = io::load_mask_raw8(args.mask, cam.width, cam.height);

  const DepthRefinement result =
      refine_depth_ls(pose, it->second, cam, depth, args.alpha_min,
                      args.alpha_max, args.steps, mask);

  std::ostringstream config;
  config << "refine-ls models=" << args.models << " object=" << args.object_id
         << " pose=" << args.pose << " camera=" << args.camera
         << " depth=" << args.depth << " mask=" << args.mask
         << " alpha=" << args.alpha_min << ":" << args.alpha_max
         << " steps=" << args.steps;

  ordered_json j;
  j["meta"] = json_meta(config.str(), 0);
  j["alpha"] = result.alpha;
  j["objective_mm"] = result.objective * 1000.0;
  j["evaluated_points"] = result.evaluated_points;
  ordered_json r = ordered_json::array();
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 3; ++col)
      r.push_back(result.pose.rotation(row, col));
  ordered_json t = ordered_json::array();
  for (int i = 0; i < 3; ++i) t.push_back(result.pose.translation[i] * 1000.0);
  j["cam_R_m2c"] = r;
  j["cam_t_m2c"] = t;
  emit(j.dump(2) + "\n", args.out);
  return kExitOk;
}

struct ValidateArgs {
  std::string a, b, models, out;
  double trim = 0.2;
  int k = 500;
  double increment = 1.0;
};

int cmd_validate_views(const ValidateArgs& args) {
  const ModelMap models = io::load_models(args.models, args.k, args.increment);
  const auto view_a = io::load_view_json(args.a);
  const auto view_b = io::load_view_json(args.b);

  const auto results = cross_view_validate(view_a, view_b, models, args.trim);

  std::ostringstream config;
  config << "validate-views a=" << args.a << " b=" << args.b
         << " models=" << args.models << " trim=" << args.trim
         << " k=" << args.k << " increment=" << args.increment;

  std::vector<double> errors_cm;
  for (const auto& r : results) errors_cm.push_back(r.add_error * 100.0);

  std::ostringstream csv;
  csv << csv_header(config.str(), 0);
  bool fit_ok = errors_cm.size() >= 3;
  for (double e : errors_cm)
    if (!(e > 0.0)) fit_ok = false;
  if (fit_ok) {
    try {
      const NakagamiFit fit = fit_nakagami(errors_cm);
      csv << "# nakagami-m: " << fmt(fit.m, 6) << "\n";
      csv << "# nakagami-omega: " << fmt(fit.omega, 6) << "\n";
      csv << "# nakagami-sample-mean-cm: " << fmt(fit.sample_mean, 6) << "\n";
      csv << "# nakagami-mode-cm: " << fmt(fit.mode, 6) << "\n";
    } catch (const DegenerateSamples&) {
      fit_ok = false;
    }
  }
  if (!fit_ok) csv << "# nakagami: unavailable\n";
  csv << "object_id,add_cm\n";
  for (const auto& r : results)
    csv << r.object_id << "," << fmt(r.add_error * 100.0, 6) << "\n";
  emit(csv.str(), args.out);
  return kExitOk;
}

struct LapArgs {
  std::string matrix;
  int bench = 0;
  std::uint64_t seed = 0;
};

int cmd_lap(const LapArgs& args) {
  if (args.bench > 0) {
    Rng rng(args.seed);
    CostMatrix cost(args.bench, args.bench);
    for (int i = 0; i < args.bench; ++i)
      for (int j = 0; j < args.bench; ++j) cost(i, j) = rng.uniform(0.0, 10.0);
    const auto start = std::chrono::steady_clock::now();
    const Assignment a = solve_lap(cost);
    const auto stop = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    std::cout << "n: " << args.bench << "\ncost: " << fmt(a.total_cost, 6)
              << "\ntime_ms: " << fmt(ms, 3) << "\n";
    return kExitOk;
  }
  if (args.matrix.empty())
    throw std::invalid_argument("lap: need --matrix or --bench");
  const CostMatrix cost = io::load_matrix_csv(args.matrix);
  const Assignment a = solve_lap(cost);
  std::cout << "permutation:";
  for (int j : a.permutation) std::cout << " " << j;
  std::cout << "\ncost: " << fmt(a.total_cost, 6) << "\n";
  return kExitOk;
}

struct SymmetriesArgs {
  std::string cls, out;
  double increment = 1.0;
};

int cmd_symmetries(const SymmetriesArgs& args) {
  const SymmetrySet set = generate_symmetries(
      symmetry_class_from_string(args.cls), args.increment);
  std::ostringstream config;
  config << "symmetries class=" << args.cls << " increment=" << args.increment;

  ordered_json j;
  j["meta"] = json_meta(config.str(), 0);
  j["class"] = to_string(set.cls);
  j["increment_deg"] = set.increment_deg;
  j["count"] = set.size();
  j["rotations"] = ordered_json::array();
  for (const Mat3& r : set.rotations) {
    ordered_json flat = ordered_json::array();
    for (int row = 0; row < 3; ++row)
      for (int col = 0; col < 3; ++col) flat.push_back(r(row, col));
    j["rotations"].push_back(flat);
  }
  emit(j.dump(2) + "\n", args.out);
  return kExitOk;
}

struct SampleMeshArgs {
  std::string mesh, out;
  int k = 500;
};

int cmd_sample_mesh(const SampleMeshArgs& args) {
  const Points vertices = io::load_mesh_vertices(args.mesh);
  const std::vector<int> idx = farthest_point_sample(vertices, args.k);
  std::ostringstream config;
  config << "sample-mesh mesh=" << args.mesh << " k=" << args.k;

  std::ostringstream csv;
  csv << csv_header(config.str(), 0);
  csv << "index\n";
  for (int i : idx) csv << i << "\n";
  emit(csv.str(), args.out);
  return kExitOk;
}

struct MetricArgs {
  std::string kind = "add";
  std::string gt, pred, models;
  int object_id = 0;
  int k = 500;
  double increment = 1.0;
};

int cmd_metric(const MetricArgs& args) {
  const ModelMap models = io::load_models(args.models, args.k, args.increment);
  const auto it = models.find(args.object_id);
  if (it == models.end())
    throw MissingModel("no model for object id " +
                       std::to_string(args.object_id));
  const Pose gt = io::load_pose_json(args.gt);
  const Pose pred = io::load_pose_json(args.pred);
  const double error = evaluate_metric(metric_kind_from_string(args.kind), gt,
                                       pred, it->second);
  std::cout << args.kind << ": " << fmt(error * 100.0, 6) << " cm\n";
  return kExitOk;
}

int cmd_assignments(const MetricArgs& args, const std::string& out) {
  const ModelMap models = io::load_models(args.models, args.k, args.increment);
  const auto it = models.find(args.object_id);
  if (it == models.end())
    throw MissingModel("no model for object id " +
                       std::to_string(args.object_id));
  const Pose gt = io::load_pose_json(args.gt);
  const Pose pred = io::load_pose_json(args.pred);
  const MetricKind kind = metric_kind_from_string(args.kind);
  const SampledModel& model = it->second;
  const CorrespondenceMap map = correspondence_map(kind, gt, pred, model);

  Points g = transform_points(gt, model.points);
  if (map.chosen_symmetry) {
    const Mat3 rs =
        gt.rotation * model.symmetries.rotations[*map.chosen_symmetry];
    g = (rs * model.points).colwise() + gt.translation;
  }
  const Points p = transform_points(pred, model.points);

  std::ostringstream config;
  config << "assignments kind=" << args.kind << " gt=" << args.gt
         << " pred=" << args.pred << " models=" << args.models
         << " object=" << args.object_id << " k=" << args.k
         << " increment=" << args.increment;

  std::ostringstream csv;
  csv << csv_header(config.str(), 0);
  if (map.chosen_symmetry)
    csv << "# chosen-symmetry: " << *map.chosen_symmetry << "\n";
  csv << "gt_index,pred_index,distance_cm\n";
  for (const auto& [gi, pi] : map.pairs)
    csv << gi << "," << pi << ","
        << fmt((g.col(gi) - p.col(pi)).norm() * 100.0, 6) << "\n";
  emit(csv.str(), out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"6-DoF object pose evaluation toolkit"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  auto* eval = app.add_subcommand(
      "eval", "Evaluate predictions against ground truth; writes a report");
  eval->add_option("--gt", eval_args.gt,
                   "scene_gt.json file or BOP scene directory")
      ->required();
  eval->add_option("--pred", eval_args.pred, "predictions CSV")->required();
  eval->add_option("--models", eval_args.models, "models config JSON")
      ->required();
  eval->add_option("--metric", eval_args.metric,
                   "add|add-s|mean-ssd|mssd|add-h");
  eval->add_option("--out", eval_args.out, "output prefix (.json/.csv)");
  eval->add_option("--image-tag", eval_args.image_tag,
                   "only score images carrying this tag");
  eval->add_option("--k", eval_args.k, "model subsample size");
  eval->add_option("--increment", eval_args.increment,
                   "cylinder symmetry increment, degrees");
  eval->add_option("--threads", eval_args.threads, "worker threads");

  CurveArgs curve_args;
  auto* curve = app.add_subcommand("curve", "Detection-rate curve CSV");
  curve->add_option("--gt", curve_args.gt)->required();
  curve->add_option("--pred", curve_args.pred)->required();
  curve->add_option("--models", curve_args.models)->required();
  curve->add_option("--metric", curve_args.metric);
  curve->add_option("--out", curve_args.out, "output CSV (default stdout)");
  curve->add_option("--image-tag", curve_args.image_tag);
  curve->add_option("--k", curve_args.k);
  curve->add_option("--increment", curve_args.increment);
  curve->add_option("--min", curve_args.min_cm, "lowest threshold, cm");
  curve->add_option("--max", curve_args.max_cm, "highest threshold, cm");
  curve->add_option("--step", curve_args.step_cm, "threshold step, cm");
  curve->add_option("--threads", curve_args.threads);

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand(
      "simulate", "Metric comparison under random rotations and translations");
  simulate->add_option("--models", sim_args.models)->required();
  simulate->add_option("--out", sim_args.out, "output CSV (default stdout)");
  simulate->add_option("--modes", sim_args.modes,
                       "comma list of symmetry|arbitrary|identity");
  simulate->add_option("--seed", sim_args.seed);
  simulate->add_option("--trials", sim_args.trials);
  simulate->add_option("--max-cm", sim_args.max_cm);
  simulate->add_option("--step-cm", sim_args.step_cm);
  simulate->add_option("--k", sim_args.k);
  simulate->add_option("--increment", sim_args.increment);
  simulate->add_option("--threads", sim_args.threads);

  CalibrateArgs cal_args;
  auto* calibrate =
      app.add_subcommand("calibrate-depth", "Fit a depth scale factor");
  calibrate
      ->add_option("--pairs", cal_args.pairs, "CSV with reference_m,measured_m")
      ->required();
  calibrate->add_option("--out", cal_args.out, "output CSV (default stdout)");

  RefineArgs refine_args;
  auto* refine = app.add_subcommand(
      "refine-ls", "Depth line-search refinement of a predicted pose");
  refine->add_option("--models", refine_args.models)->required();
  refine->add_option("--object", refine_args.object_id)->required();
  refine->add_option("--pose", refine_args.pose, "predicted pose JSON")
      ->required();
  refine->add_option("--camera", refine_args.camera, "intrinsics JSON")
      ->required();
  refine
      ->add_option("--depth", refine_args.depth,
                   "raw 16-bit little-endian depth, millimeters")
      ->required();
  refine->add_option("--mask", refine_args.mask, "raw 8-bit pixel mask");
  refine->add_option("--out", refine_args.out, "output JSON (default stdout)");
  refine->add_option("--alpha-min", refine_args.alpha_min);
  refine->add_option("--alpha-max", refine_args.alpha_max);
  refine->add_option("--steps", refine_args.steps);
  refine->add_option("--k", refine_args.k);
  refine->add_option("--increment", refine_args.increment);

  ValidateArgs val_args;
  auto* validate = app.add_subcommand(
      "validate-views", "Leave-one-out cross-view annotation validation");
  validate->add_option("--a", val_args.a, "view A pose list JSON")->required();
  validate->add_option("--b", val_args.b, "view B pose list JSON")->required();
  validate->add_option("--models", val_args.models)->required();
  validate->add_option("--out", val_args.out, "output CSV (default stdout)");
  validate->add_option("--trim", val_args.trim, "robust trim fraction");
  validate->add_option("--k", val_args.k);
  validate->add_option("--increment", val_args.increment);

  LapArgs lap_args;
  auto* lap = app.add_subcommand("lap", "Linear sum assignment solver");
  lap->add_option("--matrix", lap_args.matrix, "square cost matrix CSV");
  lap->add_option("--bench", lap_args.bench, "solve a random n x n instance");
  lap->add_option("--seed", lap_args.seed);

  SymmetriesArgs sym_args;
  auto* symmetries =
      app.add_subcommand("symmetries", "Dump a symmetry set as JSON");
  symmetries->add_option("--class", sym_args.cls, "cylinder|cuboid|bottle|none")
      ->required();
  symmetries->add_option("--increment", sym_args.increment);
  symmetries->add_option("--out", sym_args.out, "output JSON (default stdout)");

  SampleMeshArgs sample_args;
  auto* sample =
      app.add_subcommand("sample-mesh", "Farthest-point subsample of a mesh");
  sample->add_option("--mesh", sample_args.mesh)->required();
  sample->add_option("--k", sample_args.k);
  sample->add_option("--out", sample_args.out, "output CSV (default stdout)");

  MetricArgs metric_args;
  auto* metric = app.add_subcommand("metric", "Evaluate one pose error");
  metric->add_option("--kind", metric_args.kind)->required();
  metric->add_option("--gt", metric_args.gt, "ground truth pose JSON")
      ->required();
  metric->add_option("--pred", metric_args.pred, "predicted pose JSON")
      ->required();
  metric->add_option("--models", metric_args.models)->required();
  metric->add_option("--object", metric_args.object_id)->required();
  metric->add_option("--k", metric_args.k);
  metric->add_option("--increment", metric_args.increment);

  MetricArgs assign_args;
  std::string assign_out;
  auto* assignments = app.add_subcommand(
      "assignments", "Dump the vertex pairing a metric used as CSV");
  assignments->add_option("--kind", assign_args.kind)->required();
  assignments->add_option("--gt", assign_args.gt)->required();
  assignments->add_option("--pred", assign_args.pred)->required();
  assignments->add_option("--models", assign_args.models)->required();
  assignments->add_option("--object", assign_args.object_id)->required();
  assignments->add_option("--out", assign_out, "output CSV (default stdout)");
  assignments->add_option("--k", assign_args.k);
  assignments->add_option("--increment", assign_args.increment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (app.got_subcommand(eval)) return cmd_eval(eval_args);
    if (app.got_subcommand(curve)) return cmd_curve(curve_args);
    if (app.got_subcommand(simulate)) return cmd_simulate(sim_args);
    if (app.got_subcommand(calibrate)) return cmd_calibrate_depth(cal_args);
    if (app.got_subcommand(refine)) return cmd_refine_ls(refine_args);
    if (app.got_subcommand(validate)) return cmd_validate_views(val_args);
    if (app.got_subcommand(lap)) return cmd_lap(lap_args);
    if (app.got_subcommand(symmetries)) return cmd_symmetries(sym_args);
    if (app.got_subcommand(sample)) return cmd_sample_mesh(sample_args);
    if (app.got_subcommand(metric)) return cmd_metric(metric_args);
    if (app.got_subcommand(assignments))
      return cmd_assignments(assign_args, assign_out);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSemantic;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
