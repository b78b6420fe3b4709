#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poseval/evaluation.hpp"
#include "poseval/fieldcal.hpp"

namespace poseval::io {

namespace fs = std::filesystem;

// Nearest rotation matrix (polar projection). Ingested rotations are
// validated loosely (text files round their entries) and then projected so
// the library-level invariants hold tightly.
Mat3 orthonormalized(const Mat3& r);

// One BOP scene_gt.json: {"<im_id>": [{"obj_id": ..., "cam_R_m2c": [9],
// "cam_t_m2c": [3, millimeters], "visib_fract": optional}, ...], ...}
std::vector<GroundTruthInstance> load_scene_gt(const fs::path& file,
                                               int scene_id);

struct GtDataset {
  std::vector<GroundTruthInstance> instances;
  // optional per-image labels (e.g. lighting difficulty), keyed by
  // (scene_id, image_id); loaded from scene_image_tags.json when present
  std::map<std::pair<int, int>, std::string> image_tags;
};

// Either a single scene_gt.json file (scene id 0) or a directory of
// <scene_id>/scene_gt.json subdirectories.
GtDataset load_gt(const fs::path& path);

// BOP results CSV: scene_id,im_id,obj_id,score,R,t,time with R and t
// space-separated inside their fields, t in millimeters.
std::vector<Prediction> load_predictions_csv(const fs::path& file);

// Vertex positions from an ASCII OBJ (v lines) or an ASCII /
// binary-little-endian PLY, converted from millimeters to meters.
Points load_mesh_vertices(const fs::path& file);

// Models config JSON: {"<object_id>": {"mesh": "path", "symmetry":
// "cylinder|cuboid|bottle|none", "reorient": [9, optional]}}. Mesh paths
// are resolved relative to the config file. The optional reorientation is
// applied to the vertices so that z is vertical and x is the front.
ModelMap load_models(const fs::path& config, int max_points = 500,
                     double increment_deg = 1.0);

// {"fx","fy","cx","cy","width","height"} or BOP-style {"cam_K":[9],...}
PinholeCamera load_camera_json(const fs::path& file);

// Raw 16-bit little-endian grid, row-major, millimeters, 0 = invalid.
DepthMap load_depth_raw16(const fs::path& file, int width, int height);

// Raw 8-bit grid, row-major, nonzero = inside.
PixelMask load_mask_raw8(const fs::path& file, int width, int height);

// {"cam_R_m2c": [9], "cam_t_m2c": [3, millimeters]}
Pose load_pose_json(const fs::path& file);

// view annotation list: [{"obj_id": ..., "cam_R_m2c": [...], "cam_t_m2c":
// [...]}]; also accepts a single-image scene_gt.json map.
std::vector<AnnotatedPose> load_view_json(const fs::path& file);

// Comma-separated square matrix; blank lines and #-comments are skipped.
CostMatrix load_matrix_csv(const fs::path& file);

// Write-to-temp then atomic rename, so partial outputs are never left
// behind.
void write_text_atomic(const fs::path& file, const std::string& content);

}  // namespace poseval::io
