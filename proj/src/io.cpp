#include "poseval/io.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace poseval::io {

using nlohmann::json;

namespace {

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_file(const fs::path& file) {
  try {
    return json::parse(read_file(file));
  } catch (const json::parse_error& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
}

Mat3 rotation_from_flat(const std::vector<double>& r, const std::string& ctx) {
  if (r.size() != 9)
    throw ParseError(ctx + ": rotation needs 9 entries, got " +
                     std::to_string(r.size()));
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = r[3 * i + j];  // row-major on disk
  if (!m.allFinite() || !is_rotation(m, 1e-4))
    throw ParseError(ctx + ": not a rotation matrix");
  return orthonormalized(m);
}

Vec3 translation_mm_from_flat(const std::vector<double>& t,
                              const std::string& ctx) {
  if (t.size() != 3)
    throw ParseError(ctx + ": translation needs 3 entries");
  const Vec3 v(t[0], t[1], t[2]);
  if (!v.allFinite()) throw ParseError(ctx + ": non-finite translation");
  return v / 1000.0;  // millimeters -> meters
}

Pose pose_from_record(const json& rec, const std::string& ctx) {
  if (!rec.contains("cam_R_m2c") || !rec.contains("cam_t_m2c"))
    throw ParseError(ctx + ": missing cam_R_m2c/cam_t_m2c");
  return {rotation_from_flat(rec["cam_R_m2c"].get<std::vector<double>>(), ctx),
          translation_mm_from_flat(rec["cam_t_m2c"].get<std::vector<double>>(),
                                   ctx)};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& ctx) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used])))
      ++used;
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError(ctx + ": bad number '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& ctx) {
  int v = 0;
  const auto [ptr, ec] =
      std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(ctx + ": bad integer '" + s + "'");
  return v;
}

std::vector<double> parse_doubles(const std::string& s,
                                  const std::string& ctx) {
  std::vector<double> out;
  std::istringstream ss(s);
  std::string tok;
  while (ss >> tok) out.push_back(parse_double(tok, ctx));
  return out;
}

}  // namespace

Mat3 orthonormalized(const Mat3& r) {
  Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0)
    d(2, 2) = -1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

std::vector<GroundTruthInstance> load_scene_gt(const fs::path& file,
                                               int scene_id) {
  const json doc = parse_json_file(file);
  if (!doc.is_object())
    throw ParseError(file.string() + ": expected an object keyed by image id");

  std::vector<GroundTruthInstance> out;
  for (const auto& [key, records] : doc.items()) {
    const std::string ctx = file.string() + " image " + key;
    const int image_id = parse_int(key, ctx);
    if (!records.is_array()) throw ParseError(ctx + ": expected a list");
    for (size_t i = 0; i < records.size(); ++i) {
      const json& rec = records[i];
      const std::string rctx = ctx + " record " + std::to_string(i);
      if (!rec.contains("obj_id")) throw ParseError(rctx + ": missing obj_id");
      GroundTruthInstance gt;
      gt.scene_id = scene_id;
      gt.image_id = image_id;
      gt.object_id = rec["obj_id"].get<int>();
      if (gt.object_id < 0) throw ParseError(rctx + ": negative obj_id");
      gt.pose = pose_from_record(rec, rctx);
      if (rec.contains("visib_fract"))
        gt.visibility = rec["visib_fract"].get<double>();
      out.push_back(std::move(gt));
    }
  }
  return out;
}

GtDataset load_gt(const fs::path& path) {
  GtDataset data;
  if (fs::is_regular_file(path)) {
    data.instances = load_scene_gt(path, 0);
    return data;
  }
  if (!fs::is_directory(path))
    throw IoError("ground truth path does not exist: " + path.string());

  std::vector<std::pair<int, fs::path>> scenes;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (name.empty() ||
        !std::all_of(name.begin(), name.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      continue;
    if (fs::exists(entry.path() / "scene_gt.json"))
      scenes.emplace_back(std::stoi(name), entry.path());
  }
  if (scenes.empty())
    throw IoError("no <scene_id>/scene_gt.json found under " + path.string());
  std::sort(scenes.begin(), scenes.end());

  for (const auto& [scene_id, dir] : scenes) {
    auto part = load_scene_gt(dir / "scene_gt.json", scene_id);
    data.instances.insert(data.instances.end(), part.begin(), part.end());
    const fs::path tags = dir / "scene_image_tags.json";
    if (fs::exists(tags)) {
      const json doc = parse_json_file(tags);
      for (const auto& [key, value] : doc.items())
        data.image_tags[{scene_id, parse_int(key, tags.string())}] =
            value.get<std::string>();
    }
  }
  return data;
}

std::vector<Prediction> load_predictions_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());

  std::vector<Prediction> out;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string ctx = file.string() + ":" + std::to_string(line_no);
    if (!header_seen) {
      header_seen = true;
      if (line.find("scene_id") != std::string::npos) continue;  // header row
    }
    const auto fields = split(line, ',');
    if (fields.size() != 7)
      throw ParseError(ctx + ": expected 7 comma-separated fields, got " +
                       std::to_string(fields.size()));
    Prediction p;
    p.scene_id = parse_int(fields[0], ctx);
    p.image_id = parse_int(fields[1], ctx);
    p.object_id = parse_int(fields[2], ctx);
    p.score = parse_double(fields[3], ctx);
    if (!std::isfinite(p.score)) throw ParseError(ctx + ": non-finite score");
    p.pose = {rotation_from_flat(parse_doubles(fields[4], ctx), ctx),
              translation_mm_from_flat(parse_doubles(fields[5], ctx), ctx)};
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

Points obj_vertices(const fs::path& file) {
  std::ifstream in(file);
  std::vector<Vec3> verts;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("v ", 0) != 0) continue;
    const auto vals =
        parse_doubles(line.substr(2), file.string() + ":" + std::to_string(line_no));
    if (vals.size() < 3)
      throw ParseError(file.string() + ":" + std::to_string(line_no) +
                       ": vertex needs 3 coordinates");
    verts.emplace_back(vals[0], vals[1], vals[2]);
  }
  if (verts.empty()) throw ParseError(file.string() + ": no vertices");
  Points pts(3, static_cast<Eigen::Index>(verts.size()));
  for (size_t i = 0; i < verts.size(); ++i) pts.col(i) = verts[i];
  return pts;
}

size_t ply_type_size(const std::string& t, const std::string& ctx) {
  if (t == "char" || t == "uchar" || t == "int8" || t == "uint8") return 1;
  if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
  if (t == "int" || t == "uint" || t == "int32" || t == "uint32" || t == "float" ||
      t == "float32")
    return 4;
  if (t == "double" || t == "float64") return 8;
  throw ParseError(ctx + ": unsupported ply type " + t);
}

Points ply_vertices(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(file.string() + ": empty file");
  if (line.rfind("ply", 0) != 0) throw ParseError(file.string() + ": not a ply");

  bool binary = false;
  size_t vertex_count = 0;
  struct Property {
    std::string type, name;
  };
  std::vector<Property> vertex_props;
  bool in_vertex_element = false;
  bool vertex_first_element = true;
  bool seen_element = false;

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word == "format") {
      std::string fmt;
      ss >> fmt;
      if (fmt == "binary_little_endian") binary = true;
      else if (fmt != "ascii")
        throw ParseError(file.string() + ": unsupported ply format " + fmt);
    } else if (word == "element") {
      std::string name;
      size_t count;
      ss >> name >> count;
      in_vertex_element = name == "vertex";
      if (in_vertex_element) {
        vertex_count = count;
        vertex_first_element = !seen_element;
      }
      seen_element = true;
    } else if (word == "property" && in_vertex_element) {
      Property p;
      ss >> p.type;
      if (p.type == "list")
        throw ParseError(file.string() + ": list property in vertex element");
      ss >> p.name;
      vertex_props.push_back(p);
    } else if (word == "end_header") {
      break;
    }
  }
  if (vertex_count == 0 || vertex_props.empty())
    throw ParseError(file.string() + ": no vertex element");
  if (!vertex_first_element)
    throw ParseError(file.string() + ": vertex element must come first");

  int ix = -1, iy = -1, iz = -1;
  for (int i = 0; i < static_cast<int>(vertex_props.size()); ++i) {
    if (vertex_props[i].name == "x") ix = i;
    if (vertex_props[i].name == "y") iy = i;
    if (vertex_props[i].name == "z") iz = i;
  }
  if (ix < 0 || iy < 0 || iz < 0)
    throw ParseError(file.string() + ": vertex element lacks x/y/z");

  Points pts(3, static_cast<Eigen::Index>(vertex_count));
  if (!binary) {
    for (size_t i = 0; i < vertex_count; ++i) {
      if (!std::getline(in, line))
        throw ParseError(file.string() + ": truncated vertex data");
      const auto vals = parse_doubles(line, file.string());
      if (vals.size() < vertex_props.size())
        throw ParseError(file.string() + ": short vertex line");
      pts.col(i) = Vec3(vals[ix], vals[iy], vals[iz]);
    }
  } else {
    for (size_t i = 0; i < vertex_count; ++i) {
      Vec3 v;
      for (size_t p = 0; p < vertex_props.size(); ++p) {
        const size_t sz = ply_type_size(vertex_props[p].type, file.string());
        char buf[8];
        if (!in.read(buf, static_cast<std::streamsize>(sz)))
          throw ParseError(file.string() + ": truncated vertex data");
        double value = 0.0;
        if (vertex_props[p].type == "float" || vertex_props[p].type == "float32") {
          float f;
          std::memcpy(&f, buf, 4);
          value = f;
        } else if (vertex_props[p].type == "double" ||
                   vertex_props[p].type == "float64") {
          std::memcpy(&value, buf, 8);
        }
        if (static_cast<int>(p) == ix) v.x() = value;
        if (static_cast<int>(p) == iy) v.y() = value;
        if (static_cast<int>(p) == iz) v.z() = value;
      }
      pts.col(i) = v;
    }
  }
  return pts;
}

}  // namespace

Points load_mesh_vertices(const fs::path& file) {
  const std::string ext = file.extension().string();
  Points pts;
  if (ext == ".obj") {
    pts = obj_vertices(file);
  } else if (ext == ".ply") {
    pts = ply_vertices(file);
  } else {
    throw IoError("unsupported mesh format: " + file.string());
  }
  if (!pts.allFinite())
    throw ParseError(file.string() + ": non-finite vertex coordinates");
  return pts / 1000.0;  // millimeters -> meters
}

ModelMap load_models(const fs::path& config, int max_points,
                     double increment_deg) {
  const json doc = parse_json_file(config);
  if (!doc.is_object())
    throw ParseError(config.string() + ": expected object keyed by object id");
  const fs::path base = config.parent_path();

  ModelMap models;
  for (const auto& [key, entry] : doc.items()) {
    const std::string ctx = config.string() + " object " + key;
    const int object_id = parse_int(key, ctx);
    if (!entry.contains("mesh") || !entry.contains("symmetry"))
      throw ParseError(ctx + ": needs mesh and symmetry fields");
    fs::path mesh = entry["mesh"].get<std::string>();
    if (mesh.is_relative()) mesh = base / mesh;
    Points vertices = load_mesh_vertices(mesh);
    if (entry.contains("reorient")) {
      const Mat3 r = rotation_from_flat(
          entry["reorient"].get<std::vector<double>>(), ctx);
      vertices = r * vertices;
    }
    const SymmetryClass cls =
        symmetry_class_from_string(entry["symmetry"].get<std::string>());
    models.emplace(object_id,
                   make_sampled_model(object_id, vertices,
                                      generate_symmetries(cls, increment_deg),
                                      max_points));
  }
  if (models.empty()) throw ParseError(config.string() + ": no models");
  return models;
}

PinholeCamera load_camera_json(const fs::path& file) {
  const json doc = parse_json_file(file);
  PinholeCamera cam;
  if (doc.contains("cam_K")) {
    const auto k = doc["cam_K"].get<std::vector<double>>();
    if (k.size() != 9) throw ParseError(file.string() + ": cam_K needs 9");
    cam.fx = k[0];
    cam.fy = k[4];
    cam.cx = k[2];
    cam.cy = k[5];
  } else {
    for (const char* key : {"fx", "fy", "cx", "cy"})
      if (!doc.contains(key))
        throw ParseError(file.string() + ": missing " + std::string(key));
    cam.fx = doc["fx"].get<double>();
    cam.fy = doc["fy"].get<double>();
    cam.cx = doc["cx"].get<double>();
    cam.cy = doc["cy"].get<double>();
  }
  if (!doc.contains("width") || !doc.contains("height"))
    throw ParseError(file.string() + ": missing width/height");
  cam.width = doc["width"].get<int>();
  cam.height = doc["height"].get<int>();
  if (!(cam.fx > 0) || !(cam.fy > 0) || cam.width <= 0 || cam.height <= 0 ||
      cam.cx < 0 || cam.cx >= cam.width || cam.cy < 0 || cam.cy >= cam.height)
    throw ParseError(file.string() + ": invalid intrinsics");
  return cam;
}

DepthMap load_depth_raw16(const fs::path& file, int width, int height) {
  const std::string bytes = read_file(file);
  const size_t expected = static_cast<size_t>(width) * height * 2;
  if (bytes.size() != expected)
    throw ParseError(file.string() + ": expected " + std::to_string(expected) +
                     " bytes, got " + std::to_string(bytes.size()));
  DepthMap depth(width, height);
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      const size_t off = 2 * (static_cast<size_t>(v) * width + u);
      const std::uint16_t mm =
          static_cast<std::uint8_t>(bytes[off]) |
          (static_cast<std::uint16_t>(static_cast<std::uint8_t>(bytes[off + 1]))
           << 8);
      depth.at(u, v) = mm / 1000.0;
    }
  }
  return depth;
}

PixelMask load_mask_raw8(const fs::path& file, int width, int height) {
  const std::string bytes = read_file(file);
  const size_t expected = static_cast<size_t>(width) * height;
  if (bytes.size() != expected)
    throw ParseError(file.string() + ": expected " + std::to_string(expected) +
                     " bytes, got " + std::to_string(bytes.size()));
  PixelMask mask;
  mask.width = width;
  mask.height = height;
  mask.inside.assign(bytes.begin(), bytes.end());
  return mask;
}

Pose load_pose_json(const fs::path& file) {
  const json doc = parse_json_file(file);
  return pose_from_record(doc, file.string());
}

std::vector<AnnotatedPose> load_view_json(const fs::path& file) {
  const json doc = parse_json_file(file);
  const json* records = &doc;
  if (doc.is_object()) {
    if (doc.size() != 1)
      throw ParseError(file.string() + ": view file must hold one image");
    records = &doc.begin().value();
  }
  if (!records->is_array())
    throw ParseError(file.string() + ": expected a list of pose records");

  std::vector<AnnotatedPose> out;
  for (size_t i = 0; i < records->size(); ++i) {
    const json& rec = (*records)[i];
    const std::string ctx = file.string() + " record " + std::to_string(i);
    if (!rec.contains("obj_id")) throw ParseError(ctx + ": missing obj_id");
    out.push_back(
        {rec["obj_id"].get<int>(), pose_from_record(rec, ctx)});
  }
  return out;
}

CostMatrix load_matrix_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string ctx = file.string() + ":" + std::to_string(line_no);
    std::vector<double> row;
    for (const std::string& tok : split(line, ','))
      row.push_back(parse_double(tok, ctx));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(file.string() + ": empty matrix");
  const size_t n = rows.size();
  CostMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw ParseError(file.string() + ": row " + std::to_string(i + 1) +
                       " has " + std::to_string(rows[i].size()) +
                       " entries, expected " + std::to_string(n));
    for (size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_text_atomic(const fs::path& file, const std::string& content) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  fs::rename(tmp, file);
}

}  // namespace poseval::io
