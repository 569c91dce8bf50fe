// Copyright (c) 2026 The tfa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TFA_DATASET_HPP
#define TFA_DATASET_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tfa/errors.hpp"
#include "tfa/image.hpp"
#include "tfa/serialize.hpp"

namespace tfa {

struct BoxAnnotation {
  int class_id = 0;
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
};

struct Sample {
  Image image;
  std::vector<BoxAnnotation> boxes;
};

struct Dataset {
  std::vector<std::string> class_names;
  std::vector<Sample> train;
  std::vector<Sample> val;
};

/// Synthetic shapes dataset: 0..3 non-overlapping colored shapes per image on
/// a flat background, exact box labels, fully determined by the seed.
struct ShapesSpec {
  std::vector<std::string> classes = {"square", "circle", "triangle"};
  std::size_t n_train = 500;
  std::size_t n_val = 100;
  std::uint64_t seed = 1;
  std::size_t image_size = 96;
  std::size_t min_shapes = 0;
  std::size_t max_shapes = 3;
  double min_extent = 18.0;   // shape bbox side, pixels
  double max_extent = 42.0;
  double noise = 2.0;         // uniform pixel noise amplitude
  double contrast = 80.0;     // min max-channel distance shape vs background
};

namespace detail {

inline const std::vector<std::string>& known_shape_classes() {
  static const std::vector<std::string> k = {"square", "circle", "triangle", "rectangle"};
  return k;
}

struct ShapePlacement {
  int class_id;
  double x1, y1, x2, y2;  // tight bbox
};

inline bool boxes_overlap(double ax1, double ay1, double ax2, double ay2, double bx1,
                          double by1, double bx2, double by2, double margin) {
  return ax1 < bx2 + margin && bx1 < ax2 + margin && ay1 < by2 + margin &&
         by1 < ay2 + margin;
}

inline std::array<double, 3> random_color(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(20.0, 235.0);
  return {u(rng), u(rng), u(rng)};
}

inline double color_distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double d = 0;
  for (int c = 0; c < 3; ++c) d = std::max(d, std::abs(a[c] - b[c]));
  return d;
}

/// Paints one shape into the image. Coordinates are pixel-centered: pixel
/// (x,y) covers [x,x+1)x[y,y+1), and the reported bbox is tight around the
/// painted area.
inline void paint_shape(Image& img, const std::string& cls, const ShapePlacement& p,
                        const std::array<double, 3>& color) {
  const std::size_t h = img.height(), w = img.width();
  const std::size_t x_lo = static_cast<std::size_t>(std::floor(p.x1));
  const std::size_t y_lo = static_cast<std::size_t>(std::floor(p.y1));
  const std::size_t x_hi = std::min(w, static_cast<std::size_t>(std::ceil(p.x2)));
  const std::size_t y_hi = std::min(h, static_cast<std::size_t>(std::ceil(p.y2)));
  const double cx = (p.x1 + p.x2) / 2.0, cy = (p.y1 + p.y2) / 2.0;
  const double rx = (p.x2 - p.x1) / 2.0, ry = (p.y2 - p.y1) / 2.0;

  for (std::size_t y = y_lo; y < y_hi; ++y) {
    for (std::size_t x = x_lo; x < x_hi; ++x) {
      const double px = x + 0.5, py = y + 0.5;
      bool inside = false;
      if (cls == "square" || cls == "rectangle") {
        inside = px >= p.x1 && px < p.x2 && py >= p.y1 && py < p.y2;
      } else if (cls == "circle") {
        const double dx = (px - cx) / rx, dy = (py - cy) / ry;
        inside = dx * dx + dy * dy <= 1.0;
      } else if (cls == "triangle") {
        // isoceles, apex up: inside when |px-cx| <= rx * (py-y1)/(2*ry)
        const double t = (py - p.y1) / (2.0 * ry);
        inside = py >= p.y1 && py < p.y2 && std::abs(px - cx) <= rx * t;
      }
      if (inside)
        for (std::size_t c = 0; c < 3; ++c) img.pixels.at(c, y, x) = color[c];
    }
  }
}

inline Sample render_shapes_image(const ShapesSpec& spec, const std::vector<int>& class_ids,
                                  std::mt19937_64& rng, std::string id) {
  const double size = static_cast<double>(spec.image_size);
  Sample s;
  s.image = make_image(spec.image_size, spec.image_size, 0.0, std::move(id));

  const auto bg = random_color(rng);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t y = 0; y < spec.image_size; ++y)
      for (std::size_t x = 0; x < spec.image_size; ++x)
        s.image.pixels.at(c, y, x) = bg[c];

  std::uniform_real_distribution<double> extent_dist(spec.min_extent, spec.max_extent);
  std::vector<ShapePlacement> placed;
  for (int cid : class_ids) {
    const std::string& cls = spec.classes.at(static_cast<std::size_t>(cid));
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      double ex = extent_dist(rng);
      double ey = ex;
      if (cls == "rectangle") ey = std::max(spec.min_extent * 0.7, ex * 0.5);
      if (ex >= size - 4 || ey >= size - 4) continue;
      std::uniform_real_distribution<double> xd(2.0, size - 2.0 - ex);
      std::uniform_real_distribution<double> yd(2.0, size - 2.0 - ey);
      ShapePlacement p{cid, 0, 0, 0, 0};
      p.x1 = std::floor(xd(rng));
      p.y1 = std::floor(yd(rng));
      p.x2 = p.x1 + std::floor(ex);
      p.y2 = p.y1 + std::floor(ey);
      bool clash = false;
      for (const auto& q : placed)
        if (boxes_overlap(p.x1, p.y1, p.x2, p.y2, q.x1, q.y1, q.x2, q.y2, 3.0)) clash = true;
      if (clash) continue;

      auto color = random_color(rng);
      for (int ctry = 0; ctry < 100 && color_distance(color, bg) < spec.contrast; ++ctry)
        color = random_color(rng);
      if (color_distance(color, bg) < spec.contrast)
        throw PreconditionError("shapes generator: could not find a contrasting color");

      paint_shape(s.image, cls, p, color);
      placed.push_back(p);
      s.boxes.push_back({cid, p.x1, p.y1, p.x2, p.y2});
      ok = true;
    }
    if (!ok)
      throw PreconditionError("shapes generator: placement failed after bounded retries");
  }

  if (spec.noise > 0.0) {
    std::uniform_real_distribution<double> nd(-spec.noise, spec.noise);
    for (double& v : s.image.pixels) v = clip(v + nd(rng), 0.0, 255.0);
  }
  return s;
}

}  // namespace detail

inline void validate_shapes_spec(const ShapesSpec& spec) {
  if (spec.classes.size() < 2)
    throw PreconditionError("shapes dataset needs at least 2 classes");
  if (spec.classes.size() > 4)
    throw PreconditionError("shapes dataset supports at most 4 classes");
  for (const auto& c : spec.classes) {
    const auto& known = detail::known_shape_classes();
    if (std::find(known.begin(), known.end(), c) == known.end())
      throw ConfigError("unknown shape class '" + c + "'");
  }
  if (spec.image_size < 32) throw PreconditionError("image size too small");
  if (spec.max_shapes < spec.min_shapes) throw PreconditionError("bad shape count range");
}

/// Generates train and val splits from disjoint streams of one seeded RNG.
inline Dataset generate_shapes_dataset(const ShapesSpec& spec) {
  validate_shapes_spec(spec);
  Dataset ds;
  ds.class_names = spec.classes;

  auto make_split = [&](std::size_t count, std::uint64_t stream, const char* prefix) {
    std::vector<Sample> out;
    std::mt19937_64 rng(spec.seed * 0x9E3779B97F4A7C15ULL + stream);
    std::uniform_int_distribution<std::size_t> count_dist(spec.min_shapes, spec.max_shapes);
    std::uniform_int_distribution<int> class_dist(0, static_cast<int>(spec.classes.size()) - 1);
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<int> cids(count_dist(rng));
      for (auto& c : cids) c = class_dist(rng);
      char id[64];
      std::snprintf(id, sizeof(id), "%s_%05zu", prefix, i);
      out.push_back(detail::render_shapes_image(spec, cids, rng, id));
    }
    return out;
  };

  ds.train = make_split(spec.n_train, 1, "train");
  ds.val = make_split(spec.n_val, 2, "val");
  return ds;
}

/// One image with a single shape of the requested class, e.g. for guided
/// images. `distractors` adds that many other-class shapes around it.
inline Sample generate_single_shape_image(const ShapesSpec& spec, int class_id,
                                          std::uint64_t seed, std::size_t distractors = 0,
                                          std::string id = "single") {
  validate_shapes_spec(spec);
  if (class_id < 0 || class_id >= static_cast<int>(spec.classes.size()))
    throw ConfigError("generate_single_shape_image: class id out of range");
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 7);
  std::vector<int> cids = {class_id};
  std::uniform_int_distribution<int> class_dist(0, static_cast<int>(spec.classes.size()) - 1);
  for (std::size_t i = 0; i < distractors; ++i) {
    int c = class_dist(rng);
    while (c == class_id) c = class_dist(rng);
    cids.push_back(c);
  }
  return detail::render_shapes_image(spec, cids, rng, std::move(id));
}

inline std::map<int, std::size_t> class_histogram(const std::vector<Sample>& samples) {
  std::map<int, std::size_t> hist;
  for (const auto& s : samples)
    for (const auto& b : s.boxes) ++hist[b.class_id];
  return hist;
}

// ---------------------------------------------------------------------------
// Annotation JSON schema (documented in the README):
// {
//   "version": 1,
//   "classes": ["square", ...],
//   "images": [
//     {"id": "...", "file": "images/....png", "width": W, "height": H,
//      "boxes": [{"class_id": 0, "x1":..., "y1":..., "x2":..., "y2":...}]}
//   ]
// }
// ---------------------------------------------------------------------------

inline json annotations_to_json(const std::vector<std::string>& class_names,
                                const std::vector<Sample>& samples,
                                const std::string& image_dir_rel) {
  json root;
  root["version"] = 1;
  root["classes"] = class_names;
  json images = json::array();
  for (const auto& s : samples) {
    json rec;
    rec["id"] = s.image.id;
    rec["file"] = image_dir_rel + "/" + s.image.id + ".png";
    rec["width"] = s.image.width();
    rec["height"] = s.image.height();
    json boxes = json::array();
    for (const auto& b : s.boxes)
      boxes.push_back({{"class_id", b.class_id},
                       {"x1", b.x1},
                       {"y1", b.y1},
                       {"x2", b.x2},
                       {"y2", b.y2}});
    rec["boxes"] = boxes;
    images.push_back(rec);
  }
  root["images"] = images;
  return root;
}

/// Writes images/<id>.png plus train.json / val.json under `dir`.
inline void save_dataset(const Dataset& ds, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "images");
  for (const auto* split : {&ds.train, &ds.val})
    for (const auto& s : *split)
      write_png(s.image, (fs::path(dir) / "images" / (s.image.id + ".png")).string());
  write_text_file((fs::path(dir) / "train.json").string(),
                  annotations_to_json(ds.class_names, ds.train, "images").dump(2) + "\n");
  write_text_file((fs::path(dir) / "val.json").string(),
                  annotations_to_json(ds.class_names, ds.val, "images").dump(2) + "\n");
}

inline std::vector<Sample> load_annotated_split(const std::string& annotation_path) {
  namespace fs = std::filesystem;
  const json root = json::parse(read_text_file(annotation_path));
  if (root.at("version").get<int>() != 1)
    throw IoError("annotations: unsupported version in " + annotation_path);
  const fs::path base = fs::path(annotation_path).parent_path();
  std::vector<Sample> out;
  for (const auto& rec : root.at("images")) {
    Sample s;
    s.image = read_png((base / rec.at("file").get<std::string>()).string(),
                       rec.at("id").get<std::string>());
    for (const auto& b : rec.at("boxes"))
      s.boxes.push_back({b.at("class_id").get<int>(), b.at("x1").get<double>(),
                         b.at("y1").get<double>(), b.at("x2").get<double>(),
                         b.at("y2").get<double>()});
    out.push_back(std::move(s));
  }
  return out;
}

inline Dataset load_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  Dataset ds;
  const json troot = json::parse(read_text_file((fs::path(dir) / "train.json").string()));
  ds.class_names = troot.at("classes").get<std::vector<std::string>>();
  ds.train = load_annotated_split((fs::path(dir) / "train.json").string());
  ds.val = load_annotated_split((fs::path(dir) / "val.json").string());
  return ds;
}

/// Loads every PNG in a directory (sorted by filename) as an attack source
/// pool; ids are the file stems.
inline std::vector<Image> load_image_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<Image> out;
  for (const auto& f : files) out.push_back(read_png(f.string(), f.stem().string()));
  if (out.empty()) throw PreconditionError("no .png images found in " + dir);
  return out;
}

}  // namespace tfa

#endif  // TFA_DATASET_HPP
