// Copyright (c) 2026 The tfa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TFA_DETECTOR_HPP
#define TFA_DETECTOR_HPP

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tfa/errors.hpp"
#include "tfa/image.hpp"
#include "tfa/tensor.hpp"

namespace tfa {

struct Detection {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  int class_id = -1;
  double score = 0.0;
};

struct GridSpec {
  std::size_t rows = 0, cols = 0, stride = 0;
  std::size_t cells() const { return rows * cols; }
};

/// Final-layer view of a detector: per-candidate objectness and class
/// probabilities (post-activation, in [0,1]) plus decoded boxes.
struct DetectorOutput {
  Tensor objectness;                         // [P]
  Tensor class_probs;                        // [P, C]
  std::vector<std::array<double, 4>> boxes;  // decoded, per candidate
  GridSpec grid;
};

struct ClassScoreGrad {
  Tensor grad;              // d score / d features at the hooked layer
  double score = 0.0;       // the class confidence y that was differentiated
  bool zero_signal = false; // no candidate carried the class; grad is all-zero
};

/// Uniform detector abstraction. Adapters must be deterministic: repeated
/// calls on identical inputs return bitwise-identical results. All methods
/// are const; an adapter whose concurrent_inference_safe() returns true may
/// be shared across threads, otherwise callers instantiate one per worker.
class DetectorAdapter {
 public:
  virtual ~DetectorAdapter() = default;

  virtual std::string name() const = 0;
  virtual std::size_t input_height() const = 0;
  virtual std::size_t input_width() const = 0;
  virtual const std::vector<std::string>& class_names() const = 0;
  virtual const std::vector<std::string>& feature_layers() const = 0;
  virtual std::string default_layer() const = 0;
  virtual bool concurrent_inference_safe() const { return false; }
  virtual bool supports_output_scores() const { return false; }

  /// Feature map [F,H,W] at the named internal layer. Preprocessing
  /// (resize/normalize) happens inside the adapter; callers pass raw
  /// [0,255] images.
  virtual Tensor extract_features(const Image& img, const std::string& layer) const = 0;

  /// Backpropagates a gradient w.r.t. the hooked features down to the raw
  /// pixels, composing the adapter's preprocessing differentiably.
  virtual Tensor feature_backward(const Image& img, const std::string& layer,
                                  const Tensor& dfeatures) const = 0;

  /// Gradient of the class confidence (max over candidates of the class-t
  /// score) w.r.t. the hooked features.
  virtual ClassScoreGrad class_score_gradient(const Image& img, const std::string& layer,
                                              int target_class) const = 0;

  /// Thresholded, NMS-filtered detections sorted by descending score.
  virtual std::vector<Detection> detect(const Image& img, double threshold) const = 0;

  virtual DetectorOutput output_scores(const Image&) const {
    throw UnsupportedError(name() + ": adapter does not expose final-layer scores");
  }

  /// Backpropagates gradients w.r.t. the final-layer probabilities
  /// (objectness [P], class probs [P,C]) down to the raw pixels.
  virtual Tensor output_backward(const Image&, const Tensor& /*d_objectness*/,
                                 const Tensor& /*d_class_probs*/) const {
    throw UnsupportedError(name() + ": adapter does not expose final-layer gradients");
  }
};

/// A configured detector: adapter + attack layer + confidence threshold.
class DetectorHandle {
 public:
  DetectorHandle() = default;

  DetectorHandle(std::shared_ptr<const DetectorAdapter> adapter, std::string layer = "",
                 double threshold = 0.5)
      : adapter_(std::move(adapter)), layer_(std::move(layer)), threshold_(threshold) {
    if (!adapter_) throw ConfigError("DetectorHandle: null adapter");
    if (layer_.empty()) layer_ = adapter_->default_layer();
    const auto& layers = adapter_->feature_layers();
    if (std::count(layers.begin(), layers.end(), layer_) != 1)
      throw ConfigError("DetectorHandle: layer '" + layer_ + "' does not resolve to exactly one layer of " +
                        adapter_->name());
    if (!(threshold_ > 0.0 && threshold_ < 1.0))
      throw ConfigError("DetectorHandle: confidence threshold must be in (0,1)");
  }

  const DetectorAdapter& adapter() const { return *adapter_; }
  std::shared_ptr<const DetectorAdapter> adapter_ptr() const { return adapter_; }
  const std::string& feature_layer() const { return layer_; }
  double confidence_threshold() const { return threshold_; }

  DetectorHandle with_layer(const std::string& layer) const {
    return DetectorHandle(adapter_, layer, threshold_);
  }
  DetectorHandle with_threshold(double t) const { return DetectorHandle(adapter_, layer_, t); }

  std::size_t num_classes() const { return adapter_->class_names().size(); }

  int class_index(const std::string& class_name) const {
    const auto& names = adapter_->class_names();
    auto it = std::find(names.begin(), names.end(), class_name);
    if (it == names.end())
      throw ConfigError("class '" + class_name + "' not in detector vocabulary");
    return static_cast<int>(it - names.begin());
  }

  const std::string& class_name(int class_id) const {
    if (class_id < 0 || class_id >= static_cast<int>(num_classes()))
      throw ConfigError("class id " + std::to_string(class_id) + " out of vocabulary range");
    return adapter_->class_names()[static_cast<std::size_t>(class_id)];
  }

  Tensor extract_features(const Image& img) const {
    Tensor f = adapter_->extract_features(img, layer_);
    require_finite(f, "extract_features");
    return f;
  }

  Tensor feature_backward(const Image& img, const Tensor& dfeatures) const {
    return adapter_->feature_backward(img, layer_, dfeatures);
  }

  ClassScoreGrad class_score_gradient(const Image& img, int target_class) const {
    class_name(target_class);  // vocabulary check
    ClassScoreGrad g = adapter_->class_score_gradient(img, layer_, target_class);
    require_finite(g.grad, "class_score_gradient");
    return g;
  }

  std::vector<Detection> detect(const Image& img) const {
    auto dets = adapter_->detect(img, threshold_);
    std::stable_sort(dets.begin(), dets.end(),
                     [](const Detection& a, const Detection& b) { return a.score > b.score; });
    return dets;
  }

  DetectorOutput output_scores(const Image& img) const { return adapter_->output_scores(img); }

  Tensor output_backward(const Image& img, const Tensor& d_obj, const Tensor& d_cls) const {
    return adapter_->output_backward(img, d_obj, d_cls);
  }

 private:
  std::shared_ptr<const DetectorAdapter> adapter_;
  std::string layer_;
  double threshold_ = 0.5;
};

// --------------------------------------------------------------------------
// Adapter registry, keyed by kind. Factories receive a JSON config (adapter
// specific; the toy detector takes {"checkpoint": path}).
// --------------------------------------------------------------------------

using AdapterFactory =
    std::function<std::shared_ptr<const DetectorAdapter>(const nlohmann::json&)>;

inline std::map<std::string, AdapterFactory>& adapter_registry() {
  static std::map<std::string, AdapterFactory> reg;
  return reg;
}

inline void register_adapter(const std::string& kind, AdapterFactory factory) {
  adapter_registry()[kind] = std::move(factory);
}

inline std::shared_ptr<const DetectorAdapter> make_adapter(const std::string& kind,
                                                           const nlohmann::json& config) {
  auto it = adapter_registry().find(kind);
  if (it == adapter_registry().end())
    throw ConfigError("no detector adapter registered under '" + kind + "'");
  return it->second(config);
}

inline std::vector<std::string> registered_adapters() {
  std::vector<std::string> kinds;
  for (const auto& [k, v] : adapter_registry()) kinds.push_back(k);
  return kinds;
}

inline double box_iou(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  const double ix1 = std::max(a[0], b[0]), iy1 = std::max(a[1], b[1]);
  const double ix2 = std::min(a[2], b[2]), iy2 = std::min(a[3], b[3]);
  const double iw = std::max(0.0, ix2 - ix1), ih = std::max(0.0, iy2 - iy1);
  const double inter = iw * ih;
  const double area_a = (a[2] - a[0]) * (a[3] - a[1]);
  const double area_b = (b[2] - b[0]) * (b[3] - b[1]);
  const double uni = area_a + area_b - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

}  // namespace tfa

#endif  // TFA_DETECTOR_HPP
