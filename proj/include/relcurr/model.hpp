#pragma once

// Reference classifier: z-scored features into a linear softmax head, with an
// optional tanh hidden layer.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "relcurr/parallel.hpp"

namespace relcurr {

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  // 1 where a feature is constant

  static Standardizer fit(std::span<const std::vector<double>> rows);
  std::vector<double> apply(std::span<const double> x) const;
};

class ClassifierModel {
 public:
  ClassifierModel() = default;
  /// Linear weights start at zero; hidden-layer weights are seeded.
  ClassifierModel(int input_dim, int num_classes, int hidden = 0, std::uint64_t seed = 0);

  int input_dim() const { return input_dim_; }
  int num_classes() const { return num_classes_; }
  int hidden() const { return hidden_; }

  /// Flattened as [W1 (D x H), b1 (H), W2 (H x K), b2 (K)] with a hidden
  /// layer, or [W (D x K), b (K)] without. Row-major.
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  Standardizer& standardizer() { return standardizer_; }
  const Standardizer& standardizer() const { return standardizer_; }
  std::vector<std::string>& channel_order() { return channel_order_; }
  const std::vector<std::string>& channel_order() const { return channel_order_; }

  /// Logits for a raw (unstandardized) feature row.
  std::vector<double> logits(std::span<const double> features) const;

  /// Adds scale * d(sum_k dlogits_k z_k)/d(params) to grad, i.e. backprops
  /// a logit gradient through the network for one example.
  void accumulate_gradient(std::span<const double> features, std::span<const double> dlogits, double scale,
                           std::span<double> grad) const;

  int predict(std::span<const double> features) const;

 private:
  int input_dim_ = 0;
  int num_classes_ = 0;
  int hidden_ = 0;
  std::vector<double> params_;
  Standardizer standardizer_;
  std::vector<std::string> channel_order_;
};

std::vector<int> predict_all(const ClassifierModel& model, std::span<const std::vector<double>> features,
                             Exec exec = Exec::Parallel);

/// Checkpoint document: {schema_version, D, K, hidden, channel_order,
/// feature_mean, feature_scale, params, config_hash}.
nlohmann::ordered_json model_to_json(const ClassifierModel& m, const std::string& config_hash);
ClassifierModel model_from_json(const nlohmann::ordered_json& j, std::string* config_hash = nullptr);

}  // namespace relcurr
