#include "relcurr/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "relcurr/errors.hpp"
#include "relcurr/rng.hpp"

namespace relcurr {

namespace {
constexpr int kSchemaVersion = 1;
}

Standardizer Standardizer::fit(std::span<const std::vector<double>> rows) {
  if (rows.empty()) throw Error(ErrorKind::InvalidInput, "cannot fit a standardizer on zero rows");
  const std::size_t d = rows.front().size();
  Standardizer s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (const auto& r : rows) {
    if (r.size() != d) throw Error(ErrorKind::InvalidInput, "feature rows differ in length");
    for (std::size_t i = 0; i < d; ++i) s.mean[i] += r[i];
  }
  const double n = static_cast<double>(rows.size());
  for (auto& m : s.mean) m /= n;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < d; ++i) s.scale[i] += (r[i] - s.mean[i]) * (r[i] - s.mean[i]);
  for (auto& v : s.scale) {
    v = std::sqrt(v / n);
    if (!(v > 1e-12)) v = 1.0;
  }
  return s;
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
  if (x.size() != mean.size()) throw Error(ErrorKind::InvalidInput, "feature row has the wrong dimension");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean[i]) / scale[i];
  return out;
}

ClassifierModel::ClassifierModel(int input_dim, int num_classes, int hidden, std::uint64_t seed)
    : input_dim_(input_dim), num_classes_(num_classes), hidden_(hidden) {
  if (input_dim < 1 || num_classes < 2 || hidden < 0)
    throw Error(ErrorKind::InvalidConfig, "model needs D >= 1, K >= 2, H >= 0");
  standardizer_.mean.assign(input_dim, 0.0);
  standardizer_.scale.assign(input_dim, 1.0);
  if (hidden == 0) {
    params_.assign(static_cast<std::size_t>(input_dim) * num_classes + num_classes, 0.0);
    return;
  }
  const std::size_t n_w1 = static_cast<std::size_t>(input_dim) * hidden;
  const std::size_t n_w2 = static_cast<std::size_t>(hidden) * num_classes;
  params_.assign(n_w1 + hidden + n_w2 + num_classes, 0.0);
  auto rng = derive_rng(seed, {0x696e6974ULL});
  std::normal_distribution<double> g1(0.0, 1.0 / std::sqrt(static_cast<double>(input_dim)));
  std::normal_distribution<double> g2(0.0, 1.0 / std::sqrt(static_cast<double>(hidden)));
  for (std::size_t i = 0; i < n_w1; ++i) params_[i] = g1(rng);
  for (std::size_t i = 0; i < n_w2; ++i) params_[n_w1 + hidden + i] = g2(rng);
}

std::vector<double> ClassifierModel::logits(std::span<const double> features) const {
  const auto x = standardizer_.apply(features);
  const int k = num_classes_;
  const int d = input_dim_;
  std::vector<double> z(k, 0.0);
  if (hidden_ == 0) {
    const double* w = params_.data();
    const double* b = w + static_cast<std::size_t>(d) * k;
    for (int c = 0; c < k; ++c) z[c] = b[c];
    for (int i = 0; i < d; ++i)
      for (int c = 0; c < k; ++c) z[c] += x[i] * w[i * k + c];
    return z;
  }
  const int h = hidden_;
  const double* w1 = params_.data();
  const double* b1 = w1 + static_cast<std::size_t>(d) * h;
  const double* w2 = b1 + h;
  const double* b2 = w2 + static_cast<std::size_t>(h) * k;
  std::vector<double> a(b1, b1 + h);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < h; ++j) a[j] += x[i] * w1[i * h + j];
  for (auto& v : a) v = std::tanh(v);
  for (int c = 0; c < k; ++c) z[c] = b2[c];
  for (int j = 0; j < h; ++j)
    for (int c = 0; c < k; ++c) z[c] += a[j] * w2[j * k + c];
  return z;
}

void ClassifierModel::accumulate_gradient(std::span<const double> features, std::span<const double> dlogits,
                                          double scale, std::span<double> grad) const {
  if (grad.size() != params_.size()) throw Error(ErrorKind::InvalidInput, "gradient buffer has the wrong size");
  const auto x = standardizer_.apply(features);
  const int k = num_classes_;
  const int d = input_dim_;
  if (hidden_ == 0) {
    double* gw = grad.data();
    double* gb = gw + static_cast<std::size_t>(d) * k;
    for (int i = 0; i < d; ++i)
      for (int c = 0; c < k; ++c) gw[i * k + c] += scale * x[i] * dlogits[c];
    for (int c = 0; c < k; ++c) gb[c] += scale * dlogits[c];
    return;
  }
  const int h = hidden_;
  const double* w1 = params_.data();
  const double* b1 = w1 + static_cast<std::size_t>(d) * h;
  const double* w2 = b1 + h;
  std::vector<double> a(b1, b1 + h);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < h; ++j) a[j] += x[i] * w1[i * h + j];
  for (auto& v : a) v = std::tanh(v);

  double* gw1 = grad.data();
  double* gb1 = gw1 + static_cast<std::size_t>(d) * h;
  double* gw2 = gb1 + h;
  double* gb2 = gw2 + static_cast<std::size_t>(h) * k;
  std::vector<double> da(h, 0.0);
  for (int j = 0; j < h; ++j)
    for (int c = 0; c < k; ++c) {
      gw2[j * k + c] += scale * a[j] * dlogits[c];
      da[j] += w2[j * k + c] * dlogits[c];
    }
  for (int c = 0; c < k; ++c) gb2[c] += scale * dlogits[c];
  for (int j = 0; j < h; ++j) {
    const double dpre = da[j] * (1.0 - a[j] * a[j]);
    gb1[j] += scale * dpre;
    for (int i = 0; i < d; ++i) gw1[i * h + j] += scale * x[i] * dpre;
  }
}

int ClassifierModel::predict(std::span<const double> features) const {
  const auto z = logits(features);
  return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

std::vector<int> predict_all(const ClassifierModel& model, std::span<const std::vector<double>> features, Exec exec) {
  std::vector<int> out(features.size());
  for_each_index(exec, features.size(), [&](std::size_t i) { out[i] = model.predict(features[i]); });
  return out;
}

nlohmann::ordered_json model_to_json(const ClassifierModel& m, const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["D"] = m.input_dim();
  j["K"] = m.num_classes();
  j["hidden"] = m.hidden();
  j["channel_order"] = m.channel_order();
  j["feature_mean"] = m.standardizer().mean;
  j["feature_scale"] = m.standardizer().scale;
  j["params"] = std::vector<double>(m.params().begin(), m.params().end());
  j["config_hash"] = config_hash;
  return j;
}

ClassifierModel model_from_json(const nlohmann::ordered_json& j, std::string* config_hash) {
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion)
      throw Error(ErrorKind::DataIntegrity, "unsupported checkpoint schema version");
    ClassifierModel m(j.at("D").get<int>(), j.at("K").get<int>(), j.at("hidden").get<int>());
    m.channel_order() = j.at("channel_order").get<std::vector<std::string>>();
    m.standardizer().mean = j.at("feature_mean").get<std::vector<double>>();
    m.standardizer().scale = j.at("feature_scale").get<std::vector<double>>();
    const auto params = j.at("params").get<std::vector<double>>();
    if (params.size() != m.params().size() || m.standardizer().mean.size() != static_cast<std::size_t>(m.input_dim()) ||
        m.standardizer().scale.size() != static_cast<std::size_t>(m.input_dim()))
      throw Error(ErrorKind::DataIntegrity, "checkpoint parameter sizes do not match its dimensions");
    std::copy(params.begin(), params.end(), m.params().begin());
    if (config_hash) *config_hash = j.at("config_hash").get<std::string>();
    return m;
  } catch (const nlohmann::ordered_json::exception& e) {
    throw Error(ErrorKind::DataIntegrity, std::string("malformed checkpoint: ") + e.what());
  }
}

}  // namespace relcurr
