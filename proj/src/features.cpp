#include "relcurr/features.hpp"

#include <algorithm>
#include <cmath>

#include "relcurr/errors.hpp"

namespace relcurr {

namespace {

void append_stats(const Channel& c, std::vector<double>& out) {
  const auto& v = c.values;
  if (v.empty()) throw Error(ErrorKind::InvalidInput, "channel '" + c.name + "' is empty");
  const double n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / n;
  double sq = 0.0;
  for (double x : v) sq += (x - mean) * (x - mean);
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  double diff = 0.0;
  for (std::size_t t = 1; t < v.size(); ++t) diff += std::abs(v[t] - v[t - 1]);
  out.push_back(mean);
  out.push_back(std::sqrt(sq / n));
  out.push_back(*lo);
  out.push_back(*hi);
  out.push_back(v.size() > 1 ? diff / static_cast<double>(v.size() - 1) : 0.0);
}

}  // namespace

std::vector<double> extract_features(const Signal& signal) {
  std::vector<double> out;
  out.reserve(signal.channels.size() * kStatsPerChannel);
  for (const auto& c : signal.channels) append_stats(c, out);
  return out;
}

std::vector<double> extract_features(const Signal& signal, std::span<const std::string> channel_order) {
  std::vector<double> out;
  out.reserve(channel_order.size() * kStatsPerChannel);
  for (const auto& name : channel_order) {
    const auto* c = signal.find(name);
    if (!c) throw Error(ErrorKind::DataIntegrity, "signal lacks channel '" + name + "'");
    append_stats(*c, out);
  }
  return out;
}

std::vector<std::string> feature_names(std::span<const std::string> channel_order) {
  std::vector<std::string> out;
  for (const auto& c : channel_order)
    for (const char* stat : {"mean", "std", "min", "max", "mean_abs_diff"}) out.push_back(c + "." + stat);
  return out;
}

std::vector<std::string> channel_names(const Signal& signal) {
  std::vector<std::string> out;
  for (const auto& c : signal.channels) out.push_back(c.name);
  return out;
}

std::vector<std::vector<double>> extract_features_all(std::span<const LabeledSample> samples,
                                                      std::span<const std::string> channel_order, Exec exec) {
  std::vector<std::vector<double>> out(samples.size());
  for_each_index(exec, samples.size(),
                 [&](std::size_t i) { out[i] = extract_features(samples[i].signal, channel_order); });
  return out;
}

}  // namespace relcurr
