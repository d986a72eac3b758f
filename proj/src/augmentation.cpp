#include "relcurr/augmentation.hpp"

#include <cmath>
#include <random>
#include <unordered_map>

#include "relcurr/errors.hpp"

namespace relcurr {

void AugmentConfig::validate() const {
  if (n_segments < 1) throw Error(ErrorKind::InvalidConfig, "n_segments must be >= 1");
  if (per_class_count && *per_class_count < 0) throw Error(ErrorKind::InvalidConfig, "per_class_count must be >= 0");
}

std::vector<double> sampling_probabilities(std::span<const double> weights, int class_id) {
  if (weights.empty())
    throw Error(ErrorKind::EmptyClass, "class " + std::to_string(class_id) + " has no samples to draw from");
  double total = 0.0;
  for (double w : weights) {
    if (!(std::isfinite(w) && w > 0.0)) throw Error(ErrorKind::InvalidInput, "sampling weights must be positive");
    total += w;
  }
  std::vector<double> p;
  p.reserve(weights.size());
  for (double w : weights) p.push_back(w / total);
  return p;
}

std::size_t usable_length(std::size_t length, int n_segments) {
  if (n_segments < 1) throw Error(ErrorKind::InvalidConfig, "n_segments must be >= 1");
  const auto n = static_cast<std::size_t>(n_segments);
  return n * (length / n);
}

std::vector<Signal> segment_signal(const Signal& x, int n_segments) {
  x.validate();
  if (n_segments < 1 || static_cast<std::size_t>(n_segments) > x.length())
    throw Error(ErrorKind::InvalidConfig, "cannot split a length-" + std::to_string(x.length()) + " signal into " +
                                              std::to_string(n_segments) + " segments");
  const std::size_t seg = x.length() / static_cast<std::size_t>(n_segments);
  std::vector<Signal> out(n_segments);
  for (int j = 0; j < n_segments; ++j) {
    const auto begin = static_cast<std::ptrdiff_t>(j * seg);
    for (const auto& c : x.channels)
      out[j].channels.push_back({c.name, {c.values.begin() + begin, c.values.begin() + begin + seg}});
  }
  return out;
}

std::pair<Signal, double> recombine(std::span<const WeightedSignal> class_samples, std::span<const double> probs,
                                    int n_segments, Rng& rng) {
  if (class_samples.empty()) throw Error(ErrorKind::EmptyClass, "cannot recombine an empty class");
  if (probs.size() != class_samples.size())
    throw Error(ErrorKind::InvalidInput, "probabilities do not match the class sample list");
  const auto& first = *class_samples.front().signal;
  const std::size_t length = first.length();
  for (const auto& s : class_samples)
    if (s.signal->length() != length || s.signal->channels.size() != first.channels.size())
      throw Error(ErrorKind::InvalidInput, "class samples differ in shape");
  if (n_segments < 1 || static_cast<std::size_t>(n_segments) > length)
    throw Error(ErrorKind::InvalidConfig, "segment count exceeds signal length");

  const std::size_t seg = length / static_cast<std::size_t>(n_segments);
  std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());

  Signal out;
  for (const auto& c : first.channels) {
    out.channels.push_back({c.name, {}});
    out.channels.back().values.reserve(seg * n_segments);
  }
  double weight_sum = 0.0;
  for (int j = 0; j < n_segments; ++j) {
    const std::size_t i = class_samples.size() == 1 ? 0 : pick(rng);
    weight_sum += class_samples[i].weight;
    const auto begin = static_cast<std::ptrdiff_t>(j * seg);
    for (std::size_t ch = 0; ch < out.channels.size(); ++ch) {
      const auto& src = class_samples[i].signal->channels[ch].values;
      out.channels[ch].values.insert(out.channels[ch].values.end(), src.begin() + begin,
                                     src.begin() + begin + static_cast<std::ptrdiff_t>(seg));
    }
  }
  return {std::move(out), weight_sum / n_segments};
}

AugmentedDataset augment_dataset(const Dataset& dataset, std::span<const ReliabilityRecord> records,
                                 const AugmentConfig& cfg, Exec exec) {
  cfg.validate();
  std::unordered_map<std::string, const ReliabilityRecord*> by_id;
  for (const auto& r : records) by_id.emplace(r.sample_id, &r);

  AugmentedDataset out;
  out.original_count = dataset.size();
  out.samples.reserve(dataset.size());
  std::vector<std::vector<WeightedSignal>> per_class(dataset.num_classes);
  for (const auto& s : dataset.samples) {
    auto it = by_id.find(s.id);
    if (it == by_id.end()) throw Error(ErrorKind::DataIntegrity, "no reliability record for sample '" + s.id + "'");
    out.samples.push_back({s, it->second->weight, false});
  }
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& s = dataset.samples[i];
    if (s.label < 0 || s.label >= dataset.num_classes)
      throw Error(ErrorKind::DataIntegrity, "sample '" + s.id + "' label outside class range");
    per_class[s.label].push_back({&s.signal, out.samples[i].weight});
  }

  struct Job {
    int cls;
    int ordinal;
  };
  std::vector<Job> jobs;
  std::vector<std::vector<double>> probs(dataset.num_classes);
  for (int c = 0; c < dataset.num_classes; ++c) {
    const int count = cfg.per_class_count.value_or(static_cast<int>(per_class[c].size()));
    if (count == 0) continue;
    if (per_class[c].empty()) {
      out.warnings.push_back("class " + std::to_string(c) + " absent from dataset; no augmented samples");
      continue;
    }
    std::vector<double> w;
    for (const auto& ws : per_class[c]) w.push_back(ws.weight);
    probs[c] = sampling_probabilities(w, c);
    for (int k = 0; k < count; ++k) jobs.push_back({c, k});
  }

  std::vector<WeightedSample> augmented(jobs.size());
  for_each_index(exec, jobs.size(), [&](std::size_t j) {
    const auto [c, k] = jobs[j];
    auto rng = derive_rng(cfg.seed, {0x617567ULL, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(k)});
    auto [signal, weight] = recombine(per_class[c], probs[c], cfg.n_segments, rng);
    auto& dst = augmented[j];
    dst.sample.id = "aug-c" + std::to_string(c) + "-" + std::to_string(k);
    dst.sample.label = c;
    dst.sample.signal = std::move(signal);
    dst.weight = weight;
    dst.augmented = true;
  });
  for (auto& a : augmented) out.samples.push_back(std::move(a));
  return out;
}

}  // namespace relcurr
