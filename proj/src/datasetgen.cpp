#include "relcurr/datasetgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "relcurr/errors.hpp"
#include "relcurr/rng.hpp"

namespace relcurr {

namespace {
constexpr std::uint64_t kLabelStream = 0x6c6162;
constexpr std::uint64_t kSampleStream = 0x736d70;
constexpr std::uint64_t kNoiseStream = 0x6e6f69;
}  // namespace

std::vector<ChannelModel> default_channels() {
  return {
      {"gaze_offset", 1.0, -0.2},
      {"eye_openness", 0.6, 0.08},
      {"posture_lean", 0.0, 0.15},
      {"distraction_rate", 0.4, -0.1},
  };
}

void GeneratorConfig::validate() const {
  if (num_classes < 2) throw Error(ErrorKind::InvalidConfig, "num_classes must be >= 2");
  if (n_samples < num_classes) throw Error(ErrorKind::InvalidConfig, "n_samples must be >= num_classes");
  if (length < 8) throw Error(ErrorKind::InvalidConfig, "sequence length must be >= 8");
  if (channels.empty()) throw Error(ErrorKind::InvalidConfig, "at least one channel is required");
  for (const auto& c : channels)
    if (c.name.empty() || !std::isfinite(c.slope) || c.slope == 0.0 || !std::isfinite(c.center))
      throw Error(ErrorKind::InvalidConfig, "channel '" + c.name + "' needs a name and a finite non-zero slope");
  if (!(class_separation > 0.0) || !std::isfinite(class_separation))
    throw Error(ErrorKind::InvalidConfig, "class_separation must be positive");
  if (!(observation_noise >= 0.0) || !(subject_variability >= 0.0))
    throw Error(ErrorKind::InvalidConfig, "observation_noise and subject_variability must be >= 0");
  if (!class_proportions.empty()) {
    if (static_cast<int>(class_proportions.size()) != num_classes)
      throw Error(ErrorKind::InvalidConfig, "class_proportions needs one entry per class");
    for (double p : class_proportions)
      if (!(p > 0.0)) throw Error(ErrorKind::InvalidConfig, "class proportions must be positive");
  }
}

double GeneratorConfig::level_coordinate(const ChannelModel& c, double value) const {
  if (!(class_separation > 0.0))
    throw Error(ErrorKind::InvalidConfig, "level coordinates need class_separation > 0");
  const double mid = 0.5 * (num_classes - 1);
  return (value - c.center) / (c.slope * class_separation) + mid;
}

const char* to_string(NoiseModel m) { return m == NoiseModel::Uniform ? "uniform" : "adjacent_only"; }

NoiseModel noise_model_from_string(const std::string& s) {
  if (s == "adjacent_only") return NoiseModel::AdjacentOnly;
  if (s == "uniform") return NoiseModel::Uniform;
  throw Error(ErrorKind::InvalidConfig, "unknown noise model '" + s + "'");
}

void NoiseConfig::validate() const {
  if (!(flip_rate >= 0.0 && flip_rate <= 1.0)) throw Error(ErrorKind::InvalidConfig, "flip_rate must lie in [0, 1]");
}

namespace {

std::vector<int> assign_levels(const GeneratorConfig& cfg) {
  std::vector<int> levels;
  levels.reserve(cfg.n_samples);
  if (cfg.class_proportions.empty()) {
    for (int i = 0; i < cfg.n_samples; ++i) levels.push_back(i % cfg.num_classes);
  } else {
    // Largest-remainder apportionment of n_samples to the requested shares.
    const double total = std::accumulate(cfg.class_proportions.begin(), cfg.class_proportions.end(), 0.0);
    std::vector<int> counts(cfg.num_classes);
    std::vector<std::pair<double, int>> remainders;
    int assigned = 0;
    for (int c = 0; c < cfg.num_classes; ++c) {
      const double exact = cfg.n_samples * cfg.class_proportions[c] / total;
      counts[c] = static_cast<int>(std::floor(exact));
      assigned += counts[c];
      remainders.push_back({exact - counts[c], c});
    }
    std::stable_sort(remainders.begin(), remainders.end(), [](auto a, auto b) { return a.first > b.first; });
    for (int k = 0; assigned < cfg.n_samples; ++k, ++assigned) ++counts[remainders[k].second];
    for (int c = 0; c < cfg.num_classes; ++c) levels.insert(levels.end(), counts[c], c);
  }
  auto rng = derive_rng(cfg.seed, {kLabelStream});
  std::shuffle(levels.begin(), levels.end(), rng);
  return levels;
}

}  // namespace

Dataset generate(const GeneratorConfig& cfg, Exec exec) {
  cfg.validate();
  const auto levels = assign_levels(cfg);
  const double mid = 0.5 * (cfg.num_classes - 1);

  Dataset ds;
  ds.num_classes = cfg.num_classes;
  ds.samples.resize(cfg.n_samples);
  const int width = static_cast<int>(std::to_string(cfg.n_samples - 1).size());
  for_each_index(exec, ds.samples.size(), [&](std::size_t i) {
    auto rng = derive_rng(cfg.seed, {kSampleStream, i});
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int level = levels[i];
    const double offset = cfg.subject_variability * gauss(rng);
    const double engagement = cfg.class_separation * (level - mid) + offset;

    auto& s = ds.samples[i];
    std::string idx = std::to_string(i);
    s.id = cfg.id_prefix + std::string(width - idx.size(), '0') + idx;
    s.label = level;
    s.signal.channels.reserve(cfg.channels.size());
    for (const auto& c : cfg.channels) {
      Channel ch{c.name, std::vector<double>(cfg.length)};
      const double base = c.center + c.slope * engagement;
      const double sd = std::abs(c.slope) * cfg.observation_noise;
      for (auto& v : ch.values) v = base + sd * gauss(rng);
      s.signal.channels.push_back(std::move(ch));
    }
    s.latent = LatentInfo{level, {{"engagement", engagement}, {"subject_offset", offset}}};
  });
  return ds;
}

NoisyDataset inject_label_noise(const Dataset& dataset, const NoiseConfig& nc) {
  nc.validate();
  NoisyDataset out{dataset, dataset.labels()};
  const int k = dataset.num_classes;
  for (std::size_t i = 0; i < out.dataset.samples.size(); ++i) {
    auto rng = derive_rng(nc.seed, {kNoiseStream, i});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const bool flip = unit(rng) < nc.flip_rate;
    if (!flip) continue;
    const int y = out.pristine[i];
    int next = y;
    if (nc.model == NoiseModel::AdjacentOnly) {
      std::vector<int> neighbours;
      if (y > 0) neighbours.push_back(y - 1);
      if (y + 1 < k) neighbours.push_back(y + 1);
      next = neighbours[std::uniform_int_distribution<std::size_t>(0, neighbours.size() - 1)(rng)];
    } else {
      const int r = std::uniform_int_distribution<int>(0, k - 2)(rng);
      next = r >= y ? r + 1 : r;
    }
    out.dataset.samples[i].label = next;
  }
  return out;
}

Dataset blind(const Dataset& dataset) {
  Dataset out = dataset;
  for (auto& s : out.samples) s.latent.reset();
  return out;
}

}  // namespace relcurr
