#include <doctest.h>

#include "oracles.hpp"

using namespace relcurr;

TEST_CASE("balanced generation") {
  GeneratorConfig g;
  g.n_samples = 400;
  const auto ds = generate(g);
  int counts[4] = {};
  for (const auto& s : ds.samples) {
    ++counts[s.label];
    CHECK(s.latent->level == s.label);
    CHECK(s.signal.channels.size() == 4);
    CHECK(s.signal.length() == 128);
  }
  for (int c : counts) CHECK(c == 100);
  CHECK(ds.samples.front().id == "s000");
  CHECK(ds.samples.back().id == "s399");
}

TEST_CASE("class proportions") {
  GeneratorConfig g;
  g.n_samples = 1000;
  g.class_proportions = {4, 2, 2, 2};
  const auto ds = generate(g);
  int counts[4] = {};
  for (const auto& s : ds.samples) ++counts[s.label];
  CHECK(counts[0] == 400);
  CHECK(counts[1] == 200);
}

TEST_CASE("generation is deterministic and thread independent") {
  GeneratorConfig g;
  g.n_samples = 200;
  g.seed = 42;
  const auto a = generate(g, Exec::Serial);
  CHECK(a == generate(g, Exec::Parallel));
  CHECK(a == generate(g, Exec::Serial));
  g.seed = 43;
  CHECK_FALSE(a == generate(g));
}

TEST_CASE("noiseless data is separable by nearest centroid") {
  GeneratorConfig g;
  g.n_samples = 400;
  g.observation_noise = 0.0;
  g.subject_variability = 0.0;
  g.class_separation = 3.0;
  const auto ds = generate(g);
  const std::size_t nc = g.channels.size();
  std::vector<std::vector<double>> centroid(4, std::vector<double>(nc, 0.0));
  std::vector<int> n(4, 0);
  auto means = [&](const LabeledSample& s) {
    std::vector<double> m;
    for (const auto& ch : s.signal.channels) m.push_back(oracle::channel_stats(ch.values).mean);
    return m;
  };
  for (const auto& s : ds.samples) {
    auto m = means(s);
    for (std::size_t c = 0; c < nc; ++c) centroid[s.label][c] += m[c];
    ++n[s.label];
  }
  for (int k = 0; k < 4; ++k)
    for (auto& v : centroid[k]) v /= n[k];
  int correct = 0;
  for (const auto& s : ds.samples) {
    auto m = means(s);
    int best = 0;
    double best_d = 1e300;
    for (int k = 0; k < 4; ++k) {
      double d = 0;
      for (std::size_t c = 0; c < nc; ++c) d += (m[c] - centroid[k][c]) * (m[c] - centroid[k][c]);
      if (d < best_d) best_d = d, best = k;
    }
    correct += best == s.label;
  }
  CHECK(correct == 400);
}

TEST_CASE("noiseless channels are monotone in level") {
  GeneratorConfig g;
  g.n_samples = 8;
  g.observation_noise = 0.0;
  g.subject_variability = 0.0;
  const auto ds = generate(g);
  for (std::size_t c = 0; c < g.channels.size(); ++c) {
    std::vector<double> by_level(4);
    for (const auto& s : ds.samples) by_level[s.label] = s.signal.channels[c].values[0];
    for (int k = 1; k < 4; ++k) {
      if (g.channels[c].slope > 0) CHECK(by_level[k] > by_level[k - 1]);
      else CHECK(by_level[k] < by_level[k - 1]);
    }
    // level coordinate inverts the channel map exactly
    for (int k = 0; k < 4; ++k) CHECK(g.level_coordinate(g.channels[c], by_level[k]) == doctest::Approx(k));
  }
}

TEST_CASE("generator validation") {
  GeneratorConfig g;
  g.num_classes = 1;
  CHECK_ERROR_KIND(generate(g), ErrorKind::InvalidConfig);
  g = {};
  g.length = 2;
  CHECK_ERROR_KIND(generate(g), ErrorKind::InvalidConfig);
  g = {};
  g.class_separation = 0.0;
  CHECK_ERROR_KIND(g.validate(), ErrorKind::InvalidConfig);
  g = {};
  g.observation_noise = -1;
  CHECK_ERROR_KIND(g.validate(), ErrorKind::InvalidConfig);
  g = {};
  g.class_proportions = {1, 1};
  CHECK_ERROR_KIND(g.validate(), ErrorKind::InvalidConfig);
  g = {};
  g.channels[0].slope = 0;
  CHECK_ERROR_KIND(g.validate(), ErrorKind::InvalidConfig);
}

TEST_CASE("label noise") {
  GeneratorConfig g;
  g.n_samples = 2000;
  const auto ds = generate(g);

  NoiseConfig none;
  none.flip_rate = 0.0;
  auto clean = inject_label_noise(ds, none);
  CHECK(clean.dataset == ds);
  CHECK(clean.pristine == ds.labels());

  NoiseConfig nc;
  nc.flip_rate = 0.3;
  nc.seed = 8;
  auto noisy = inject_label_noise(ds, nc);
  int flipped = 0;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const int d = std::abs(noisy.dataset.samples[i].label - noisy.pristine[i]);
    CHECK(d <= 1);
    flipped += d != 0;
    CHECK(noisy.dataset.samples[i].signal == ds.samples[i].signal);
    CHECK(noisy.dataset.samples[i].latent->level == noisy.pristine[i]);
  }
  CHECK(std::abs(flipped - 600) <= 62);
  CHECK(noisy.pristine == ds.labels());
  CHECK(inject_label_noise(ds, nc).dataset == noisy.dataset);

  nc.flip_rate = 1.0;
  auto all = inject_label_noise(ds, nc);
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    if (ds.samples[i].label == 0) CHECK(all.dataset.samples[i].label == 1);
    if (ds.samples[i].label == 3) CHECK(all.dataset.samples[i].label == 2);
  }

  nc.model = NoiseModel::Uniform;
  auto uni = inject_label_noise(ds, nc);
  bool far = false;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    CHECK(uni.dataset.samples[i].label != ds.samples[i].label);
    far = far || std::abs(uni.dataset.samples[i].label - ds.samples[i].label) > 1;
  }
  CHECK(far);

  nc.flip_rate = 1.5;
  CHECK_ERROR_KIND(inject_label_noise(ds, nc), ErrorKind::InvalidConfig);
}

TEST_CASE("blind strips latent blocks") {
  GeneratorConfig g;
  g.n_samples = 10;
  const auto b = blind(generate(g));
  for (const auto& s : b.samples) CHECK_FALSE(s.latent.has_value());
}

TEST_CASE("noise model names") {
  CHECK(noise_model_from_string("adjacent_only") == NoiseModel::AdjacentOnly);
  CHECK(std::string(to_string(NoiseModel::Uniform)) == "uniform");
  CHECK_ERROR_KIND(noise_model_from_string("gaussian"), ErrorKind::InvalidConfig);
}
