#include <doctest.h>

#include "oracles.hpp"

using namespace relcurr;

namespace {

/// Checks accumulate_gradient against central differences of the loss
/// w * L(softmax(logits(x))) over every parameter.
double param_gradient_error(ClassifierModel& m, const std::vector<double>& x, const ReliabilityRecord& rec) {
  const int k = m.num_classes();
  std::vector<double> grad(m.params().size(), 0.0);
  const auto p = softmax(m.logits(x));
  const auto t = target_distribution(rec.target, k);
  std::vector<double> dz(k);
  for (int c = 0; c < k; ++c) dz[c] = p[c] - t[c];
  m.accumulate_gradient(x, dz, rec.weight, grad);

  auto params = m.params();
  std::vector<double> start(params.begin(), params.end());
  auto loss = [&](std::span<const double> v) {
    std::copy(v.begin(), v.end(), params.begin());
    return rec.weight * per_sample_loss(rec, softmax(m.logits(x)));
  };
  const double err = max_gradient_error(loss, start, grad, 1e-6);
  std::copy(start.begin(), start.end(), params.begin());
  return err;
}

ClassifierModel random_model(int d, int k, int hidden, std::uint64_t seed) {
  ClassifierModel m(d, k, hidden, seed);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 0.5);
  for (auto& v : m.params()) v = nd(rng);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> r(d);
    for (auto& v : r) v = nd(rng) * 3 + 1;
    rows.push_back(r);
  }
  m.standardizer() = Standardizer::fit(rows);
  return m;
}

}  // namespace

TEST_CASE("linear model starts neutral") {
  ClassifierModel m(3, 4);
  CHECK(m.params().size() == 3 * 4 + 4);
  auto z = m.logits(std::vector<double>{1, 2, 3});
  for (double v : z) CHECK(v == 0.0);
  CHECK(m.predict(std::vector<double>{1, 2, 3}) == 0);
}

TEST_CASE("hidden layer shape") {
  ClassifierModel m(5, 3, 7, 1);
  CHECK(m.params().size() == 5 * 7 + 7 + 7 * 3 + 3);
}

TEST_CASE("standardizer") {
  std::vector<std::vector<double>> rows{{1, 5}, {3, 5}};
  auto s = Standardizer::fit(rows);
  CHECK(s.mean == std::vector<double>{2, 5});
  CHECK(s.scale == std::vector<double>{1, 1});
  auto z = s.apply(std::vector<double>{3, 7});
  CHECK(z[0] == 1.0);
  CHECK(z[1] == 2.0);
}

TEST_CASE("parameter gradients match finite differences") {
  std::mt19937_64 rng(21);
  for (int hidden : {0, 6}) {
    for (int t = 0; t < 20; ++t) {
      auto m = random_model(4, 4, hidden, 100 + t);
      std::vector<double> x(4);
      for (auto& v : x) v = std::normal_distribution<double>(1, 3)(rng);
      const int y = static_cast<int>(rng() % 4), p = static_cast<int>(rng() % 4);
      auto rec = make_record("r", OrdinalLabel::make(y, 4), OrdinalLabel::make(p, 4), {});
      CHECK(param_gradient_error(m, x, rec) < 1e-4);
    }
  }
}

TEST_CASE("checkpoint round trip") {
  auto m = random_model(6, 3, 4, 9);
  m.channel_order() = {"a", "b"};
  const auto j = model_to_json(m, "abc");
  std::string hash;
  const auto back = model_from_json(j, &hash);
  CHECK(hash == "abc");
  CHECK(model_to_json(back, "abc").dump() == j.dump());
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  CHECK(back.logits(x) == m.logits(x));
  auto bad = j;
  bad["params"].erase(0);
  CHECK_ERROR_KIND(model_from_json(bad), ErrorKind::DataIntegrity);
}

TEST_CASE("batch prediction is thread independent") {
  auto m = random_model(5, 4, 3, 2);
  std::mt19937_64 rng(1);
  std::vector<std::vector<double>> rows(500, std::vector<double>(5));
  for (auto& r : rows)
    for (auto& v : r) v = std::normal_distribution<double>(0, 2)(rng);
  CHECK(predict_all(m, rows, Exec::Serial) == predict_all(m, rows, Exec::Parallel));
}
