#include <doctest.h>

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "property.hpp"

using namespace relcurr;

namespace {

struct LabelCase {
  int k, y, p;
  double alpha;
};

LabelCase gen_label(std::mt19937_64& rng) {
  LabelCase c;
  c.k = 2 + static_cast<int>(rng() % 7);
  c.y = static_cast<int>(rng() % c.k);
  c.p = static_cast<int>(rng() % c.k);
  c.alpha = std::uniform_real_distribution<double>(1e-6, 1 - 1e-6)(rng);
  return c;
}

struct LogitCase {
  LabelCase label;
  std::vector<double> z;
};

LogitCase gen_logits(std::mt19937_64& rng) {
  LogitCase c{gen_label(rng), {}};
  c.label.alpha = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
  c.z.resize(c.label.k);
  for (auto& v : c.z) v = std::uniform_real_distribution<double>(-3, 3)(rng);
  return c;
}

std::string fail(const std::string& what, const LabelCase& c) {
  std::ostringstream s;
  s << what << " at k=" << c.k << " y=" << c.y << " p=" << c.p << " alpha=" << c.alpha;
  return s.str();
}

}  // namespace

TEST_CASE("soft labels are valid distributions, soft exactly at distance one") {
  auto r = prop::for_all<LabelCase>(10000, 1, gen_label, [](const LabelCase& c) -> std::string {
    const auto t = make_soft_label(OrdinalLabel::make(c.y, c.k), OrdinalLabel::make(c.p, c.k), c.alpha, c.k);
    const auto d = target_distribution(t, c.k);
    double sum = 0;
    int nonzero = 0;
    for (double v : d) {
      if (v < 0 || v > 1) return fail("entry outside [0,1]", c);
      sum += v;
      nonzero += v != 0;
    }
    if (std::fabs(sum - 1) > 1e-9) return fail("does not sum to one", c);
    if (nonzero > 2) return fail("more than two nonzero entries", c);
    if (is_soft(t) != (std::abs(c.y - c.p) == 1)) return fail("soft/hard mismatch", c);
    if (d != oracle::soft_label(c.y, c.p, c.alpha, c.k)) return fail("differs from oracle", c);
    return {};
  });
  CHECK_MESSAGE(r.ok, r.message);
}

TEST_CASE("soft labels approach one-hot as alpha approaches one") {
  const double alpha = 1 - 1e-6;
  for (int k = 2; k <= 8; ++k)
    for (int y = 0; y < k; ++y)
      for (int p : {y - 1, y + 1}) {
        if (p < 0 || p >= k) continue;
        const auto d = target_distribution(make_soft_label(OrdinalLabel::make(y, k), OrdinalLabel::make(p, k), alpha, k), k);
        for (int i = 0; i < k; ++i) CHECK(std::fabs(d[i] - (i == y ? 1.0 : 0.0)) < 1e-5);
      }
}

TEST_CASE("KL divergence is non-negative and vanishes only at the target") {
  auto r = prop::for_all<LogitCase>(1000, 2, gen_logits, [](const LogitCase& c) -> std::string {
    const auto& l = c.label;
    const auto s = target_distribution(
        make_soft_label(OrdinalLabel::make(l.y, l.k), OrdinalLabel::make(l.p, l.k), l.alpha, l.k), l.k);
    const auto p = softmax(c.z);
    const double v = kl_soft_loss(s, p);
    if (v < -1e-15) return fail("negative KL", l);
    if (std::fabs(v - oracle::kl(s, p)) > 1e-12) return fail("differs from oracle", l);
    if (std::fabs(kl_soft_loss(s, s)) > 1e-9) return fail("KL(s,s) nonzero", l);
    bool same = true;
    for (std::size_t i = 0; i < s.size(); ++i) same = same && std::fabs(s[i] - p[i]) <= 1e-9;
    if (!same && v <= 0) return fail("zero KL for a different distribution", l);
    return {};
  });
  CHECK_MESSAGE(r.ok, r.message);
}

TEST_CASE("logit gradients match central differences") {
  auto r = prop::for_all<LogitCase>(100, 3, gen_logits, [](const LogitCase& c) -> std::string {
    const auto& l = c.label;
    const auto rec = make_record("r", OrdinalLabel::make(l.y, l.k), OrdinalLabel::make(l.p, l.k), {l.alpha, {}});
    const double err = finite_difference_check(rec, c.z, 1e-5);
    if (!(err < 1e-4)) return fail("relative error " + std::to_string(err), l);
    return {};
  });
  CHECK_MESSAGE(r.ok, r.message);
}

TEST_CASE("sampling probabilities are scale invariant") {
  auto r = prop::for_all<std::vector<double>>(
      1000, 4,
      [](std::mt19937_64& rng) {
        std::vector<double> w(1 + rng() % 20);
        for (auto& v : w) v = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
        return w;
      },
      [](const std::vector<double>& w) -> std::string {
        const auto p = sampling_probabilities(w);
        double sum = 0;
        for (double v : p) sum += v;
        if (std::fabs(sum - 1) > 1e-12) return "does not sum to one";
        for (double scale : {0.001, 3.0, 1e6}) {
          std::vector<double> ws;
          for (double v : w) ws.push_back(v * scale);
          const auto q = sampling_probabilities(ws);
          for (std::size_t i = 0; i < p.size(); ++i)
            if (std::fabs(p[i] - q[i]) > 1e-12) return "changes under scaling";
        }
        return {};
      });
  CHECK_MESSAGE(r.ok, r.message);
}

TEST_CASE("per-slot selection passes a chi-square test") {
  const int n_src = 4, n_seg = 4, draws = 10000;
  std::vector<Signal> sources;
  for (int i = 0; i < n_src; ++i) sources.push_back(fixture::signal({std::vector<double>(8, double(i))}));
  const std::vector<double> weights{0.25, 0.5, 0.75, 1.0};
  std::vector<WeightedSignal> cls;
  for (int i = 0; i < n_src; ++i) cls.push_back({&sources[i], weights[i]});
  const auto probs = sampling_probabilities(weights);
  Rng rng(99);
  std::vector<std::vector<long>> counts(n_seg, std::vector<long>(n_src, 0));
  for (int t = 0; t < draws; ++t) {
    auto [s, w] = recombine(cls, probs, n_seg, rng);
    for (int slot = 0; slot < n_seg; ++slot) ++counts[slot][static_cast<int>(s.channels[0].values[2 * slot])];
  }
  for (int slot = 0; slot < n_seg; ++slot) {
    const double p = oracle::chi_square_p(counts[slot], probs);
    CHECK_MESSAGE(p > 0.001, "slot " << slot << " p=" << p);
  }
}

TEST_CASE("augmented weight lies within the source range") {
  auto r = prop::for_all<std::vector<double>>(
      300, 5,
      [](std::mt19937_64& rng) {
        std::vector<double> w(1 + rng() % 6);
        for (auto& v : w) v = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
        return w;
      },
      [](const std::vector<double>& w) -> std::string {
        std::vector<Signal> src;
        for (std::size_t i = 0; i < w.size(); ++i) src.push_back(fixture::signal({std::vector<double>(12, double(i))}));
        std::vector<WeightedSignal> cls;
        for (std::size_t i = 0; i < w.size(); ++i) cls.push_back({&src[i], w[i]});
        const auto probs = sampling_probabilities(w);
        Rng rng(w.size());
        const double lo = *std::min_element(w.begin(), w.end()), hi = *std::max_element(w.begin(), w.end());
        for (int n : {1, 2, 3, 4, 6}) {
          auto [s, wa] = recombine(cls, probs, n, rng);
          if (wa < lo - 1e-15 || wa > hi + 1e-15) return "weight outside source range";
        }
        return {};
      });
  CHECK_MESSAGE(r.ok, r.message);
}

TEST_CASE("stages form a disjoint cover for random fixtures") {
  struct Case {
    int k;
    std::vector<int> labels, preds;
  };
  auto r = prop::for_all<Case>(
      200, 6,
      [](std::mt19937_64& rng) {
        Case c;
        c.k = 2 + static_cast<int>(rng() % 4);
        const std::size_t n = rng() % 40;
        for (std::size_t i = 0; i < n; ++i) {
          c.labels.push_back(static_cast<int>(rng() % c.k));
          c.preds.push_back(static_cast<int>(rng() % c.k));
        }
        return c;
      },
      [](const Case& c) -> std::string {
        const auto ds = fixture::dataset(c.labels, c.k, 2);
        const auto recs = build_reliability_records(ds, fixture::annotations(ds, c.preds), {});
        std::set<std::string> s1, s2;
        for (const auto& r : recs) {
          (r.stage == Stage::Stage1 ? s1 : s2).insert(r.sample_id);
          const int d = std::abs(r.gt.value - r.pred.value);
          if ((r.stage == Stage::Stage2) != (d == 1)) return "stage does not follow discrepancy";
          if (is_soft(r.target) != (d == 1)) return "target kind does not follow discrepancy";
        }
        if (s1.size() + s2.size() != c.labels.size()) return "not a cover";
        for (const auto& id : s1)
          if (s2.count(id)) return "not disjoint";
        return {};
      });
  CHECK_MESSAGE(r.ok, r.message);
}
