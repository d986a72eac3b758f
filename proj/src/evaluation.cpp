#include "relcurr/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <unordered_map>
#include <unordered_set>

#include "relcurr/errors.hpp"

namespace relcurr {

namespace {

void check_pair(std::span<const int> preds, std::span<const int> labels) {
  if (preds.empty() || labels.empty()) throw Error(ErrorKind::InvalidInput, "metrics need at least one prediction");
  if (preds.size() != labels.size()) throw Error(ErrorKind::InvalidInput, "predictions and labels differ in length");
}

}  // namespace

double accuracy(std::span<const int> preds, std::span<const int> labels) { return tolerance_accuracy(preds, labels, 0); }

double tolerance_accuracy(std::span<const int> preds, std::span<const int> labels, int tol) {
  check_pair(preds, labels);
  if (tol < 0) throw Error(ErrorKind::InvalidInput, "tolerance must be >= 0");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) hits += std::abs(preds[i] - labels[i]) <= tol ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

std::vector<std::vector<int>> confusion_matrix(std::span<const int> preds, std::span<const int> labels,
                                               int num_classes) {
  check_pair(preds, labels);
  std::vector<std::vector<int>> m(num_classes, std::vector<int>(num_classes, 0));
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes || preds[i] < 0 || preds[i] >= num_classes)
      throw Error(ErrorKind::InvalidInput, "label or prediction outside class range");
    ++m[labels[i]][preds[i]];
  }
  return m;
}

double weighted_f1(std::span<const int> preds, std::span<const int> labels, int num_classes) {
  const auto m = confusion_matrix(preds, labels, num_classes);
  double total = 0.0;
  for (int c = 0; c < num_classes; ++c) {
    int tp = m[c][c], support = 0, predicted = 0;
    for (int j = 0; j < num_classes; ++j) {
      support += m[c][j];
      predicted += m[j][c];
    }
    if (support == 0) continue;
    const double p = predicted ? static_cast<double>(tp) / predicted : 0.0;
    const double r = static_cast<double>(tp) / support;
    const double f1 = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    total += f1 * support;
  }
  return total / static_cast<double>(preds.size());
}

MetricBundle compute_metrics(std::span<const int> preds, std::span<const int> labels, int num_classes) {
  MetricBundle b;
  b.n = preds.size();
  b.accuracy = accuracy(preds, labels);
  b.weighted_f1 = weighted_f1(preds, labels, num_classes);
  b.tolerance_accuracy = tolerance_accuracy(preds, labels, 1);
  b.confusion = confusion_matrix(preds, labels, num_classes);
  return b;
}

EvalReport evaluate_subsets(std::span<const std::string> ids, std::span<const int> preds, std::span<const int> labels,
                            const PartitionResult& partition, int num_classes) {
  if (ids.size() != preds.size() || ids.size() != labels.size())
    throw Error(ErrorKind::DataIntegrity, "ids, predictions and labels differ in length");
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (!pos.emplace(ids[i], i).second) throw Error(ErrorKind::DataIntegrity, "duplicate id '" + ids[i] + "'");

  std::unordered_set<std::string> seen;
  auto cell = [&](const std::vector<std::string>& members) -> std::optional<MetricBundle> {
    std::vector<int> p, l;
    for (const auto& id : members) {
      auto it = pos.find(id);
      if (it == pos.end()) throw Error(ErrorKind::DataIntegrity, "split names unknown sample '" + id + "'");
      if (!seen.insert(id).second) throw Error(ErrorKind::DataIntegrity, "sample '" + id + "' is in both subsets");
      p.push_back(preds[it->second]);
      l.push_back(labels[it->second]);
    }
    if (p.empty()) return std::nullopt;
    return compute_metrics(p, l, num_classes);
  };

  EvalReport r;
  r.num_classes = num_classes;
  r.full = compute_metrics(preds, labels, num_classes);
  r.accepted = cell(partition.accepted);
  r.rejected = cell(partition.rejected);
  if (seen.size() != ids.size()) throw Error(ErrorKind::DataIntegrity, "split does not cover every evaluated sample");
  return r;
}

nlohmann::ordered_json metrics_to_json(const std::optional<MetricBundle>& m) {
  nlohmann::ordered_json j;
  if (!m) {
    j["status"] = "undefined";
    j["n"] = 0;
    return j;
  }
  j["status"] = "ok";
  j["n"] = m->n;
  j["accuracy"] = m->accuracy;
  j["weighted_f1"] = m->weighted_f1;
  j["tolerance_accuracy"] = m->tolerance_accuracy;
  j["confusion"] = m->confusion;
  return j;
}

std::optional<MetricBundle> metrics_from_json(const nlohmann::ordered_json& j) {
  if (j.at("status").get<std::string>() == "undefined") return std::nullopt;
  MetricBundle m;
  m.n = j.at("n").get<std::size_t>();
  m.accuracy = j.at("accuracy").get<double>();
  m.weighted_f1 = j.at("weighted_f1").get<double>();
  m.tolerance_accuracy = j.at("tolerance_accuracy").get<double>();
  m.confusion = j.at("confusion").get<std::vector<std::vector<int>>>();
  return m;
}

nlohmann::ordered_json report_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["config_hash"] = r.config_hash;
  j["label_source"] = r.label_source;
  j["num_classes"] = r.num_classes;
  j["full"] = metrics_to_json(r.full);
  j["accepted"] = metrics_to_json(r.accepted);
  j["rejected"] = metrics_to_json(r.rejected);
  return j;
}

EvalReport report_from_json(const nlohmann::ordered_json& j) {
  try {
    EvalReport r;
    r.config_hash = j.at("config_hash").get<std::string>();
    r.label_source = j.at("label_source").get<std::string>();
    r.num_classes = j.at("num_classes").get<int>();
    auto full = metrics_from_json(j.at("full"));
    if (!full) throw Error(ErrorKind::DataIntegrity, "report has no full-set metrics");
    r.full = *full;
    r.accepted = metrics_from_json(j.at("accepted"));
    r.rejected = metrics_from_json(j.at("rejected"));
    return r;
  } catch (const nlohmann::ordered_json::exception& e) {
    throw Error(ErrorKind::DataIntegrity, std::string("malformed report: ") + e.what());
  }
}

std::string render_table(const EvalReport& r) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "labels: %s\n", r.label_source.c_str());
  out += line;
  std::snprintf(line, sizeof line, "%-10s %7s %10s %10s %10s %9s\n", "subset", "n", "acc [%]", "+-1 acc[%]",
                "wF1", "vs full");
  out += line;
  auto row = [&](const char* name, const std::optional<MetricBundle>& m, bool is_full) {
    if (!m) {
      std::snprintf(line, sizeof line, "%-10s %7d %10s %10s %10s %9s\n", name, 0, "undef", "undef", "undef", "");
    } else if (is_full) {
      std::snprintf(line, sizeof line, "%-10s %7zu %10.2f %10.2f %10.4f %9s\n", name, m->n, 100.0 * m->accuracy,
                    100.0 * m->tolerance_accuracy, m->weighted_f1, "");
    } else {
      std::snprintf(line, sizeof line, "%-10s %7zu %10.2f %10.2f %10.4f %+9.2f\n", name, m->n, 100.0 * m->accuracy,
                    100.0 * m->tolerance_accuracy, m->weighted_f1, 100.0 * (m->accuracy - r.full.accuracy));
    }
    out += line;
  };
  row("full", r.full, true);
  row("rejected", r.rejected, false);
  row("accepted", r.accepted, false);
  return out;
}

}  // namespace relcurr
