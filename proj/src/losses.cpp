#include "relcurr/losses.hpp"

#include <algorithm>
#include <cmath>

#include "relcurr/errors.hpp"

namespace relcurr {

namespace {

void check_probs(std::span<const double> p) {
  for (double v : p)
    if (!std::isfinite(v) || v < 0.0) throw Error(ErrorKind::InvalidInput, "probabilities must be finite and >= 0");
}

}  // namespace

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw Error(ErrorKind::InvalidInput, "softmax of empty logits");
  for (double z : logits)
    if (!std::isfinite(z)) throw Error(ErrorKind::InvalidInput, "softmax input is not finite");
  const double shift = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - shift);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

double kl_soft_loss(std::span<const double> soft, std::span<const double> probs) {
  if (soft.size() != probs.size()) throw Error(ErrorKind::InvalidInput, "soft label and prediction differ in length");
  check_probs(probs);
  double loss = 0.0;
  for (std::size_t i = 0; i < soft.size(); ++i) {
    if (soft[i] <= 0.0) continue;
    if (probs[i] == 0.0)
      throw Error(ErrorKind::NumericDomain, "zero predicted probability where the target has mass");
    loss += soft[i] * (std::log(soft[i]) - std::log(std::max(probs[i], kProbFloor)));
  }
  // Rounding can leave tiny negatives when p == s.
  return std::max(loss, 0.0);
}

double cross_entropy_loss(std::span<const double> probs, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= probs.size())
    throw Error(ErrorKind::InvalidInput, "label outside prediction range");
  check_probs(probs);
  if (probs[label] == 0.0) throw Error(ErrorKind::NumericDomain, "zero predicted probability for the true class");
  return -std::log(std::max(probs[label], kProbFloor));
}

double per_sample_loss(const ReliabilityRecord& record, std::span<const double> probs) {
  if (is_soft(record.target) != (record.reliability == Reliability::Ambiguous))
    throw Error(ErrorKind::DataIntegrity, "record '" + record.sample_id + "' target disagrees with reliability class");
  if (const auto* soft = std::get_if<SoftLabel>(&record.target)) return kl_soft_loss(soft->probs, probs);
  return cross_entropy_loss(probs, std::get<OrdinalLabel>(record.target).value);
}

double batch_loss(std::span<const ReliabilityRecord> records, std::span<const std::vector<double>> probs) {
  if (records.empty()) throw Error(ErrorKind::InvalidInput, "empty batch");
  if (records.size() != probs.size()) throw Error(ErrorKind::InvalidInput, "batch records and predictions differ in length");
  double total = 0.0;
  for (std::size_t j = 0; j < records.size(); ++j) total += records[j].weight * per_sample_loss(records[j], probs[j]);
  return total / static_cast<double>(records.size());
}

std::vector<double> loss_gradient_wrt_logits(const ReliabilityRecord& record, std::span<const double> logits) {
  auto grad = softmax(logits);
  const auto target = target_distribution(record.target, static_cast<int>(logits.size()));
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] -= target[i];
  return grad;
}

double max_gradient_error(const std::function<double(std::span<const double>)>& f, std::span<const double> x,
                          std::span<const double> analytic, double eps) {
  if (x.size() != analytic.size()) throw Error(ErrorKind::InvalidInput, "gradient length does not match point");
  std::vector<double> probe(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + eps;
    const double up = f(probe);
    probe[i] = saved - eps;
    const double down = f(probe);
    probe[i] = saved;
    const double fd = (up - down) / (2.0 * eps);
    worst = std::max(worst, std::abs(fd - analytic[i]) / std::max(1.0, std::abs(analytic[i])));
  }
  return worst;
}

double finite_difference_check(const ReliabilityRecord& record, std::span<const double> logits, double eps) {
  if (!(eps >= 1e-8 && eps <= 1e-3)) throw Error(ErrorKind::InvalidInput, "eps must lie in [1e-8, 1e-3]");
  const auto analytic = loss_gradient_wrt_logits(record, logits);
  return max_gradient_error([&](std::span<const double> z) { return per_sample_loss(record, softmax(z)); }, logits,
                            analytic, eps);
}

}  // namespace relcurr
