#pragma once

// Softmax head, KL soft loss, cross-entropy hard loss, reliability-weighted
// batch loss, and their analytic gradients with respect to the logits.

#include <functional>
#include <span>
#include <vector>

#include "relcurr/label_model.hpp"

namespace relcurr {

/// Probabilities below this floor are clamped before taking logs.
inline constexpr double kProbFloor = 1e-12;

/// Max-shifted softmax. Throws InvalidInput on non-finite logits.
std::vector<double> softmax(std::span<const double> logits);

/// sum_i s_i ln(s_i / p_i) with 0 ln 0 = 0.
double kl_soft_loss(std::span<const double> soft, std::span<const double> probs);

/// -ln p_y.
double cross_entropy_loss(std::span<const double> probs, int label);

/// KL for soft targets, cross-entropy for hard ones. Does not apply the weight.
double per_sample_loss(const ReliabilityRecord& record, std::span<const double> probs);

/// (1/N) sum_j w_j L_j.
double batch_loss(std::span<const ReliabilityRecord> records, std::span<const std::vector<double>> probs);

/// d L / d z = p - t for both branches (t is the soft or one-hot target).
/// Unweighted; batch code multiplies by w_j / N.
std::vector<double> loss_gradient_wrt_logits(const ReliabilityRecord& record, std::span<const double> logits);

/// Central-difference check of `analytic` against f at x. Returns
/// max_i |fd_i - analytic_i| / max(1, |analytic_i|).
double max_gradient_error(const std::function<double(std::span<const double>)>& f, std::span<const double> x,
                          std::span<const double> analytic, double eps);

/// Gradient check of per_sample_loss(record, softmax(z)) at z.
/// eps must lie in [1e-8, 1e-3].
double finite_difference_check(const ReliabilityRecord& record, std::span<const double> logits, double eps);

}  // namespace relcurr
