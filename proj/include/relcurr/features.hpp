#pragma once

#include <span>
#include <string>
#include <vector>

#include "relcurr/parallel.hpp"
#include "relcurr/types.hpp"

namespace relcurr {

/// Per channel, in this order: mean, population standard deviation, min,
/// max, mean absolute first difference (0 for a single value).
inline constexpr int kStatsPerChannel = 5;

std::vector<double> extract_features(const Signal& signal);

/// Features with channels taken in the given order; throws DataIntegrity if
/// a channel is missing.
std::vector<double> extract_features(const Signal& signal, std::span<const std::string> channel_order);

std::vector<std::string> feature_names(std::span<const std::string> channel_order);

std::vector<std::string> channel_names(const Signal& signal);

/// Feature rows for every sample. Serial and parallel paths agree bit for bit.
std::vector<std::vector<double>> extract_features_all(std::span<const LabeledSample> samples,
                                                      std::span<const std::string> channel_order,
                                                      Exec exec = Exec::Parallel);

}  // namespace relcurr
