#include "relcurr/types.hpp"

#include <cmath>

#include "relcurr/errors.hpp"

namespace relcurr {

OrdinalLabel OrdinalLabel::make(int value, int num_classes) {
  if (num_classes < 2)
    throw Error(ErrorKind::InvalidInput, "number of classes must be >= 2, got " + std::to_string(num_classes));
  if (value < 0 || value >= num_classes)
    throw Error(ErrorKind::InvalidInput, "label " + std::to_string(value) + " outside [0, " +
                                             std::to_string(num_classes - 1) + "]");
  return OrdinalLabel{value, num_classes};
}

const Channel* Signal::find(const std::string& name) const {
  for (const auto& c : channels)
    if (c.name == name) return &c;
  return nullptr;
}

void Signal::validate() const {
  if (channels.empty()) throw Error(ErrorKind::InvalidInput, "signal has no channels");
  const auto len = channels.front().values.size();
  for (const auto& c : channels) {
    if (c.values.empty()) throw Error(ErrorKind::InvalidInput, "channel '" + c.name + "' is empty");
    if (c.values.size() != len)
      throw Error(ErrorKind::InvalidInput, "channel '" + c.name + "' length differs from the first channel");
    for (double v : c.values)
      if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "channel '" + c.name + "' has a non-finite value");
  }
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.label);
  return out;
}

std::vector<std::string> Dataset::ids() const {
  std::vector<std::string> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.id);
  return out;
}

}  // namespace relcurr
