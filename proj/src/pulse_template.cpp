#include "uwbsim/pulse_template.hpp"

#include "uwbsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace uwbsim {

PulseTemplate::PulseTemplate(std::vector<int> taps, bool symmetric)
    : taps_(std::move(taps)), symmetric_(symmetric) {
  if (taps_.empty()) {
    throw ParameterError("template: no taps");
  }
  for (int c : taps_) {
    if (c < 0 || c > kMaxCode) {
      throw ParameterError("template: code " + std::to_string(c) + " outside [0, 15]");
    }
  }
  if (std::all_of(taps_.begin(), taps_.end(), [](int c) { return c == 0; })) {
    throw ParameterError("template: all codes are zero");
  }
  if (symmetric_ && !std::equal(taps_.begin(), taps_.end(), taps_.rbegin())) {
    throw ParameterError("template: marked symmetric but taps are not a palindrome");
  }
}

PulseTemplate PulseTemplate::from_taps(std::vector<int> taps) {
  const bool sym = std::equal(taps.begin(), taps.end(), taps.rbegin());
  return PulseTemplate(std::move(taps), sym);
}

double PulseTemplate::code_energy() const {
  double acc = 0.0;
  for (int c : taps_) {
    acc += static_cast<double>(c) * c;
  }
  return acc;
}

double PulseTemplate::mean_square_level() const {
  return code_energy() / (static_cast<double>(kMaxCode * kMaxCode) * static_cast<double>(taps_.size()));
}

PulseTemplate PulseTemplate::reversed() const {
  return PulseTemplate(std::vector<int>(taps_.rbegin(), taps_.rend()), symmetric_);
}

std::string PulseTemplate::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < taps_.size(); ++i) {
    os << (i ? "," : "") << taps_[i];
  }
  return os.str();
}

PulseTemplate PulseTemplate::parse(const std::string& text) {
  std::vector<int> taps;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) {
        throw std::invalid_argument(item);
      }
      taps.push_back(v);
    } catch (const std::logic_error&) {
      throw ParameterError("template: cannot parse tap '" + item + "'");
    }
  }
  return from_taps(std::move(taps));
}

PulseTemplate quantize_template(std::size_t n_taps, TriangleShape shape) {
  if (n_taps < 2 || n_taps > 32) {
    throw ParameterError("quantize_template: n_taps must be in [2, 32]");
  }
  const double apex = shape.rise_fraction;
  if (!(apex > 0.0 && apex < 1.0)) {
    throw ParameterError("quantize_template: rise_fraction must lie in (0, 1)");
  }
  std::vector<int> taps(n_taps);
  for (std::size_t k = 0; k < n_taps; ++k) {
    const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(n_taps);
    const double env = t <= apex ? t / apex : (1.0 - t) / (1.0 - apex);
    // Round half up; the small bias absorbs representation error at exact halves.
    taps[k] = static_cast<int>(std::floor(PulseTemplate::kMaxCode * env + 0.5 + 1e-9));
  }
  const bool symmetric = apex == 0.5;
  if (symmetric) {
    // Guard against asymmetric rounding of mirrored taps.
    for (std::size_t k = 0; k < n_taps / 2; ++k) {
      taps[n_taps - 1 - k] = taps[k];
    }
  }
  return PulseTemplate(std::move(taps), symmetric);
}

} // namespace uwbsim
