#include "uwbsim/waveform.hpp"

#include "uwbsim/errors.hpp"

#include <cmath>
#include <string>

namespace uwbsim {

void require_nyquist(double sample_rate_hz, double highest_freq_hz, const char* what) {
  if (sample_rate_hz < 4.0 * highest_freq_hz) {
    throw ParameterError(std::string(what) + ": sample rate " + std::to_string(sample_rate_hz) +
                         " Hz is below 4x the highest frequency " + std::to_string(highest_freq_hz) +
                         " Hz");
  }
}

Waveform::Waveform(std::vector<double> samples, double sample_rate_hz, std::optional<double> carrier_hz)
    : samples_(std::move(samples)), sample_rate_(sample_rate_hz) {
  if (samples_.empty()) {
    throw ParameterError("waveform: empty sample sequence");
  }
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) {
    throw ParameterError("waveform: sample rate must be positive");
  }
  if (carrier_hz) {
    require_nyquist(sample_rate_, *carrier_hz, "waveform");
  }
}

Waveform Waveform::zeros(std::size_t n, double sample_rate_hz) {
  return Waveform(std::vector<double>(n, 0.0), sample_rate_hz);
}

Waveform Waveform::scaled(double gain) const {
  std::vector<double> out(samples_);
  for (auto& x : out) {
    x *= gain;
  }
  return Waveform(std::move(out), sample_rate_);
}

double mean_power(const Waveform& wave) {
  double acc = 0.0;
  for (double x : wave.samples()) {
    acc += x * x;
  }
  return acc / static_cast<double>(wave.size());
}

double energy(std::span<const double> samples, double sample_rate_hz) {
  double acc = 0.0;
  for (double x : samples) {
    acc += x * x;
  }
  return acc / sample_rate_hz;
}

double pulse_on_power(const Waveform& wave) {
  double acc = 0.0;
  std::size_t n = 0;
  for (double x : wave.samples()) {
    if (x != 0.0) {
      acc += x * x;
      ++n;
    }
  }
  return n == 0 ? 0.0 : acc / static_cast<double>(n);
}

} // namespace uwbsim
