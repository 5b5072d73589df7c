#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace uwbsim {

/// Uniformly sampled real passband signal. Amplitudes are volts across 1 ohm,
/// so mean square equals watts.
class Waveform {
public:
  /// Throws ParameterError when the sample set is empty, the rate is not
  /// positive, or a declared carrier violates sample_rate >= 4 * carrier.
  Waveform(std::vector<double> samples, double sample_rate_hz,
           std::optional<double> carrier_hz = std::nullopt);

  static Waveform zeros(std::size_t n, double sample_rate_hz);

  [[nodiscard]] std::span<const double> samples() const { return samples_; }
  [[nodiscard]] std::vector<double>& mutable_samples() { return samples_; }
  [[nodiscard]] double sample_rate() const { return sample_rate_; }
  [[nodiscard]] std::size_t size() const { return samples_.size(); }
  [[nodiscard]] double duration() const { return static_cast<double>(samples_.size()) / sample_rate_; }
  [[nodiscard]] double operator[](std::size_t i) const { return samples_[i]; }

  [[nodiscard]] Waveform scaled(double gain) const;

private:
  std::vector<double> samples_;
  double sample_rate_;
};

/// Throws ParameterError unless sample_rate >= 4 * highest_freq_hz.
void require_nyquist(double sample_rate_hz, double highest_freq_hz, const char* what);

double mean_power(const Waveform& wave);

/// Sum of squares divided by the sample rate (joules across 1 ohm).
double energy(std::span<const double> samples, double sample_rate_hz);

/// Mean power over the non-silent samples (OOK-off stretches are exact zeros).
/// Returns 0 for an all-zero waveform.
double pulse_on_power(const Waveform& wave);

} // namespace uwbsim
