#pragma once

#include "uwbsim/waveform.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace uwbsim {

enum class Window { hann, rect };

Window parse_window(std::string_view name);
std::string_view to_string(Window w);

/// One-sided power spectral density on a uniform ascending grid, in dBm/MHz.
struct PsdEstimate {
  std::vector<double> freqs_hz;
  std::vector<double> dbm_per_mhz;
  double rbw_hz = 0.0;

  [[nodiscard]] std::size_t size() const { return freqs_hz.size(); }
  [[nodiscard]] double w_per_hz(std::size_t i) const;

  /// Sum of density x rbw over bins whose centre lies in [f_lo, f_hi].
  [[nodiscard]] double band_power_w(double f_lo_hz, double f_hi_hz) const;
  [[nodiscard]] double total_power_w() const;

  /// Index of the bin nearest to f (clamped to the grid).
  [[nodiscard]] std::size_t nearest_bin(double f_hz) const;

  /// Throws ParameterError when lengths differ, the grid is not strictly
  /// ascending, or rbw is not positive.
  void validate() const;

  /// Returns a copy shifted by `db` in every bin.
  [[nodiscard]] PsdEstimate shifted(double db) const;

  /// Bins whose centre lies in [f_lo, f_hi]. Throws ParameterError if none do.
  [[nodiscard]] PsdEstimate band(double f_lo_hz, double f_hi_hz) const;
};

/// Welch-averaged periodogram. Segments advance by round(segment_len * (1 - overlap)).
/// rbw = sample_rate / segment_len.
PsdEstimate psd_welch(const Waveform& wave, std::size_t segment_len, double overlap_fraction,
                      Window window);

/// Spectrum of an isolated pulse, expressed as the PSD of a random-polarity
/// train repeating the pulse back to back: S(f) = 2 |P(f)|^2 / T with T the
/// pulse duration, so the integral equals the pulse's mean power. The pulse
/// is zero-padded to fft_len.
PsdEstimate pulse_train_psd(const Waveform& pulse, std::size_t fft_len);

} // namespace uwbsim
