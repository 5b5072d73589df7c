#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace uwbsim {

/// Two-anchor description of a PLL's single-sideband phase noise L(f):
/// flat in-band up to a corner, then -20 dB/decade.
struct PhaseNoiseSpec {
  double l_inband_dbc_hz = -80.0;
  double f_inband_ref_hz = 1e6;
  double l_outband_dbc_hz = -101.0;
  double f_outband_ref_hz = 100e6;
  /// Unset: derived from the anchors and the jitter target by calibrate().
  std::optional<double> corner_hz;
  double integ_lo_hz = 1e4;
  double integ_hi_hz = 1e8;
  double target_rms_jitter_s = 18.9e-12;
  double ref_carrier_hz = 5.6e9;

  void validate() const;
};

/// Resolved piecewise profile used for synthesis.
struct PhaseNoiseProfile {
  double level_dbc_hz;  // flat in-band L(f)
  double corner_hz;

  /// Single-sideband L(f) in dBc/Hz.
  [[nodiscard]] double ssb_dbc_hz(double offset_hz) const;
  /// One-sided phase PSD S_phi(f) = 2 L(f), rad^2/Hz.
  [[nodiscard]] double phase_psd(double offset_hz) const;
  /// Closed-form integral of S_phi over [lo, hi], square-rooted (DSB rms phase).
  [[nodiscard]] double rms_phase_rad(double lo_hz, double hi_hz) const;
  [[nodiscard]] double rms_jitter_s(double lo_hz, double hi_hz, double carrier_hz) const;
};

/// Maximum shift applied to the anchor levels while calibrating, in dB.
inline constexpr double kMaxAnchorAdjustDb = 2.0;

/// Corner from the two anchors (slope -20 dB/dec), then a common level offset
/// (bounded by kMaxAnchorAdjustDb) so the DSB rms jitter over
/// [integ_lo, integ_hi] at ref_carrier matches the target. An explicit
/// corner_hz is kept and only the level is adjusted.
PhaseNoiseProfile calibrate(const PhaseNoiseSpec& spec);

/// Gaussian phase process phi_n sampled at `rate_hz`, spectrally shaped to
/// the profile (circular synthesis over a fast FFT length >= n).
std::vector<double> phase_noise_process(std::size_t n, double rate_hz, const PhaseNoiseProfile& profile,
                                        std::uint64_t seed);

/// Absolute carrier phase 2*pi*fc*t + phi_n(t) on the sample grid. phi_n is
/// synthesised at <= 1 GS/s and linearly interpolated; it is identically zero
/// when `spec` is empty.
std::vector<double> synth_carrier_phase(double duration_s, double carrier_hz,
                                        const std::optional<PhaseNoiseSpec>& spec, std::uint64_t seed,
                                        double sample_rate_hz);

/// phi_n alone on the sample grid (no carrier ramp). Empty spec gives zeros.
std::vector<double> phase_noise_on_grid(std::size_t n, double sample_rate_hz,
                                        const std::optional<PhaseNoiseSpec>& spec, std::uint64_t seed);

} // namespace uwbsim
