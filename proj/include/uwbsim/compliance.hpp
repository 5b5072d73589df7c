#pragma once

#include "uwbsim/spectrum.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace uwbsim {

struct MaskSegment {
  double f_lo_hz;
  double f_hi_hz;  // may be +infinity for the top segment
  double limit_dbm_per_mhz;
};

using SpectralMask = std::vector<MaskSegment>;

struct MaskViolation {
  double freq_hz;
  double excess_db;
};

struct MaskReport {
  bool pass = true;
  double worst_margin_db = 0.0;
  double worst_freq_hz = 0.0;
  std::vector<MaskViolation> violations;
};

struct ToneReport {
  std::vector<double> tone_freqs_hz;
  std::vector<double> excess_db;

  [[nodiscard]] double max_excess_db() const;
  [[nodiscard]] double min_excess_db() const;
};

struct SidelobeMetrics {
  double mainlobe_bw_10db_hz;
  double peak_sidelobe_dbc;
  double peak_freq_hz;      // main-lobe peak
  double sidelobe_freq_hz;  // highest sidelobe
};

/// Margin reported for 1 MHz bins carrying no emission at all.
inline constexpr double kNoEmissionMarginDb = 1000.0;
inline constexpr double kMaskRbwHz = 1e6;
inline constexpr std::size_t kDefaultContinuumWindow = 41;

/// FCC Part 15 indoor UWB average-EIRP mask above 960 MHz.
SpectralMask fcc_indoor_mask();

/// Limit of the segment containing f, if any.
std::optional<double> mask_limit_at(const SpectralMask& mask, double f_hz);

/// Throws ParameterError unless segments are ascending, non-overlapping and f_lo < f_hi.
void validate_mask(const SpectralMask& mask);

/// Averages the PSD into rbw_target bins aligned to 0 Hz, then compares each
/// bin whose centre falls in a mask segment against that segment's limit.
MaskReport check_mask(const PsdEstimate& psd, const SpectralMask& mask, double rbw_target_hz = kMaskRbwHz);

/// Probes harmonics k * prr (k >= 1) inside the PSD span. With `center_hz`
/// the n_harmonics multiples nearest the centre are probed, otherwise the
/// first n_harmonics. Excess is the probed bin minus the median of the
/// surrounding window (centre bin excluded).
ToneReport detect_tones(const PsdEstimate& psd, double prr_hz, std::size_t n_harmonics,
                        std::size_t continuum_window_bins = kDefaultContinuumWindow,
                        std::optional<double> center_hz = std::nullopt);

/// Main lobe around the spectral peak: -10 dB width from interpolated
/// crossings, and the highest level beyond the first nulls on either side
/// relative to the peak. Nulls are found as the running minimum outside the
/// -10 dB points, ended once the PSD climbs 1 dB above it.
SidelobeMetrics sidelobe_metrics(const PsdEstimate& psd, double f_center_hz);

} // namespace uwbsim
