#pragma once

#include "uwbsim/compliance.hpp"
#include "uwbsim/pulse_template.hpp"
#include "uwbsim/spectrum.hpp"

#include <cstddef>
#include <optional>

namespace uwbsim {

/// Exact continuous-time spectrum of one unit-amplitude staircase pulse
/// (code 15 -> 1 V) on a uniform grid, in the pulse_train_psd convention:
/// S(f) = 2 |P(f)|^2 / pulse_width, P including both the +fc and -fc images.
PsdEstimate template_psd(const PulseTemplate& tmpl, double pulse_width_s, double carrier_hz,
                         double f_lo_hz, double f_hi_hz, std::size_t n_points);

/// Default analysis window: carrier +/- 4 / pulse_width, 32 points per 1 / pulse_width.
PsdEstimate template_psd(const PulseTemplate& tmpl, double pulse_width_s, double carrier_hz);

struct TemplateSearchResult {
  std::optional<PulseTemplate> best;  // empty when no template meets the bandwidth bound
  std::optional<SidelobeMetrics> metrics;
  std::size_t evaluated = 0;
  bool exhaustive = false;
};

/// Searches 4-bit templates for the lowest peak sidelobe whose -10 dB main
/// lobe is no wider than max_mainlobe_bw_hz. Ties go to the larger code
/// energy, then the lexicographically smaller tap vector. Exhaustive when the
/// free taps number at most 5 (symmetric n <= 10, asymmetric n <= 5);
/// otherwise coordinate descent from the quantized triangle.
TemplateSearchResult optimize_template(std::size_t n_taps, double max_mainlobe_bw_hz, bool symmetric,
                                       double pulse_width_s = 2e-9, double carrier_hz = 4.5e9);

} // namespace uwbsim
