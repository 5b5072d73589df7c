#pragma once

#include "uwbsim/waveform.hpp"

namespace uwbsim {

/// Magnitude response of the band-pass used throughout the simulator:
/// a maximally flat (Butterworth-shaped) response in the offset |f| - f_center,
///   |H(f)| = 1 / sqrt(1 + ((|f| - f_center) / (bw_3db / 2))^(2 * order)),
/// so the -3 dB points sit at f_center +/- bw_3db / 2 for every order.
double bandpass_magnitude(double f_hz, double f_center_hz, double bw_3db_hz, int order);

/// Zero-phase band-pass applied in the frequency domain (linear, same length,
/// no group delay). Edges are padded so circular wrap-around stays outside the
/// returned samples.
Waveform bandpass_filter(const Waveform& wave, double f_center_hz, double bw_3db_hz, int order);

/// Integral of |H(f)|^2 from 0 to fs/2, on the grid the filter is applied on.
double bandpass_noise_bandwidth(double sample_rate_hz, double f_center_hz, double bw_3db_hz, int order);

} // namespace uwbsim
