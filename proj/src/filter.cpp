#include "uwbsim/filter.hpp"

#include "uwbsim/errors.hpp"
#include "uwbsim/fft.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace uwbsim {
namespace {

void check_band(double fs, double fc, double bw, int order) {
  if (!(bw > 0.0) || !(fc - bw / 2.0 > 0.0)) {
    throw ParameterError("bandpass: lower band edge must be above 0 Hz");
  }
  if (!(fc + bw / 2.0 < fs / 2.0)) {
    throw ParameterError("bandpass: upper band edge " + std::to_string(fc + bw / 2.0) +
                         " Hz exceeds Nyquist " + std::to_string(fs / 2.0) + " Hz");
  }
  if (order < 1 || order > 16) {
    throw ParameterError("bandpass: order must be in [1, 16]");
  }
}

} // namespace

double bandpass_magnitude(double f_hz, double f_center_hz, double bw_3db_hz, int order) {
  const double x = (std::abs(f_hz) - f_center_hz) / (bw_3db_hz / 2.0);
  return 1.0 / std::sqrt(1.0 + std::pow(x * x, order));
}

Waveform bandpass_filter(const Waveform& wave, double f_center_hz, double bw_3db_hz, int order) {
  const double fs = wave.sample_rate();
  check_band(fs, f_center_hz, bw_3db_hz, order);

  const auto pad = static_cast<std::size_t>(std::ceil(64.0 * fs / bw_3db_hz));
  const std::size_t n = fast_fft_size(wave.size() + pad);
  RealFft fwd(n);
  const auto bins = fwd.forward(wave.samples());
  std::vector<std::complex<double>> shaped(bins.begin(), bins.end());
  for (std::size_t k = 0; k < shaped.size(); ++k) {
    const double f = static_cast<double>(k) * fs / static_cast<double>(n);
    shaped[k] *= bandpass_magnitude(f, f_center_hz, bw_3db_hz, order);
  }
  RealIfft inv(n);
  const auto y = inv.inverse(shaped);
  return Waveform(std::vector<double>(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(wave.size())), fs);
}

double bandpass_noise_bandwidth(double sample_rate_hz, double f_center_hz, double bw_3db_hz, int order) {
  check_band(sample_rate_hz, f_center_hz, bw_3db_hz, order);
  // Fine fixed grid; the response is smooth on the scale of bw / 1000.
  const double df = bw_3db_hz / 1000.0;
  double acc = 0.0;
  for (double f = df / 2.0; f < sample_rate_hz / 2.0; f += df) {
    const double h = bandpass_magnitude(f, f_center_hz, bw_3db_hz, order);
    acc += h * h * df;
  }
  return acc;
}

} // namespace uwbsim
