#include "uwbsim/spectrum.hpp"

#include "uwbsim/errors.hpp"
#include "uwbsim/fft.hpp"
#include "uwbsim/units.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace uwbsim {

Window parse_window(std::string_view name) {
  if (name == "hann") {
    return Window::hann;
  }
  if (name == "rect") {
    return Window::rect;
  }
  throw ParameterError("unknown window '" + std::string(name) + "' (expected hann|rect)");
}

std::string_view to_string(Window w) { return w == Window::hann ? "hann" : "rect"; }

double PsdEstimate::w_per_hz(std::size_t i) const { return dbm_per_mhz_to_w_per_hz(dbm_per_mhz[i]); }

double PsdEstimate::band_power_w(double f_lo_hz, double f_hi_hz) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
    if (freqs_hz[i] >= f_lo_hz && freqs_hz[i] <= f_hi_hz) {
      acc += w_per_hz(i);
    }
  }
  return acc * rbw_hz;
}

double PsdEstimate::total_power_w() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
    acc += w_per_hz(i);
  }
  return acc * rbw_hz;
}

std::size_t PsdEstimate::nearest_bin(double f_hz) const {
  if (freqs_hz.empty()) {
    throw ParameterError("psd: empty estimate");
  }
  const double step = freqs_hz.size() > 1 ? freqs_hz[1] - freqs_hz[0] : 1.0;
  const double idx = std::round((f_hz - freqs_hz.front()) / step);
  return static_cast<std::size_t>(std::clamp(idx, 0.0, static_cast<double>(freqs_hz.size() - 1)));
}

void PsdEstimate::validate() const {
  if (freqs_hz.size() != dbm_per_mhz.size()) {
    throw ParameterError("psd: freqs and psd lengths differ");
  }
  if (freqs_hz.empty()) {
    throw ParameterError("psd: empty estimate");
  }
  for (std::size_t i = 1; i < freqs_hz.size(); ++i) {
    if (!(freqs_hz[i] > freqs_hz[i - 1])) {
      throw ParameterError("psd: frequencies not strictly ascending");
    }
  }
  if (!(rbw_hz > 0.0)) {
    throw ParameterError("psd: rbw must be positive");
  }
}

PsdEstimate PsdEstimate::shifted(double db) const {
  PsdEstimate out = *this;
  for (auto& v : out.dbm_per_mhz) {
    if (v > kPsdFloorDbmPerMhz) {
      v += db;
    }
  }
  return out;
}

PsdEstimate PsdEstimate::band(double f_lo_hz, double f_hi_hz) const {
  PsdEstimate out;
  out.rbw_hz = rbw_hz;
  for (std::size_t i = 0; i < size(); ++i) {
    if (freqs_hz[i] >= f_lo_hz && freqs_hz[i] <= f_hi_hz) {
      out.freqs_hz.push_back(freqs_hz[i]);
      out.dbm_per_mhz.push_back(dbm_per_mhz[i]);
    }
  }
  if (out.freqs_hz.empty()) {
    throw ParameterError("psd band: no bins inside the requested range");
  }
  return out;
}

namespace {

PsdEstimate from_linear(const std::vector<double>& w_per_hz, double sample_rate, std::size_t n) {
  PsdEstimate est;
  est.rbw_hz = sample_rate / static_cast<double>(n);
  est.freqs_hz.resize(w_per_hz.size());
  est.dbm_per_mhz.resize(w_per_hz.size());
  for (std::size_t k = 0; k < w_per_hz.size(); ++k) {
    est.freqs_hz[k] = static_cast<double>(k) * est.rbw_hz;
    est.dbm_per_mhz[k] = w_per_hz_to_dbm_per_mhz(w_per_hz[k]);
  }
  return est;
}

// Bins other than DC and (for even n) Nyquist carry both spectral halves.
double one_sided_factor(std::size_t k, std::size_t n) {
  return (k == 0 || (n % 2 == 0 && k == n / 2)) ? 1.0 : 2.0;
}

} // namespace

PsdEstimate psd_welch(const Waveform& wave, std::size_t segment_len, double overlap_fraction,
                      Window window) {
  if (segment_len < 8) {
    throw ParameterError("psd_welch: segment_len must be >= 8");
  }
  if (segment_len > wave.size()) {
    throw ParameterError("psd_welch: segment_len " + std::to_string(segment_len) +
                         " exceeds waveform length " + std::to_string(wave.size()));
  }
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw ParameterError("psd_welch: overlap_fraction must lie in [0, 1)");
  }

  std::vector<double> win(segment_len, 1.0);
  if (window == Window::hann) {
    for (std::size_t i = 0; i < segment_len; ++i) {
      win[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(segment_len));
    }
  }
  double win_power = 0.0;
  for (double w : win) {
    win_power += w * w;
  }

  const auto step = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(segment_len) * (1.0 - overlap_fraction))));
  const std::size_t n_seg = (wave.size() - segment_len) / step + 1;

  RealFft fft(segment_len);
  std::vector<double> seg(segment_len);
  std::vector<double> acc(segment_len / 2 + 1, 0.0);
  const auto x = wave.samples();
  for (std::size_t s = 0; s < n_seg; ++s) {
    const std::size_t off = s * step;
    for (std::size_t i = 0; i < segment_len; ++i) {
      seg[i] = x[off + i] * win[i];
    }
    const auto bins = fft.forward(seg);
    for (std::size_t k = 0; k < acc.size(); ++k) {
      acc[k] += std::norm(bins[k]);
    }
  }

  const double norm = 1.0 / (wave.sample_rate() * win_power * static_cast<double>(n_seg));
  for (std::size_t k = 0; k < acc.size(); ++k) {
    acc[k] *= norm * one_sided_factor(k, segment_len);
  }
  return from_linear(acc, wave.sample_rate(), segment_len);
}

PsdEstimate pulse_train_psd(const Waveform& pulse, std::size_t fft_len) {
  if (fft_len < pulse.size()) {
    throw ParameterError("pulse_train_psd: fft_len shorter than the pulse");
  }
  RealFft fft(fft_len);
  const auto bins = fft.forward(pulse.samples());
  const double fs = pulse.sample_rate();
  const double duration = pulse.duration();
  std::vector<double> lin(bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k) {
    // |P(f)|^2 with P(f) = X[k] / fs.
    lin[k] = one_sided_factor(k, fft_len) * std::norm(bins[k]) / (fs * fs * duration);
  }
  return from_linear(lin, fs, fft_len);
}

} // namespace uwbsim
