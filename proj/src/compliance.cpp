#include "uwbsim/compliance.hpp"

#include "uwbsim/errors.hpp"
#include "uwbsim/units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace uwbsim {

double ToneReport::max_excess_db() const {
  return excess_db.empty() ? -std::numeric_limits<double>::infinity()
                           : *std::max_element(excess_db.begin(), excess_db.end());
}

double ToneReport::min_excess_db() const {
  return excess_db.empty() ? std::numeric_limits<double>::infinity()
                           : *std::min_element(excess_db.begin(), excess_db.end());
}

SpectralMask fcc_indoor_mask() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {
      {0.96e9, 1.61e9, -75.3},
      {1.61e9, 1.99e9, -53.3},
      {1.99e9, 3.1e9, -51.3},
      {3.1e9, 10.6e9, -41.3},
      {10.6e9, inf, -51.3},
  };
}

void validate_mask(const SpectralMask& mask) {
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!(mask[i].f_lo_hz < mask[i].f_hi_hz)) {
      throw ParameterError("mask: segment " + std::to_string(i) + " has f_lo >= f_hi");
    }
    if (i > 0 && mask[i].f_lo_hz < mask[i - 1].f_hi_hz) {
      throw ParameterError("mask: segments overlap or are not ascending at " + std::to_string(i));
    }
  }
}

std::optional<double> mask_limit_at(const SpectralMask& mask, double f_hz) {
  for (const auto& seg : mask) {
    if (f_hz >= seg.f_lo_hz && f_hz < seg.f_hi_hz) {
      return seg.limit_dbm_per_mhz;
    }
  }
  return std::nullopt;
}

MaskReport check_mask(const PsdEstimate& psd, const SpectralMask& mask, double rbw_target_hz) {
  psd.validate();
  validate_mask(mask);
  if (!(rbw_target_hz > 0.0)) {
    throw ParameterError("check_mask: rbw target must be positive");
  }
  if (psd.rbw_hz > rbw_target_hz * (1.0 + 1e-9)) {
    throw ParameterError("check_mask: PSD resolution " + std::to_string(psd.rbw_hz) +
                         " Hz is coarser than the mask RBW " + std::to_string(rbw_target_hz) + " Hz");
  }

  MaskReport report;
  report.worst_margin_db = kNoEmissionMarginDb;
  report.worst_freq_hz = 0.0;

  auto close_bin = [&](long long m, double sum, std::size_t count) {
    if (count == 0) {
      return;
    }
    const double centre = (static_cast<double>(m) + 0.5) * rbw_target_hz;
    const auto limit = mask_limit_at(mask, centre);
    if (!limit) {
      return;
    }
    const double mean_density = sum / static_cast<double>(count);
    double margin = kNoEmissionMarginDb;
    if (mean_density > 0.0) {
      const double level = 10.0 * std::log10(mean_density * 1e3 * rbw_target_hz);
      margin = std::min(kNoEmissionMarginDb, *limit - level);
    }
    if (margin < report.worst_margin_db) {
      report.worst_margin_db = margin;
      report.worst_freq_hz = centre;
    }
    if (margin < 0.0) {
      report.violations.push_back({centre, -margin});
    }
  };

  long long current = std::numeric_limits<long long>::min();
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < psd.size(); ++i) {
    const auto m = static_cast<long long>(std::floor(psd.freqs_hz[i] / rbw_target_hz));
    if (m != current) {
      close_bin(current, sum, count);
      current = m;
      sum = 0.0;
      count = 0;
    }
    sum += psd.w_per_hz(i);
    ++count;
  }
  close_bin(current, sum, count);

  report.pass = report.violations.empty();
  return report;
}

ToneReport detect_tones(const PsdEstimate& psd, double prr_hz, std::size_t n_harmonics,
                        std::size_t continuum_window_bins, std::optional<double> center_hz) {
  psd.validate();
  if (!(prr_hz > 0.0) || n_harmonics == 0) {
    throw ParameterError("detect_tones: prr must be positive and n_harmonics >= 1");
  }
  if (psd.rbw_hz > prr_hz / 20.0 * (1.0 + 1e-9)) {
    throw ParameterError("detect_tones: PSD resolution " + std::to_string(psd.rbw_hz) +
                         " Hz cannot resolve lines spaced " + std::to_string(prr_hz) + " Hz (need rbw <= prr/20)");
  }
  if (continuum_window_bins < 2) {
    throw ParameterError("detect_tones: continuum window must span >= 2 bins");
  }

  std::vector<double> candidates;
  const double f_lo = psd.freqs_hz.front();
  const double f_hi = psd.freqs_hz.back();
  for (std::size_t k = 1; static_cast<double>(k) * prr_hz <= f_hi; ++k) {
    const double f = static_cast<double>(k) * prr_hz;
    if (f >= f_lo) {
      candidates.push_back(f);
    }
  }
  if (center_hz) {
    const double c = *center_hz;
    std::stable_sort(candidates.begin(), candidates.end(),
                     [c](double a, double b) { return std::abs(a - c) < std::abs(b - c); });
  }
  candidates.resize(std::min(candidates.size(), n_harmonics));
  std::sort(candidates.begin(), candidates.end());

  ToneReport report;
  const std::size_t half = continuum_window_bins / 2;
  std::vector<double> window;
  for (double f : candidates) {
    const std::size_t c = psd.nearest_bin(f);
    window.clear();
    const std::size_t lo = c >= half ? c - half : 0;
    const std::size_t hi = std::min(psd.size() - 1, c + half);
    for (std::size_t i = lo; i <= hi; ++i) {
      if (i != c) {
        window.push_back(psd.dbm_per_mhz[i]);
      }
    }
    if (window.empty()) {
      throw ParameterError("detect_tones: empty continuum window");
    }
    const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
    std::nth_element(window.begin(), mid, window.end());
    double median = *mid;
    if (window.size() % 2 == 0) {
      median = 0.5 * (median + *std::max_element(window.begin(), mid));
    }
    report.tone_freqs_hz.push_back(f);
    report.excess_db.push_back(psd.dbm_per_mhz[c] - median);
  }
  return report;
}

SidelobeMetrics sidelobe_metrics(const PsdEstimate& psd, double f_center_hz) {
  psd.validate();
  const auto& p = psd.dbm_per_mhz;
  const auto& f = psd.freqs_hz;
  if (f_center_hz < f.front() || f_center_hz > f.back()) {
    throw ParameterError("sidelobe_metrics: centre frequency outside the PSD span");
  }
  const auto peak_it = std::max_element(p.begin(), p.end());
  const auto peak = static_cast<std::size_t>(peak_it - p.begin());
  if (peak == 0 || peak + 1 == p.size()) {
    throw ParameterError("sidelobe_metrics: spectral peak at the edge of the provided span");
  }
  const double peak_db = *peak_it;
  const double level = peak_db - 10.0;

  std::size_t lo = peak;
  while (lo > 0 && p[lo - 1] >= level) {
    --lo;
  }
  std::size_t hi = peak;
  while (hi + 1 < p.size() && p[hi + 1] >= level) {
    ++hi;
  }
  if (lo == 0 || hi + 1 == p.size()) {
    throw ParameterError("sidelobe_metrics: span too narrow to contain the -10 dB main lobe");
  }
  auto cross = [&](std::size_t inside, std::size_t outside) {
    const double t = (p[inside] - level) / (p[inside] - p[outside]);
    return f[inside] + t * (f[outside] - f[inside]);
  };
  const double f_lo = cross(lo, lo - 1);
  const double f_hi = cross(hi, hi + 1);
  if (f_center_hz < f_lo || f_center_hz > f_hi) {
    throw ParameterError("sidelobe_metrics: centre frequency lies outside the main lobe");
  }

  constexpr double kNullHysteresisDb = 1.0;
  std::size_t null_lo = lo - 1;
  for (std::size_t i = lo - 1;; --i) {
    if (p[i] < p[null_lo]) {
      null_lo = i;
    }
    if (p[i] > p[null_lo] + kNullHysteresisDb || i == 0) {
      break;
    }
  }
  std::size_t null_hi = hi + 1;
  for (std::size_t i = hi + 1; i < p.size(); ++i) {
    if (p[i] < p[null_hi]) {
      null_hi = i;
    }
    if (p[i] > p[null_hi] + kNullHysteresisDb) {
      break;
    }
  }

  double side = kPsdFloorDbmPerMhz;
  double side_f = f[peak];
  auto consider = [&](std::size_t i) {
    if (p[i] > side) {
      side = p[i];
      side_f = f[i];
    }
  };
  for (std::size_t i = 0; i < null_lo; ++i) {
    consider(i);
  }
  for (std::size_t i = null_hi + 1; i < p.size(); ++i) {
    consider(i);
  }
  return {f_hi - f_lo, side - peak_db, f[peak], side_f};
}

} // namespace uwbsim
