#include "uwbsim/phase_noise.hpp"

#include "uwbsim/errors.hpp"
#include "uwbsim/fft.hpp"
#include "uwbsim/random.hpp"
#include "uwbsim/units.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace uwbsim {
namespace {

// Synthesis grid ceiling; content above 500 MHz offset is < 1% of the variance.
constexpr double kMaxSynthesisRate = 1e9;

double anchor_corner(const PhaseNoiseSpec& s) {
  return s.f_outband_ref_hz * std::pow(10.0, (s.l_outband_dbc_hz - s.l_inband_dbc_hz) / 20.0);
}

} // namespace

void PhaseNoiseSpec::validate() const {
  if (!(l_inband_dbc_hz < 0.0) || !(l_outband_dbc_hz < 0.0)) {
    throw ParameterError("phase noise: levels must be negative dBc/Hz");
  }
  if (!(f_inband_ref_hz > 0.0) || !(f_outband_ref_hz > f_inband_ref_hz)) {
    throw ParameterError("phase noise: reference offsets must satisfy 0 < in-band < out-of-band");
  }
  if (!(integ_lo_hz > 0.0) || !(integ_hi_hz > integ_lo_hz)) {
    throw ParameterError("phase noise: integration band must satisfy 0 < lo < hi");
  }
  const double corner = corner_hz.value_or(anchor_corner(*this));
  if (!(integ_lo_hz < corner && corner < integ_hi_hz)) {
    throw ParameterError("phase noise: corner must lie inside the integration band");
  }
  if (!(target_rms_jitter_s > 0.0) || !(ref_carrier_hz > 0.0)) {
    throw ParameterError("phase noise: jitter target and reference carrier must be positive");
  }
}

double PhaseNoiseProfile::ssb_dbc_hz(double offset_hz) const {
  const double f = std::abs(offset_hz);
  if (f <= corner_hz) {
    return level_dbc_hz;
  }
  return level_dbc_hz - 20.0 * std::log10(f / corner_hz);
}

double PhaseNoiseProfile::phase_psd(double offset_hz) const {
  return 2.0 * std::pow(10.0, ssb_dbc_hz(offset_hz) / 10.0);
}

double PhaseNoiseProfile::rms_phase_rad(double lo_hz, double hi_hz) const {
  const double l0 = std::pow(10.0, level_dbc_hz / 10.0);
  double ssb = 0.0;
  if (lo_hz < corner_hz) {
    ssb += l0 * (std::min(hi_hz, corner_hz) - lo_hz);
  }
  if (hi_hz > corner_hz) {
    const double a = std::max(lo_hz, corner_hz);
    ssb += l0 * corner_hz * corner_hz * (1.0 / a - 1.0 / hi_hz);
  }
  return std::sqrt(2.0 * ssb);
}

double PhaseNoiseProfile::rms_jitter_s(double lo_hz, double hi_hz, double carrier_hz) const {
  return rms_phase_rad(lo_hz, hi_hz) / (2.0 * kPi * carrier_hz);
}

PhaseNoiseProfile calibrate(const PhaseNoiseSpec& spec) {
  spec.validate();
  PhaseNoiseProfile p{spec.l_inband_dbc_hz, spec.corner_hz.value_or(anchor_corner(spec))};
  const double jitter = p.rms_jitter_s(spec.integ_lo_hz, spec.integ_hi_hz, spec.ref_carrier_hz);
  const double offset = 20.0 * std::log10(spec.target_rms_jitter_s / jitter);
  p.level_dbc_hz += std::clamp(offset, -kMaxAnchorAdjustDb, kMaxAnchorAdjustDb);
  return p;
}

std::vector<double> phase_noise_process(std::size_t n, double rate_hz, const PhaseNoiseProfile& profile,
                                        std::uint64_t seed) {
  if (n == 0) {
    return {};
  }
  const std::size_t m = fast_fft_size(std::max<std::size_t>(n, 2));
  const std::size_t nb = m / 2 + 1;
  const auto g = gaussian_samples(2 * nb, 1.0, seed);
  std::vector<std::complex<double>> bins(nb);
  const double df = rate_hz / static_cast<double>(m);
  for (std::size_t k = 1; k < nb; ++k) {
    const double s = profile.phase_psd(static_cast<double>(k) * df);
    const bool nyquist = (m % 2 == 0) && k == m / 2;
    if (nyquist) {
      bins[k] = {std::sqrt(static_cast<double>(m) * rate_hz * s) * g[2 * k], 0.0};
    } else {
      const double a = std::sqrt(static_cast<double>(m) * rate_hz * s / 4.0);
      bins[k] = {a * g[2 * k], a * g[2 * k + 1]};
    }
  }
  RealIfft inv(m);
  const auto x = inv.inverse(bins);
  return {x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n)};
}

std::vector<double> phase_noise_on_grid(std::size_t n, double sample_rate_hz,
                                        const std::optional<PhaseNoiseSpec>& spec, std::uint64_t seed) {
  std::vector<double> out(n, 0.0);
  if (!spec || n == 0) {
    return out;
  }
  const auto profile = calibrate(*spec);
  const auto decim = static_cast<std::size_t>(std::max(1.0, std::floor(sample_rate_hz / kMaxSynthesisRate)));
  const double rate = sample_rate_hz / static_cast<double>(decim);
  const std::size_t nc = n / decim + 2;
  const auto coarse = phase_noise_process(nc, rate, profile, derive_seed(seed, stream::phase));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i / decim;
    const double frac = static_cast<double>(i % decim) / static_cast<double>(decim);
    out[i] = coarse[j] + frac * (coarse[j + 1] - coarse[j]);
  }
  return out;
}

std::vector<double> synth_carrier_phase(double duration_s, double carrier_hz,
                                        const std::optional<PhaseNoiseSpec>& spec, std::uint64_t seed,
                                        double sample_rate_hz) {
  if (!(duration_s > 0.0) || !(sample_rate_hz > 0.0)) {
    throw ParameterError("synth_carrier_phase: duration and sample rate must be positive");
  }
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
  auto phase = phase_noise_on_grid(n, sample_rate_hz, spec, seed);
  for (std::size_t i = 0; i < n; ++i) {
    phase[i] += 2.0 * kPi * carrier_hz * (static_cast<double>(i) / sample_rate_hz);
  }
  return phase;
}

} // namespace uwbsim
