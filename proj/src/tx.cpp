#include "uwbsim/tx.hpp"

#include "uwbsim/errors.hpp"
#include "uwbsim/units.hpp"

#include <cmath>
#include <string>

namespace uwbsim {
namespace {

// Tolerance for sample-grid rounding of slot boundaries.
constexpr double kGridEps = 1e-9;

} // namespace

void TxConfig::validate() const {
  if (!(carrier_hz >= kMinCarrierHz && carrier_hz <= kMaxCarrierHz)) {
    throw ParameterError("tx: carrier_hz must lie in [3.1e9, 6e9]");
  }
  if (!(data_rate_bps >= kMinDataRate && data_rate_bps <= kMaxDataRate)) {
    throw ParameterError("tx: data_rate_bps must lie in [1e8, 8e8]");
  }
  if (!(pulse_width_s > 0.0)) {
    throw ParameterError("tx: pulse_width_s must be positive");
  }
  if (pulse_width_s * data_rate_bps > 2.0 + kGridEps) {
    throw ParameterError("tx: pulse_width_s * data_rate_bps exceeds 2 (pulse spans more than two slots)");
  }
  if (!std::isfinite(p_out_dbm)) {
    throw ParameterError("tx: p_out_dbm must be finite");
  }
  require_nyquist(sample_rate_hz, carrier_hz, "tx");
  if (pulse_width_s * sample_rate_hz < static_cast<double>(pulse_template.n_taps())) {
    throw ParameterError("tx: fewer than one sample per template tap");
  }
  if (phase_noise) {
    phase_noise->validate();
  }
}

double TxConfig::code15_amplitude() const {
  // Mean power of A * level * cos over a full pulse is A^2 / 2 * mean(level^2).
  return std::sqrt(2.0 * dbm_to_watts(p_out_dbm) / pulse_template.mean_square_level());
}

Bits prbs_bits(std::size_t n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, stream::bits));
  Bits bits(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) {
      word = rng();
    }
    bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return bits;
}

std::vector<int> scramble_polarity(std::size_t n_pulses, std::uint64_t seed, bool enabled) {
  std::vector<int> pol(n_pulses, 1);
  if (!enabled) {
    return pol;
  }
  Rng rng(derive_seed(seed, stream::polarity));
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n_pulses; ++i) {
    if (i % 64 == 0) {
      word = rng();
    }
    pol[i] = ((word >> (i % 64)) & 1u) ? -1 : 1;
  }
  return pol;
}

double envelope_at(const PulseTemplate& tmpl, double offset_samples, double pulse_samples) {
  if (offset_samples < -kGridEps || offset_samples >= pulse_samples - kGridEps) {
    return 0.0;
  }
  const double tap_samples = pulse_samples / static_cast<double>(tmpl.n_taps());
  auto k = static_cast<std::size_t>(std::max(0.0, std::floor(offset_samples / tap_samples + kGridEps)));
  k = std::min(k, tmpl.n_taps() - 1);
  return static_cast<double>(tmpl.taps()[k]) / PulseTemplate::kMaxCode;
}

Waveform shape_pulse(const PulseTemplate& tmpl, double pulse_width_s, double carrier_hz, int polarity,
                     double sample_rate_hz, double amplitude) {
  require_nyquist(sample_rate_hz, carrier_hz, "shape_pulse");
  if (polarity != 1 && polarity != -1) {
    throw ParameterError("shape_pulse: polarity must be +1 or -1");
  }
  const double pulse_samples = pulse_width_s * sample_rate_hz;
  const auto n = static_cast<std::size_t>(std::llround(pulse_samples));
  if (n == 0) {
    throw ParameterError("shape_pulse: pulse shorter than one sample");
  }
  std::vector<double> s(n);
  const double cyc_per_sample = carrier_hz / sample_rate_hz;
  for (std::size_t i = 0; i < n; ++i) {
    const double env = envelope_at(tmpl, static_cast<double>(i), pulse_samples);
    s[i] = polarity * amplitude * env * std::cos(2.0 * kPi * cyc_per_sample * static_cast<double>(i));
  }
  return Waveform(std::move(s), sample_rate_hz);
}

Waveform modulate(const Bits& bits, const TxConfig& cfg) {
  return modulate_with_polarity(bits, scramble_polarity(bits.size(), cfg.scramble_seed, cfg.scramble), cfg);
}

Waveform modulate_with_polarity(const Bits& bits, const std::vector<int>& polarity, const TxConfig& cfg) {
  if (bits.empty()) {
    throw ParameterError("modulate: empty bit sequence");
  }
  if (polarity.size() != bits.size()) {
    throw ParameterError("modulate: polarity length differs from bit count");
  }
  cfg.validate();

  const double fs = cfg.sample_rate_hz;
  const double spb = cfg.samples_per_slot();
  const double pulse_samples = cfg.pulse_width_s * fs;
  const auto n = static_cast<std::size_t>(std::ceil(static_cast<double>(bits.size()) * spb - kGridEps));
  const auto phi = phase_noise_on_grid(n, fs, cfg.phase_noise, cfg.phase_noise_seed);
  const double amp = cfg.code15_amplitude();
  const double cyc_per_sample = cfg.carrier_hz / fs;

  std::vector<double> s(n, 0.0);
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] == 0) {
      continue;
    }
    const double start = static_cast<double>(k) * spb;
    const auto i0 = static_cast<std::size_t>(std::ceil(start - kGridEps));
    const auto i1 = std::min(n, static_cast<std::size_t>(std::ceil(start + pulse_samples - kGridEps)));
    const double a = amp * polarity[k];
    for (std::size_t i = i0; i < i1; ++i) {
      const double env = envelope_at(cfg.pulse_template, static_cast<double>(i) - start, pulse_samples);
      const double cycles = cyc_per_sample * static_cast<double>(i);
      const double frac = cycles - std::floor(cycles);
      s[i] += a * env * std::cos(2.0 * kPi * frac + phi[i]);
    }
  }
  return Waveform(std::move(s), fs);
}

} // namespace uwbsim
