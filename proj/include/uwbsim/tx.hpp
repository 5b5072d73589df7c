#pragma once

#include "uwbsim/phase_noise.hpp"
#include "uwbsim/pulse_template.hpp"
#include "uwbsim/random.hpp"
#include "uwbsim/waveform.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace uwbsim {

inline constexpr double kMinCarrierHz = 3.1e9;
inline constexpr double kMaxCarrierHz = 6.0e9;
inline constexpr double kMinDataRate = 1e8;
inline constexpr double kMaxDataRate = 8e8;

struct TxConfig {
  double carrier_hz = 4.5e9;
  double pulse_width_s = 2e-9;
  double data_rate_bps = 500e6;
  double p_out_dbm = 1.4;
  PulseTemplate pulse_template = quantize_template(8);
  bool scramble = true;
  std::uint64_t scramble_seed = 1;
  std::optional<PhaseNoiseSpec> phase_noise;
  std::uint64_t phase_noise_seed = 1;
  double sample_rate_hz = 20e9;

  /// Throws ParameterError on any violated range or invariant.
  void validate() const;

  [[nodiscard]] double samples_per_slot() const { return sample_rate_hz / data_rate_bps; }
  /// Peak carrier amplitude (code 15) giving p_out over a full-template pulse.
  [[nodiscard]] double code15_amplitude() const;
};

/// Deterministic pseudo-random bits (values 0/1) from a 64-bit Mersenne
/// twister stream derived from `seed`.
Bits prbs_bits(std::size_t n, std::uint64_t seed);

/// Per-slot carrier polarity. Disabled: all +1. Enabled: equiprobable +/-1
/// from a stream derived from `seed`. Slot k of the modulator uses element k,
/// so a receiver that knows the seed can regenerate the sequence.
std::vector<int> scramble_polarity(std::size_t n_pulses, std::uint64_t seed, bool enabled);

/// One pulse of duration pulse_width_s: zero-order-hold envelope (each tap
/// spans pulse_width / n_taps) times cos(2*pi*fc*t) starting at phase 0,
/// scaled by amplitude * code / 15 and the polarity sign.
Waveform shape_pulse(const PulseTemplate& tmpl, double pulse_width_s, double carrier_hz, int polarity,
                     double sample_rate_hz, double amplitude = 1.0);

/// OOK with per-slot PSK scrambling on a continuous (optionally jittered)
/// carrier. Output length is ceil(n_bits / rate * fs); pulse tails past the
/// end are truncated and overlapping tails add.
Waveform modulate(const Bits& bits, const TxConfig& cfg);

/// Same as modulate but with an explicit polarity sequence (one entry per slot).
Waveform modulate_with_polarity(const Bits& bits, const std::vector<int>& polarity, const TxConfig& cfg);

/// Envelope code / 15 at sample offset u (in samples) from a slot start, or 0
/// outside the pulse.
double envelope_at(const PulseTemplate& tmpl, double offset_samples, double pulse_samples);

} // namespace uwbsim
