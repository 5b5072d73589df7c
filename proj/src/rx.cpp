#include "uwbsim/rx.hpp"

#include "uwbsim/errors.hpp"
#include "uwbsim/filter.hpp"
#include "uwbsim/parallel.hpp"
#include "uwbsim/units.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace uwbsim {

Detector parse_detector(std::string_view s) {
  if (s == "coherent_matched" || s == "coherent") {
    return Detector::coherent_matched;
  }
  if (s == "energy") {
    return Detector::energy;
  }
  throw ParameterError("unknown detector '" + std::string(s) + "' (expected coherent_matched|energy)");
}

ThresholdPolicy parse_threshold_policy(std::string_view s) {
  if (s == "optimal_known_levels") {
    return ThresholdPolicy::optimal_known_levels;
  }
  if (s == "trained_preamble") {
    return ThresholdPolicy::trained_preamble;
  }
  throw ParameterError("unknown threshold policy '" + std::string(s) +
                       "' (expected optimal_known_levels|trained_preamble)");
}

PolarityMode parse_polarity_mode(std::string_view s) {
  if (s == "known_sequence") {
    return PolarityMode::known_sequence;
  }
  if (s == "magnitude") {
    return PolarityMode::magnitude;
  }
  throw ParameterError("unknown polarity mode '" + std::string(s) + "' (expected known_sequence|magnitude)");
}

std::string_view to_string(Detector d) { return d == Detector::energy ? "energy" : "coherent_matched"; }

std::string_view to_string(ThresholdPolicy p) {
  return p == ThresholdPolicy::trained_preamble ? "trained_preamble" : "optimal_known_levels";
}

std::string_view to_string(PolarityMode p) {
  return p == PolarityMode::magnitude ? "magnitude" : "known_sequence";
}

void RxConfig::validate() const {
  if (!(bit_rate_bps > 0.0)) {
    throw ParameterError("rx: bit_rate_bps must be positive");
  }
  if (!known_timing) {
    throw ParameterError("rx: timing recovery is not implemented; known_timing must be true");
  }
  if (threshold_policy == ThresholdPolicy::trained_preamble && preamble_bits < kMinPreambleBits) {
    throw ParameterError("rx: trained preamble needs >= 64 bits");
  }
  if (!(filter_bw_hz > 0.0) || filter_order < 1 || filter_order > 16 || filter_center_hz < 0.0) {
    throw ParameterError("rx: invalid energy-detector filter");
  }
}

std::vector<double> decision_statistics(const Waveform& wave, const RxConfig& rx, const PulseTemplate& tmpl,
                                        double carrier_hz, double pulse_width_s) {
  rx.validate();
  const double fs = wave.sample_rate();
  const double spb = fs / rx.bit_rate_bps;
  if (static_cast<double>(wave.size()) + 1e-9 < spb) {
    throw ParameterError("demodulate: waveform shorter than one bit slot");
  }
  const auto n_slots = static_cast<std::size_t>(std::floor(static_cast<double>(wave.size()) / spb + 1e-9));
  const double pulse_samples = pulse_width_s * fs;
  const std::size_t n = wave.size();
  std::vector<double> stats(n_slots, 0.0);

  auto window = [&](std::size_t k) {
    const double start = static_cast<double>(k) * spb;
    const auto i0 = static_cast<std::size_t>(std::ceil(start - 1e-9));
    const auto i1 = std::min(n, static_cast<std::size_t>(std::ceil(start + pulse_samples - 1e-9)));
    return std::pair{start, std::pair{i0, i1}};
  };

  if (rx.detector == Detector::coherent_matched) {
    require_nyquist(fs, carrier_hz, "demodulate");
    const auto pol = rx.polarity == PolarityMode::known_sequence
                         ? scramble_polarity(n_slots, rx.scramble_seed, rx.scramble)
                         : std::vector<int>(n_slots, 1);
    const auto x = wave.samples();
    const double cyc = carrier_hz / fs;
    for (std::size_t k = 0; k < n_slots; ++k) {
      const auto [start, range] = window(k);
      double corr = 0.0;
      for (std::size_t i = range.first; i < range.second; ++i) {
        const double env = envelope_at(tmpl, static_cast<double>(i) - start, pulse_samples);
        const double cycles = cyc * static_cast<double>(i);
        corr += x[i] * env * std::cos(2.0 * kPi * (cycles - std::floor(cycles)));
      }
      stats[k] = rx.polarity == PolarityMode::magnitude ? std::abs(corr) : pol[k] * corr;
    }
  } else {
    const double fc = rx.filter_center_hz > 0.0 ? rx.filter_center_hz : carrier_hz;
    const auto y = bandpass_filter(wave, fc, rx.filter_bw_hz, rx.filter_order);
    const auto ys = y.samples();
    // Integrate over the pulse, clipped to its own slot when pulses overlap.
    const double span = std::min(pulse_samples, spb);
    for (std::size_t k = 0; k < n_slots; ++k) {
      const double start = static_cast<double>(k) * spb;
      const auto i0 = static_cast<std::size_t>(std::ceil(start - 1e-9));
      const auto i1 = std::min(n, static_cast<std::size_t>(std::ceil(start + span - 1e-9)));
      double e = 0.0;
      for (std::size_t i = i0; i < i1; ++i) {
        e += ys[i] * ys[i];
      }
      stats[k] = e;
    }
  }
  return stats;
}

Bits demodulate(const Waveform& wave, const RxConfig& rx, const PulseTemplate& tmpl, double carrier_hz,
                double pulse_width_s) {
  const auto stats = decision_statistics(wave, rx, tmpl, carrier_hz, pulse_width_s);
  double threshold = 0.0;
  if (rx.threshold_policy == ThresholdPolicy::optimal_known_levels) {
    if (!rx.levels) {
      throw ParameterError("demodulate: optimal_known_levels requires decision levels");
    }
    threshold = rx.levels->threshold();
  } else {
    if (rx.preamble.size() != rx.preamble_bits || stats.size() < rx.preamble_bits) {
      throw ParameterError("demodulate: preamble length does not match preamble_bits or exceeds the record");
    }
    double sum[2] = {0.0, 0.0};
    std::size_t count[2] = {0, 0};
    for (std::size_t k = 0; k < rx.preamble_bits; ++k) {
      const int b = rx.preamble[k] ? 1 : 0;
      sum[b] += stats[k];
      ++count[b];
    }
    if (count[0] == 0 || count[1] == 0) {
      throw ParameterError("demodulate: preamble must contain both bit values");
    }
    threshold = 0.5 * (sum[0] / static_cast<double>(count[0]) + sum[1] / static_cast<double>(count[1]));
  }
  Bits out(stats.size());
  for (std::size_t k = 0; k < stats.size(); ++k) {
    out[k] = stats[k] > threshold ? 1 : 0;
  }
  return out;
}

double ber_theory_ook_coherent(double ebn0_db) {
  if (std::isinf(ebn0_db)) {
    return ebn0_db > 0 ? 0.0 : 0.5;
  }
  const double x = std::sqrt(db_to_linear(ebn0_db));
  return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double required_ebn0_db(double target_ber) {
  if (!(target_ber > 0.0 && target_ber < 0.5)) {
    throw ParameterError("required_ebn0_db: target BER must lie in (0, 0.5)");
  }
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ber_theory_ook_coherent(mid) > target_ber ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

BerResult make_ber_result(std::size_t n_bits, std::size_t n_errors) {
  BerResult r;
  r.n_bits = n_bits;
  r.n_errors = n_errors;
  r.ber = n_bits ? static_cast<double>(n_errors) / static_cast<double>(n_bits) : 0.0;
  r.ci95_halfwidth = n_bits ? 1.96 * std::sqrt(r.ber * (1.0 - r.ber) / static_cast<double>(n_bits)) : 0.0;
  return r;
}

BerResult count_errors(const Bits& tx_bits, const Bits& rx_bits) {
  if (tx_bits.size() != rx_bits.size()) {
    throw ParameterError("count_errors: sequences differ in length (" + std::to_string(tx_bits.size()) + " vs " +
                         std::to_string(rx_bits.size()) + ")");
  }
  std::size_t errors = 0;
  for (std::size_t i = 0; i < tx_bits.size(); ++i) {
    errors += (tx_bits[i] != 0) != (rx_bits[i] != 0) ? 1 : 0;
  }
  return make_ber_result(tx_bits.size(), errors);
}

namespace {

double isolated_bit_energy(const TxConfig& tx) {
  const auto pulse = shape_pulse(tx.pulse_template, tx.pulse_width_s, tx.carrier_hz, 1, tx.sample_rate_hz,
                                 tx.code15_amplitude());
  return energy(pulse.samples(), pulse.sample_rate()) / 2.0;
}

} // namespace

DecisionLevels calibrate_levels(const TxConfig& tx, const ChannelConfig& ch, const RxConfig& rx) {
  TxConfig probe_tx = tx;
  probe_tx.scramble = false;
  probe_tx.phase_noise.reset();
  const Bits probe{0, 1, 0, 0};
  auto wave = modulate(probe, probe_tx);

  double n0 = 0.0;
  if (ch.calibrated_ebn0_db) {
    n0 = ch.noise ? isolated_bit_energy(tx) / db_to_linear(*ch.calibrated_ebn0_db) : 0.0;
  } else {
    ChannelConfig quiet = ch;
    quiet.noise = false;
    wave = apply_channel(wave, quiet, tx.p_out_dbm);
    n0 = ch.noise ? ch.noise_density_w_per_hz() : 0.0;
  }

  RxConfig probe_rx = rx;
  probe_rx.bit_rate_bps = tx.data_rate_bps;
  probe_rx.scramble = false;
  const auto stats = decision_statistics(wave, probe_rx, tx.pulse_template, tx.carrier_hz, tx.pulse_width_s);
  DecisionLevels levels{stats[3], stats[1]};

  if (rx.detector == Detector::energy) {
    const double fs = tx.sample_rate_hz;
    const double fc = rx.filter_center_hz > 0.0 ? rx.filter_center_hz : tx.carrier_hz;
    const double window = std::ceil(std::min(tx.pulse_width_s * fs, fs / tx.data_rate_bps) - 1e-9);
    const double noise_mean = window * n0 * bandpass_noise_bandwidth(fs, fc, rx.filter_bw_hz, rx.filter_order);
    levels.mean0 += noise_mean;
    levels.mean1 += noise_mean;
  }
  return levels;
}

BerResult monte_carlo_ber(const TxConfig& tx, const ChannelConfig& ch, const RxConfig& rx, std::size_t n_bits,
                          std::uint64_t master_seed, std::size_t workers) {
  if (n_bits < 1000) {
    throw ParameterError("monte_carlo_ber: n_bits must be >= 1000");
  }
  tx.validate();
  ch.validate();
  RxConfig base_rx = rx;
  base_rx.bit_rate_bps = tx.data_rate_bps;
  base_rx.validate();

  const bool trained = base_rx.threshold_policy == ThresholdPolicy::trained_preamble;
  if (trained && base_rx.preamble_bits >= kMonteCarloBlockBits) {
    throw ParameterError("monte_carlo_ber: preamble longer than a Monte Carlo block");
  }
  if (!trained && !base_rx.levels) {
    base_rx.levels = calibrate_levels(tx, ch, base_rx);
  }
  const double bit_energy = isolated_bit_energy(tx);

  const std::size_t n_blocks = (n_bits + kMonteCarloBlockBits - 1) / kMonteCarloBlockBits;
  std::vector<BerResult> partial(n_blocks);

  parallel_for(n_blocks, workers == 0 ? worker_count() : workers, [&](std::size_t b) {
    const std::uint64_t block_seed = derive_seed(master_seed, stream::block, b);
    const std::size_t payload = std::min(kMonteCarloBlockBits, n_bits - b * kMonteCarloBlockBits);
    const std::size_t skip = trained ? base_rx.preamble_bits : 0;
    const auto bits = prbs_bits(payload + skip, block_seed);

    TxConfig tx_b = tx;
    tx_b.scramble_seed = derive_seed(block_seed, stream::polarity, tx.scramble_seed);
    tx_b.phase_noise_seed = derive_seed(block_seed, stream::phase, tx.phase_noise_seed);
    ChannelConfig ch_b = ch;
    ch_b.seed = derive_seed(block_seed, stream::noise, ch.seed);

    const auto clean = modulate(bits, tx_b);
    Waveform received = ch_b.calibrated_ebn0_db
                            ? (ch_b.noise ? add_awgn_ebn0(clean, *ch_b.calibrated_ebn0_db, bit_energy, ch_b.seed)
                                          : clean)
                            : apply_channel(clean, ch_b, tx.p_out_dbm);

    RxConfig rx_b = base_rx;
    rx_b.scramble = tx_b.scramble;
    rx_b.scramble_seed = tx_b.scramble_seed;
    if (trained) {
      rx_b.preamble.assign(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(skip));
    }
    const auto decided = demodulate(received, rx_b, tx.pulse_template, tx.carrier_hz, tx.pulse_width_s);
    const Bits sent(bits.begin() + static_cast<std::ptrdiff_t>(skip), bits.end());
    const Bits got(decided.begin() + static_cast<std::ptrdiff_t>(skip),
                   decided.begin() + static_cast<std::ptrdiff_t>(bits.size()));
    partial[b] = count_errors(sent, got);
  });

  std::size_t total = 0;
  std::size_t errors = 0;
  for (const auto& p : partial) {
    total += p.n_bits;
    errors += p.n_errors;
  }
  return make_ber_result(total, errors);
}

} // namespace uwbsim
