#pragma once

#include "uwbsim/channel.hpp"
#include "uwbsim/pulse_template.hpp"
#include "uwbsim/random.hpp"
#include "uwbsim/tx.hpp"
#include "uwbsim/waveform.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace uwbsim {

enum class Detector { coherent_matched, energy };
enum class ThresholdPolicy { optimal_known_levels, trained_preamble };

/// How the coherent correlator treats the per-slot carrier sign.
///   known_sequence: multiply by the regenerated scrambler polarity (sign-aware).
///   magnitude:      use |correlation|, no scrambler state needed.
enum class PolarityMode { known_sequence, magnitude };

Detector parse_detector(std::string_view s);
ThresholdPolicy parse_threshold_policy(std::string_view s);
PolarityMode parse_polarity_mode(std::string_view s);
std::string_view to_string(Detector d);
std::string_view to_string(ThresholdPolicy p);
std::string_view to_string(PolarityMode p);

/// Conditional means of the decision statistic for bit 0 and bit 1.
struct DecisionLevels {
  double mean0;
  double mean1;
  [[nodiscard]] double threshold() const { return 0.5 * (mean0 + mean1); }
};

inline constexpr std::size_t kMinPreambleBits = 64;

struct RxConfig {
  Detector detector = Detector::coherent_matched;
  double bit_rate_bps = 500e6;
  ThresholdPolicy threshold_policy = ThresholdPolicy::optimal_known_levels;
  std::size_t preamble_bits = 128;
  bool known_timing = true;
  PolarityMode polarity = PolarityMode::known_sequence;
  // Scrambler state shared with the transmitter (known_sequence mode).
  bool scramble = true;
  std::uint64_t scramble_seed = 1;
  // Energy-detector front-end filter; centre 0 means "use the carrier".
  double filter_center_hz = 0.0;
  // Null-to-null main lobe of the 2 ns triangle: ringing stays inside one slot.
  double filter_bw_hz = 2e9;
  int filter_order = 4;

  // Run-time inputs, not part of the config file.
  std::optional<DecisionLevels> levels;  // optimal_known_levels
  Bits preamble;                         // trained_preamble: first preamble_bits transmitted bits

  void validate() const;
};

struct BerResult {
  std::size_t n_bits = 0;
  std::size_t n_errors = 0;
  double ber = 0.0;
  double ci95_halfwidth = 0.0;
};

/// Per-slot decision statistics (one per whole slot in the waveform).
/// Coherent: correlation with the expected pulse on the absolute-time carrier.
/// Energy: sum of squares of the band-limited signal over the pulse window.
std::vector<double> decision_statistics(const Waveform& wave, const RxConfig& rx, const PulseTemplate& tmpl,
                                        double carrier_hz, double pulse_width_s);

/// Hard decisions with the threshold given by rx.threshold_policy.
/// Slot boundaries are assumed known (oracle timing).
Bits demodulate(const Waveform& wave, const RxConfig& rx, const PulseTemplate& tmpl, double carrier_hz,
                double pulse_width_s);

/// Q(sqrt(Eb/N0)) for coherent OOK with Eb the average bit energy.
double ber_theory_ook_coherent(double ebn0_db);

/// Eb/N0 in dB at which ber_theory_ook_coherent equals target_ber.
double required_ebn0_db(double target_ber);

BerResult count_errors(const Bits& tx_bits, const Bits& rx_bits);

/// Builds a BerResult from counts; ci95 = 1.96 sqrt(ber (1 - ber) / n).
BerResult make_ber_result(std::size_t n_bits, std::size_t n_errors);

/// Decision levels computed from a noiseless probe through the same chain
/// (tx -> channel -> statistic) plus the analytic noise contribution for the
/// energy detector.
DecisionLevels calibrate_levels(const TxConfig& tx, const ChannelConfig& ch, const RxConfig& rx);

/// Bits per independently seeded Monte Carlo block.
inline constexpr std::size_t kMonteCarloBlockBits = 8192;

/// End-to-end bits -> modulate -> channel -> demodulate -> count. Block b
/// draws all its seeds from derive_seed(master_seed, block, b), so the result
/// does not depend on how blocks are scheduled. workers = 0 uses worker_count().
BerResult monte_carlo_ber(const TxConfig& tx, const ChannelConfig& ch, const RxConfig& rx, std::size_t n_bits,
                          std::uint64_t master_seed, std::size_t workers = 0);

} // namespace uwbsim
