#pragma once

#include "uwbsim/waveform.hpp"

#include <cstdint>
#include <optional>

namespace uwbsim {

/// Coherent OOK Eb/N0 needed for BER 1e-4: solves Q(sqrt(x)) = 1e-4.
inline constexpr double kDefaultRequiredEbn0Db = 11.41;

struct ChannelConfig {
  double distance_m = 1.0;
  double freq_hz = 4.6e9;
  double g_tx_dbi = -19.2;  // includes tissue loss
  double g_rx_dbi = 8.5;
  double nf_db = 1.2;
  double link_bw_hz = 800e6;
  int filter_order = 4;
  double temperature_k = 290.0;
  bool noise = true;
  std::uint64_t seed = 1;
  /// When set, Monte Carlo runs bypass gains and band-limiting and inject
  /// white noise at this average-bit Eb/N0 instead.
  std::optional<double> calibrated_ebn0_db;

  void validate() const;
  /// One-sided noise density N0 in W/Hz.
  [[nodiscard]] double noise_density_w_per_hz() const;
};

struct LinkBudgetReport {
  double distance_m;
  double data_rate_bps;
  double p_tx_dbm;
  double fspl_db;
  double p_rx_dbm;
  double noise_floor_dbm;
  double snr_db;
  double ebn0_db;
  double required_ebn0_db;
  double margin_db;
};

struct EfficiencyMetrics {
  double energy_pj_per_bit;
  double normalized_pj_per_bit_per_m;
};

/// 20 log10(4 pi d f / c).
double fspl_db(double distance_m, double freq_hz);

/// Scalar budget. p_rx = p_tx + g_tx + g_rx - fspl; noise floor = -174 dBm/Hz
/// (scaled by T/290) + 10 log10(bw) + NF; ebn0 = snr + 10 log10(bw / rate).
LinkBudgetReport link_budget(const ChannelConfig& cfg, double p_tx_dbm, double data_rate_bps,
                             double required_ebn0_db = kDefaultRequiredEbn0Db);

/// Energy per bit and energy per bit per metre of range.
EfficiencyMetrics efficiency_metrics(double tx_power_mw, double data_rate_bps, double distance_m);

/// Sample-level link: rescale the input so its pulse-on power equals p_tx_dbm,
/// apply g_tx + g_rx - fspl, band-limit around freq_hz with link_bw_hz, then
/// add white Gaussian noise of one-sided density N0 over the whole simulated band.
Waveform apply_channel(const Waveform& wave, const ChannelConfig& cfg, double p_tx_dbm);

/// Adds white Gaussian noise with one-sided density n0 (variance n0 * fs / 2).
Waveform add_white_noise(const Waveform& wave, double n0_w_per_hz, std::uint64_t seed);

/// Calibrated AWGN: noise density chosen so bit_energy_j / N0 equals ebn0_db.
Waveform add_awgn_ebn0(const Waveform& wave, double ebn0_db, double bit_energy_j, std::uint64_t seed);

} // namespace uwbsim
