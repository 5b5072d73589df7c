#include "uwbsim/channel.hpp"

#include "uwbsim/errors.hpp"
#include "uwbsim/filter.hpp"
#include "uwbsim/random.hpp"
#include "uwbsim/units.hpp"

#include <cmath>

namespace uwbsim {

void ChannelConfig::validate() const {
  if (!(distance_m > 0.0)) {
    throw ParameterError("channel: distance_m must be positive");
  }
  if (!(freq_hz > 0.0)) {
    throw ParameterError("channel: freq_hz must be positive");
  }
  if (!(link_bw_hz > 0.0)) {
    throw ParameterError("channel: link_bw_hz must be positive");
  }
  if (!(nf_db >= 0.0)) {
    throw ParameterError("channel: nf_db must be >= 0");
  }
  if (!(temperature_k > 0.0)) {
    throw ParameterError("channel: temperature_k must be positive");
  }
  if (filter_order < 1 || filter_order > 16) {
    throw ParameterError("channel: filter_order must be in [1, 16]");
  }
  if (calibrated_ebn0_db && !std::isfinite(*calibrated_ebn0_db)) {
    throw ParameterError("channel: calibrated_ebn0_db must be finite");
  }
}

double ChannelConfig::noise_density_w_per_hz() const {
  return dbm_to_watts(noise_density_dbm_per_hz(temperature_k, nf_db));
}

double fspl_db(double distance_m, double freq_hz) {
  if (!(distance_m > 0.0) || !(freq_hz > 0.0)) {
    throw ParameterError("fspl_db: distance and frequency must be positive");
  }
  return 20.0 * std::log10(4.0 * kPi * distance_m * freq_hz / kSpeedOfLight);
}

LinkBudgetReport link_budget(const ChannelConfig& cfg, double p_tx_dbm, double data_rate_bps,
                             double required_ebn0_db) {
  cfg.validate();
  if (!(data_rate_bps > 0.0)) {
    throw ParameterError("link_budget: data rate must be positive");
  }
  LinkBudgetReport r{};
  r.distance_m = cfg.distance_m;
  r.data_rate_bps = data_rate_bps;
  r.p_tx_dbm = p_tx_dbm;
  r.fspl_db = fspl_db(cfg.distance_m, cfg.freq_hz);
  r.p_rx_dbm = p_tx_dbm + cfg.g_tx_dbi + cfg.g_rx_dbi - r.fspl_db;
  r.noise_floor_dbm = noise_density_dbm_per_hz(cfg.temperature_k, cfg.nf_db) + 10.0 * std::log10(cfg.link_bw_hz);
  r.snr_db = r.p_rx_dbm - r.noise_floor_dbm;
  r.ebn0_db = r.snr_db + 10.0 * std::log10(cfg.link_bw_hz / data_rate_bps);
  r.required_ebn0_db = required_ebn0_db;
  r.margin_db = r.ebn0_db - required_ebn0_db;
  return r;
}

EfficiencyMetrics efficiency_metrics(double tx_power_mw, double data_rate_bps, double distance_m) {
  if (!(tx_power_mw > 0.0) || !(data_rate_bps > 0.0) || !(distance_m > 0.0)) {
    throw ParameterError("efficiency_metrics: power, rate and distance must be positive");
  }
  const double pj = tx_power_mw * 1e-3 / data_rate_bps * 1e12;
  return {pj, pj / distance_m};
}

Waveform add_white_noise(const Waveform& wave, double n0_w_per_hz, std::uint64_t seed) {
  const double sigma = std::sqrt(n0_w_per_hz * wave.sample_rate() / 2.0);
  auto noise = gaussian_samples(wave.size(), sigma, seed);
  const auto x = wave.samples();
  for (std::size_t i = 0; i < noise.size(); ++i) {
    noise[i] += x[i];
  }
  return Waveform(std::move(noise), wave.sample_rate());
}

Waveform add_awgn_ebn0(const Waveform& wave, double ebn0_db, double bit_energy_j, std::uint64_t seed) {
  if (!(bit_energy_j > 0.0) || !std::isfinite(ebn0_db)) {
    throw ParameterError("add_awgn_ebn0: bit energy must be positive and Eb/N0 finite");
  }
  return add_white_noise(wave, bit_energy_j / db_to_linear(ebn0_db), seed);
}

Waveform apply_channel(const Waveform& wave, const ChannelConfig& cfg, double p_tx_dbm) {
  cfg.validate();
  require_nyquist(wave.sample_rate(), cfg.freq_hz + cfg.link_bw_hz / 2.0, "apply_channel");

  const double on_power = pulse_on_power(wave);
  const double scale_to_tx = on_power > 0.0 ? std::sqrt(dbm_to_watts(p_tx_dbm) / on_power) : 0.0;
  const double link_gain_db = cfg.g_tx_dbi + cfg.g_rx_dbi - fspl_db(cfg.distance_m, cfg.freq_hz);
  const double amplitude = scale_to_tx * std::pow(10.0, link_gain_db / 20.0);

  auto rx = bandpass_filter(wave.scaled(amplitude), cfg.freq_hz, cfg.link_bw_hz, cfg.filter_order);
  if (!cfg.noise) {
    return rx;
  }
  return add_white_noise(rx, cfg.noise_density_w_per_hz(), derive_seed(cfg.seed, stream::noise));
}

} // namespace uwbsim
