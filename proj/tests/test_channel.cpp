#include <doctest.h>

#include "oracles.hpp"
#include "uwbsim/channel.hpp"
#include "uwbsim/errors.hpp"
#include "uwbsim/random.hpp"
#include "uwbsim/spectrum.hpp"
#include "uwbsim/tx.hpp"
#include "uwbsim/units.hpp"

#include <cmath>
#include <random>

using namespace uwbsim;

TEST_CASE("free-space path loss") {
  CHECK(std::abs(fspl_db(1.0, 4.6e9) - oracle::kFspl1m4p6GHz) < 1e-3);
  CHECK(std::abs(fspl_db(1.5, 4.6e9) - oracle::kFspl1p5m4p6GHz) < 1e-3);
  CHECK(fspl_db(2.0, 3e9) - fspl_db(1.0, 3e9) == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
  CHECK(std::abs(fspl_db(2.0, 4.6e9) - fspl_db(1.0, 4.6e9) - 6.0206) < 1e-4);
  double prev = fspl_db(0.1, 4.6e9);
  for (double d = 0.2; d < 5.0; d += 0.1) {
    CHECK(fspl_db(d, 4.6e9) > prev);
    prev = fspl_db(d, 4.6e9);
  }
  prev = fspl_db(1.0, 1e9);
  for (double f = 1.5e9; f < 10e9; f += 0.5e9) {
    CHECK(fspl_db(1.0, f) > prev);
    prev = fspl_db(1.0, f);
  }
  CHECK_THROWS_AS(fspl_db(0.0, 4.6e9), ParameterError);
  CHECK_THROWS_AS(fspl_db(1.0, -1.0), ParameterError);
}

TEST_CASE("link budget with the nominal link parameters") {
  const ChannelConfig ch;
  const auto r = link_budget(ch, 1.4, 500e6, 12.0);
  CHECK(std::abs(r.fspl_db - 45.70) < 0.01);
  CHECK(std::abs(r.p_rx_dbm - (-55.00)) < 0.01);
  CHECK(std::abs(r.noise_floor_dbm - oracle::kNoiseFloor800MHzNf1p2) < 1e-3);
  CHECK(std::abs(r.snr_db - 28.77) < 0.01);
  CHECK(std::abs(r.ebn0_db - 30.81) < 0.01);
  CHECK(r.margin_db == doctest::Approx(r.ebn0_db - 12.0));
  // Exact identities.
  CHECK(r.p_rx_dbm == 1.4 + ch.g_tx_dbi + ch.g_rx_dbi - r.fspl_db);
  CHECK(r.noise_floor_dbm == doctest::Approx(-174.0 + 10.0 * std::log10(800e6) + 1.2).epsilon(1e-15));
  CHECK(r.ebn0_db == doctest::Approx(r.snr_db + 10.0 * std::log10(800e6 / 500e6)).epsilon(1e-15));

  ChannelConfig far = ch;
  far.distance_m = 1.5;
  const auto r15 = link_budget(far, 1.4, 375e6);
  CHECK(std::abs(r15.snr_db - 25.25) < 0.01);
  CHECK(std::abs((r.snr_db - r15.snr_db) - 3.52) < 0.01);
  CHECK(std::abs(r15.ebn0_db - 28.54) < 0.01);
  CHECK(r15.required_ebn0_db == kDefaultRequiredEbn0Db);

  ChannelConfig bare;
  bare.g_tx_dbi = 0.0;
  bare.g_rx_dbi = 0.0;
  CHECK(std::abs(link_budget(bare, 0.0, 500e6).p_rx_dbm - (-45.70)) < 0.01);
}

TEST_CASE("default required Eb/N0 solves Q(sqrt(x)) = 1e-4") {
  CHECK(std::abs(kDefaultRequiredEbn0Db - oracle::kEbn0For1em4Db) < 0.01);
}

TEST_CASE("channel config validation") {
  ChannelConfig ch;
  ch.distance_m = 0.0;
  CHECK_THROWS_AS(ch.validate(), ParameterError);
  ch = {};
  ch.link_bw_hz = 0.0;
  CHECK_THROWS_AS(ch.validate(), ParameterError);
  ch = {};
  ch.nf_db = -0.5;
  CHECK_THROWS_AS(ch.validate(), ParameterError);
  ch = {};
  CHECK_THROWS_AS(link_budget(ch, 1.4, 0.0), ParameterError);
}

TEST_CASE("efficiency metrics") {
  CHECK(efficiency_metrics(13.2, 800e6, 1.0).energy_pj_per_bit == doctest::Approx(16.5).epsilon(1e-12));
  CHECK(efficiency_metrics(13.2, 500e6, 1.0).normalized_pj_per_bit_per_m == doctest::Approx(26.4).epsilon(1e-12));
  const auto unit = efficiency_metrics(1.0, 1e9, 1.0);
  CHECK(unit.energy_pj_per_bit == doctest::Approx(1.0));
  CHECK(unit.normalized_pj_per_bit_per_m == doctest::Approx(1.0));
  CHECK(efficiency_metrics(13.2, 500e6, 2.0).normalized_pj_per_bit_per_m == doctest::Approx(13.2));
  CHECK_THROWS_AS(efficiency_metrics(0.0, 1e9, 1.0), ParameterError);
}

TEST_CASE("noise-only channel output sits at the in-band noise floor") {
  const ChannelConfig ch;
  const auto out = apply_channel(Waveform::zeros(400000, 20e9), ch, 1.4);
  const auto psd = psd_welch(out, 20000, 0.5, Window::hann);
  const double lo = ch.freq_hz - ch.link_bw_hz / 2;
  const double hi = ch.freq_hz + ch.link_bw_hz / 2;
  const double in_band_dbm = watts_to_dbm(psd.band_power_w(lo, hi));
  CHECK(std::abs(in_band_dbm - link_budget(ch, 1.4, 500e6).noise_floor_dbm) < 0.5);
  // White across the simulated band: variance N0 fs / 2.
  CHECK(mean_power(out) == doctest::Approx(ch.noise_density_w_per_hz() * 10e9).epsilon(0.01));
}

TEST_CASE("identity channel passes the waveform through") {
  TxConfig tx;
  tx.carrier_hz = 4e9;
  const auto in = modulate(prbs_bits(2000, 3), tx);
  ChannelConfig ch;
  ch.g_tx_dbi = 0.0;
  ch.g_rx_dbi = 0.0;
  ch.nf_db = 0.0;
  ch.noise = false;
  ch.freq_hz = 4e9;
  ch.link_bw_hz = 2e9;
  ch.distance_m = kSpeedOfLight / (4.0 * kPi * ch.freq_hz);  // fspl = 0 dB
  CHECK(std::abs(fspl_db(ch.distance_m, ch.freq_hz)) < 1e-9);
  const double p_on = pulse_on_power(in);
  const auto out = apply_channel(in, ch, watts_to_dbm(p_on));
  double err = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    err += (out[i] - in[i]) * (out[i] - in[i]);
  }
  // Residual is the far sidelobe content the band edge trims.
  CHECK(10.0 * std::log10(err / static_cast<double>(in.size()) / mean_power(in)) < -15.0);
  CHECK(std::abs(10.0 * std::log10(mean_power(out) / mean_power(in))) < 0.5);
}

TEST_CASE("channel noise is reproducible per seed") {
  ChannelConfig ch;
  const auto in = modulate(prbs_bits(500, 1), TxConfig{});
  const auto a = apply_channel(in, ch, 1.4);
  const auto b = apply_channel(in, ch, 1.4);
  CHECK(std::equal(a.samples().begin(), a.samples().end(), b.samples().begin()));
  ch.seed = 2;
  const auto c = apply_channel(in, ch, 1.4);
  CHECK_FALSE(std::equal(a.samples().begin(), a.samples().end(), c.samples().begin()));
}

TEST_CASE("sample-level SNR agrees with the scalar budget over random configs") {
  // In-band SNR = pulse-on signal power inside the link band over noise power
  // in the same band. The stimulus is all ones (100 % pulse-on at 500 Mb/s),
  // which is the power the budget's p_rx describes. The link band is kept
  // wide enough to pass the ~1.1 GHz pulse main lobe, and its top edge stays
  // within fs / 4 at 20 GS/s.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Waveform zeros = Waveform::zeros(400000, 20e9);
  for (int trial = 0; trial < 8; ++trial) {
    TxConfig tx;
    tx.carrier_hz = 3.9e9 + 0.5e9 * u(rng);
    tx.p_out_dbm = -5.0 + 10.0 * u(rng);
    ChannelConfig ch;
    ch.distance_m = 0.2 + 2.8 * u(rng);
    ch.freq_hz = tx.carrier_hz + 200e6 * (u(rng) - 0.5);
    ch.g_tx_dbi = -25.0 + 25.0 * u(rng);
    ch.g_rx_dbi = 10.0 * u(rng);
    ch.nf_db = 5.0 * u(rng);
    ch.temperature_k = 250.0 + 80.0 * u(rng);
    ch.link_bw_hz = 800e6 + 200e6 * u(rng);
    ch.seed = trial + 1;
    CAPTURE(trial);

    const auto sig = modulate(Bits(10000, 1), tx);
    ChannelConfig quiet = ch;
    quiet.noise = false;
    const auto s_out = apply_channel(sig, quiet, tx.p_out_dbm);
    const auto n_out = apply_channel(zeros, ch, tx.p_out_dbm);
    const double lo = ch.freq_hz - ch.link_bw_hz / 2;
    const double hi = ch.freq_hz + ch.link_bw_hz / 2;
    const double s_in = psd_welch(s_out, 20000, 0.5, Window::hann).band_power_w(lo, hi);
    const double n_in = psd_welch(n_out, 20000, 0.5, Window::hann).band_power_w(lo, hi);
    const double measured = 10.0 * std::log10(s_in / n_in);
    const double budget = link_budget(ch, tx.p_out_dbm, tx.data_rate_bps).snr_db;
    CAPTURE(measured);
    CAPTURE(budget);
    CHECK(std::abs(measured - budget) <= 1.0);
  }
}

TEST_CASE("calibrated AWGN injects the requested Eb/N0") {
  const double eb = 2e-18;
  const auto out = add_awgn_ebn0(Waveform::zeros(200000, 20e9), 10.0, eb, 5);
  const double n0 = eb / 10.0;
  CHECK(mean_power(out) == doctest::Approx(n0 * 20e9 / 2).epsilon(0.01));
  const auto same = add_white_noise(Waveform::zeros(10, 20e9), 0.0, 1);
  CHECK(mean_power(same) == 0.0);
}
