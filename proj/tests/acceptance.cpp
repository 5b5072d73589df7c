// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "oracles.hpp"
#include "uwbsim/channel.hpp"
#include "uwbsim/compliance.hpp"
#include "uwbsim/config.hpp"
#include "uwbsim/phase_noise.hpp"
#include "uwbsim/rx.hpp"
#include "uwbsim/spectrum.hpp"
#include "uwbsim/tx.hpp"
#include "uwbsim/units.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace uwbsim;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr double kFs = 20e9;
const std::vector<double> kToneFreqs = {4.0e9, 4.5e9, 5.0e9};

// Tone removal by PSK scrambling, 1e5 bits at 500 Mb/s (0.2 ms).
Verdict tones() {
  const auto t0 = Clock::now();
  const auto bits = prbs_bits(100000, 1);
  TxConfig plain;
  plain.scramble = false;
  const TxConfig scrambled;
  const auto wp = modulate(bits, plain);
  const auto ws = modulate(bits, scrambled);
  const auto rp = detect_tones(psd_welch(wp, 20000, 0.5, Window::hann), 500e6, 3, kDefaultContinuumWindow, 4.5e9);
  const auto rs = detect_tones(psd_welch(ws, 20000, 0.5, Window::hann), 500e6, 3, kDefaultContinuumWindow, 4.5e9);
  const double runtime = seconds_since(t0);

  // Exact-DFT cross-check on the first 50 records of 1 MHz resolution.
  const std::size_t record = 20000;
  double oracle_plain_min = INFINITY;
  double oracle_scr_max = -INFINITY;
  for (double f : kToneFreqs) {
    oracle_plain_min = std::min(oracle_plain_min, oracle::tone_excess_db(wp.samples().first(50 * record), kFs, f, record));
    oracle_scr_max = std::max(oracle_scr_max, oracle::tone_excess_db(ws.samples().first(50 * record), kFs, f, record));
  }
  const bool pass = rp.tone_freqs_hz == kToneFreqs && rp.min_excess_db() >= 10.0 && rs.max_excess_db() <= 3.0 &&
                    oracle_plain_min >= 10.0 && oracle_scr_max <= 3.0 && runtime < 120.0;
  return {pass, fmt("unscrambled min %.2f dB (>= 10), scrambled max %.2f dB (<= 3); exact DFT %.2f / %.2f; %.1f s",
                    rp.min_excess_db(), rs.max_excess_db(), oracle_plain_min, oracle_scr_max, runtime)};
}

// 8-tap 4-bit triangle against the continuous triangle.
Verdict template_fidelity() {
  const double fc = 4.5e9;
  const double pw = 2e-9;
  const double bw_ref = oracle::triangle_mainlobe_bw_hz(pw);
  const double sl_ref = oracle::kTrianglePeakSidelobeDbc;
  const auto pulse = shape_pulse(quantize_template(8), pw, fc, +1, kFs);
  const auto psd = pulse_train_psd(pulse, std::size_t{1} << 18).band(fc - 4.0 / pw, fc + 4.0 / pw);
  const auto m = sidelobe_metrics(psd, fc);
  const double bw_err = m.mainlobe_bw_10db_hz / bw_ref - 1.0;
  const double sl_err = m.peak_sidelobe_dbc - sl_ref;
  const bool pass = std::abs(bw_err) <= 0.10 && std::abs(sl_err) <= 3.0;
  return {pass, fmt("main lobe %.4g Hz vs %.4g (%+.1f %%), sidelobe %.2f dBc vs %.2f (%+.2f dB)", m.mainlobe_bw_10db_hz,
                    bw_ref, 100.0 * bw_err, m.peak_sidelobe_dbc, sl_ref, sl_err)};
}

// Calibrated-AWGN Monte Carlo against Q(sqrt(Eb/N0)).
Verdict ber_oracle() {
  const auto t0 = Clock::now();
  const std::size_t n = 400000;
  const double points[] = {8.0, 10.0, 12.0};
  const double q[] = {oracle::kQ_8dB, oracle::kQ_10dB, oracle::kQ_12dB};
  bool pass = true;
  std::string detail;
  for (int i = 0; i < 3; ++i) {
    ChannelConfig ch;
    ch.calibrated_ebn0_db = points[i];
    const auto r = monte_carlo_ber(TxConfig{}, ch, RxConfig{}, n, 100 + static_cast<std::uint64_t>(i));
    const double tol = oracle::binomial_3sigma(q[i], static_cast<double>(n));
    pass = pass && std::abs(r.ber - q[i]) <= tol;
    detail += fmt("%g dB: %.3e vs %.3e (3s %.1e); ", points[i], r.ber, q[i], tol);
  }
  const double runtime = seconds_since(t0);
  pass = pass && runtime < 300.0;
  return {pass, detail + fmt("%zu bits each, %.1f s", n, runtime)};
}

// End-to-end link at the nominal parameters.
Verdict nominal_link() {
  struct Point {
    double d;
    double rate;
  };
  bool pass = true;
  std::string detail;
  for (const auto& p : {Point{1.0, 500e6}, Point{1.5, 375e6}}) {
    TxConfig tx;
    tx.data_rate_bps = p.rate;
    ChannelConfig ch;
    ch.distance_m = p.d;
    const auto budget = link_budget(ch, tx.p_out_dbm, p.rate);
    const auto r = monte_carlo_ber(tx, ch, RxConfig{}, 100000, 7);
    pass = pass && r.ber < 1e-4;
    detail += fmt("(%.1f m, %.0f Mb/s) Eb/N0 %.2f dB: %zu errors in %zu; ", p.d, p.rate / 1e6, budget.ebn0_db,
                  r.n_errors, r.n_bits);
  }
  return {pass, detail};
}

Verdict link_numbers() {
  const ChannelConfig ch;
  const auto b = link_budget(ch, 1.4, 500e6);
  const double fspl = fspl_db(1.0, 4.6e9);
  const bool pass = std::abs(fspl - 45.70) <= 0.01 && std::abs(b.p_rx_dbm - (-55.00)) <= 0.01 &&
                    std::abs(b.noise_floor_dbm - (-83.77)) <= 0.01 && std::abs(fspl - oracle::kFspl1m4p6GHz) < 1e-3;
  return {pass, fmt("fspl %.4f dB, p_rx %.4f dBm, noise floor %.4f dBm", fspl, b.p_rx_dbm, b.noise_floor_dbm)};
}

Verdict efficiency() {
  const auto a = efficiency_metrics(13.2, 800e6, 1.0);
  const auto b = efficiency_metrics(13.2, 500e6, 1.0);
  // Exact to double precision.
  const bool pass = std::abs(a.energy_pj_per_bit - 16.5) < 1e-12 && std::abs(b.normalized_pj_per_bit_per_m - 26.4) < 1e-12;
  return {pass, fmt("%.12g pJ/b at 800 Mb/s, %.12g pJ/b/m at 500 Mb/s and 1 m", a.energy_pj_per_bit,
                    b.normalized_pj_per_bit_per_m)};
}

Verdict jitter() {
  const auto prof = calibrate(PhaseNoiseSpec{});
  const double rate = 1e9;
  const std::size_t n = 1000000;
  const Waveform phi(phase_noise_process(n, rate, prof, 2024), rate);
  const auto whole = psd_welch(phi, n, 0.0, Window::rect);
  const double j = std::sqrt(whole.band_power_w(1e4, 1e8)) / (2.0 * oracle::kPi * 5.6e9);

  const auto avg = psd_welch(phi, 20000, 0.5, Window::hann);
  auto ssb = [&](double f) {
    double acc = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < avg.size(); ++i) {
      if (std::abs(avg.freqs_hz[i] - f) <= 0.1 * f) {
        acc += avg.w_per_hz(i);
        ++count;
      }
    }
    return 10.0 * std::log10(acc / count / 2.0);
  };
  const double l1 = ssb(1e6);
  const double l100 = ssb(1e8);
  const bool pass = std::abs(j / 18.9e-12 - 1.0) <= 0.15 && std::abs(l1 + 80.0) <= 2.0 && std::abs(l100 + 101.0) <= 2.0;
  return {pass, fmt("rms jitter %.2f ps (18.9 +/- 15 %%), L(1 MHz) %.2f dBc/Hz, L(100 MHz) %.2f dBc/Hz", j * 1e12, l1,
                    l100)};
}

Verdict properties() {
  std::string failed;
  // Parseval.
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    TxConfig tx;
    tx.scramble_seed = seed;
    const auto w = modulate(prbs_bits(4000, seed), tx);
    const auto psd = psd_welch(w, 8000, 0.5, Window::hann);
    if (std::abs(10.0 * std::log10(psd.total_power_w() / mean_power(w))) >= 0.5) {
      failed += "parseval ";
    }
  }
  // Scrambling changes signs only.
  {
    TxConfig plain;
    plain.scramble = false;
    const auto bits = prbs_bits(3000, 9);
    const auto a = modulate(bits, plain);
    const auto b = modulate(bits, TxConfig{});
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      worst = std::max(worst, std::abs(std::abs(a[i]) - std::abs(b[i])));
    }
    if (worst > 1e-12) {
      failed += "scrambling ";
    }
  }
  // Mask margin shifts by exactly -g dB.
  {
    const auto w = modulate(prbs_bits(10000, 2), TxConfig{});
    const auto mask = fcc_indoor_mask();
    const double base = check_mask(psd_welch(w, 20000, 0.5, Window::hann), mask).worst_margin_db;
    for (double g : {-20.0, -3.0, 6.0, 17.0}) {
      const double m = check_mask(psd_welch(w.scaled(std::pow(10.0, g / 20.0)), 20000, 0.5, Window::hann), mask)
                           .worst_margin_db;
      if (std::abs(m - base + g) > 1e-9) {
        failed += "mask ";
        break;
      }
    }
  }
  // Identical results for any worker count.
  {
    ChannelConfig ch;
    ch.calibrated_ebn0_db = 7.0;
    const auto r1 = monte_carlo_ber(TxConfig{}, ch, RxConfig{}, 50000, 42, 1);
    const auto r3 = monte_carlo_ber(TxConfig{}, ch, RxConfig{}, 50000, 42, 3);
    if (r1.n_errors != r3.n_errors || r1.n_errors == 0) {
      failed += "parallel ";
    }
  }
  // Config serialization is a fixed point.
  {
    RunConfig cfg;
    cfg.channel.distance_m = 1.5;
    cfg.tx.data_rate_bps = 375e6;
    cfg.rx.detector = Detector::energy;
    cfg.tx.phase_noise = PhaseNoiseSpec{};
    const auto s = serialize_run_config(cfg);
    std::istringstream in(s);
    if (serialize_run_config(parse_run_config(in)) != s) {
      failed += "config ";
    }
  }
  return {failed.empty(), failed.empty() ? "parseval, scrambling, mask, parallel, config" : "failed: " + failed};
}

} // namespace

int main() {
  const std::vector<std::function<Verdict()>> criteria = {tones,        template_fidelity, ber_oracle, nominal_link,
                                                          link_numbers, efficiency,        jitter,     properties};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v{false, ""};
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    std::printf("criterion %zu: %s  %s\n", i + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
