#include "uwbsim/template_opt.hpp"

#include "uwbsim/errors.hpp"
#include "uwbsim/units.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace uwbsim {
namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-12) {
    return 1.0;
  }
  return std::sin(kPi * x) / (kPi * x);
}

// Baseband transform of one unit tap occupying [k*tau, (k+1)*tau).
std::complex<double> tap_transform(double nu, std::size_t k, double tau) {
  const double centre = (static_cast<double>(k) + 0.5) * tau;
  return tau * sinc(nu * tau) * std::polar(1.0, -2.0 * kPi * nu * centre);
}

struct Grid {
  std::vector<double> freqs;
  // basis[k][i]: passband contribution of tap k (code 15) at freqs[i].
  std::vector<std::vector<std::complex<double>>> basis;
};

Grid make_grid(std::size_t n_taps, double pulse_width_s, double carrier_hz, double f_lo, double f_hi,
               std::size_t n_points) {
  if (n_points < 3 || !(f_hi > f_lo)) {
    throw ParameterError("template_psd: need >= 3 points over a non-empty span");
  }
  Grid g;
  g.freqs.resize(n_points);
  const double df = (f_hi - f_lo) / static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) {
    g.freqs[i] = f_lo + df * static_cast<double>(i);
  }
  const double tau = pulse_width_s / static_cast<double>(n_taps);
  g.basis.assign(n_taps, std::vector<std::complex<double>>(n_points));
  for (std::size_t k = 0; k < n_taps; ++k) {
    for (std::size_t i = 0; i < n_points; ++i) {
      const double f = g.freqs[i];
      g.basis[k][i] = 0.5 * (tap_transform(f - carrier_hz, k, tau) + tap_transform(f + carrier_hz, k, tau)) /
                      static_cast<double>(PulseTemplate::kMaxCode);
    }
  }
  return g;
}

PsdEstimate psd_from_grid(const Grid& g, std::span<const int> taps, double pulse_width_s) {
  PsdEstimate est;
  est.freqs_hz = g.freqs;
  est.rbw_hz = g.freqs[1] - g.freqs[0];
  est.dbm_per_mhz.resize(g.freqs.size());
  for (std::size_t i = 0; i < g.freqs.size(); ++i) {
    std::complex<double> acc{};
    for (std::size_t k = 0; k < taps.size(); ++k) {
      if (taps[k] != 0) {
        acc += static_cast<double>(taps[k]) * g.basis[k][i];
      }
    }
    est.dbm_per_mhz[i] = w_per_hz_to_dbm_per_mhz(2.0 * std::norm(acc) / pulse_width_s);
  }
  return est;
}

struct Candidate {
  std::vector<int> taps;
  SidelobeMetrics metrics;
  double energy;
};

// True if a is preferred over b.
bool better(const Candidate& a, const Candidate& b) {
  constexpr double kTieDb = 1e-9;
  if (a.metrics.peak_sidelobe_dbc < b.metrics.peak_sidelobe_dbc - kTieDb) {
    return true;
  }
  if (a.metrics.peak_sidelobe_dbc > b.metrics.peak_sidelobe_dbc + kTieDb) {
    return false;
  }
  if (a.energy != b.energy) {
    return a.energy > b.energy;
  }
  return a.taps < b.taps;
}

class Evaluator {
public:
  Evaluator(std::size_t n_taps, double pw, double fc, double max_bw)
      : grid_(make_grid(n_taps, pw, fc, fc - 4.0 / pw, fc + 4.0 / pw, 257)), pw_(pw), fc_(fc), max_bw_(max_bw) {}

  std::optional<Candidate> evaluate(const std::vector<int>& taps) {
    ++count_;
    if (std::all_of(taps.begin(), taps.end(), [](int c) { return c == 0; })) {
      return std::nullopt;
    }
    const auto psd = psd_from_grid(grid_, taps, pw_);
    SidelobeMetrics m{};
    try {
      m = sidelobe_metrics(psd, fc_);
    } catch (const ParameterError&) {
      return std::nullopt;  // degenerate shape: main lobe not around the carrier
    }
    if (m.mainlobe_bw_10db_hz > max_bw_) {
      return std::nullopt;
    }
    double e = 0.0;
    for (int c : taps) {
      e += static_cast<double>(c) * c;
    }
    return Candidate{taps, m, e};
  }

  [[nodiscard]] std::size_t count() const { return count_; }

private:
  Grid grid_;
  double pw_;
  double fc_;
  double max_bw_;
  std::size_t count_ = 0;
};

std::vector<int> expand(const std::vector<int>& free, std::size_t n_taps, bool symmetric) {
  if (!symmetric) {
    return free;
  }
  std::vector<int> taps(n_taps);
  for (std::size_t k = 0; k < free.size(); ++k) {
    taps[k] = free[k];
    taps[n_taps - 1 - k] = free[k];
  }
  return taps;
}

} // namespace

PsdEstimate template_psd(const PulseTemplate& tmpl, double pulse_width_s, double carrier_hz, double f_lo_hz,
                         double f_hi_hz, std::size_t n_points) {
  const auto g = make_grid(tmpl.n_taps(), pulse_width_s, carrier_hz, f_lo_hz, f_hi_hz, n_points);
  return psd_from_grid(g, tmpl.taps(), pulse_width_s);
}

PsdEstimate template_psd(const PulseTemplate& tmpl, double pulse_width_s, double carrier_hz) {
  return template_psd(tmpl, pulse_width_s, carrier_hz, carrier_hz - 4.0 / pulse_width_s,
                      carrier_hz + 4.0 / pulse_width_s, 257);
}

TemplateSearchResult optimize_template(std::size_t n_taps, double max_mainlobe_bw_hz, bool symmetric,
                                       double pulse_width_s, double carrier_hz) {
  if (n_taps < 2 || n_taps > 32) {
    throw ParameterError("optimize_template: n_taps must be in [2, 32]");
  }
  if (!(max_mainlobe_bw_hz > 0.0) || !(pulse_width_s > 0.0) || !(carrier_hz > 4.0 / pulse_width_s)) {
    throw ParameterError("optimize_template: bandwidth, pulse width and carrier must be positive "
                         "with the carrier above the analysis span");
  }
  const std::size_t n_free = symmetric ? (n_taps + 1) / 2 : n_taps;
  Evaluator eval(n_taps, pulse_width_s, carrier_hz, max_mainlobe_bw_hz);
  std::optional<Candidate> best;
  auto consider = [&](const std::vector<int>& free) {
    auto c = eval.evaluate(expand(free, n_taps, symmetric));
    if (c && (!best || better(*c, *best))) {
      best = std::move(c);
      return true;
    }
    return false;
  };

  TemplateSearchResult result;
  constexpr std::size_t kMaxExhaustiveFree = 5;
  if (n_free <= kMaxExhaustiveFree) {
    result.exhaustive = true;
    std::vector<int> free(n_free, 0);
    const std::size_t total = std::size_t{1} << (4 * n_free);
    for (std::size_t idx = 0; idx < total; ++idx) {
      for (std::size_t k = 0; k < n_free; ++k) {
        free[k] = static_cast<int>((idx >> (4 * (n_free - 1 - k))) & 0xF);
      }
      consider(free);
    }
  } else {
    const auto start = quantize_template(n_taps);
    std::vector<int> free(start.taps().begin(), start.taps().begin() + static_cast<std::ptrdiff_t>(n_free));
    consider(free);
    bool improved = true;
    while (improved && best) {
      improved = false;
      for (std::size_t k = 0; k < n_free; ++k) {
        std::vector<int> trial(best->taps.begin(), best->taps.begin() + static_cast<std::ptrdiff_t>(n_free));
        for (int v = 0; v <= PulseTemplate::kMaxCode; ++v) {
          trial[k] = v;
          improved = consider(trial) || improved;
        }
      }
    }
  }
  result.evaluated = eval.count();
  if (best) {
    result.best = PulseTemplate(best->taps, symmetric);
    result.metrics = best->metrics;
  }
  return result;
}

} // namespace uwbsim
