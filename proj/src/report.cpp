#include "uwbsim/report.hpp"

#include <cstdio>
#include <iomanip>
#include <ostream>

namespace uwbsim {
namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

} // namespace

nlohmann::json to_json(const MaskReport& r) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& x : r.violations) {
    v.push_back({{"freq_hz", x.freq_hz}, {"excess_db", x.excess_db}});
  }
  return {{"pass", r.pass},
          {"worst_margin_db", r.worst_margin_db},
          {"worst_freq_hz", r.worst_freq_hz},
          {"violations", v}};
}

nlohmann::json to_json(const ToneReport& r) {
  return {{"tone_freqs_hz", r.tone_freqs_hz}, {"excess_db", r.excess_db}, {"max_excess_db", r.max_excess_db()}};
}

nlohmann::json to_json(const LinkRow& r) {
  const auto& b = r.budget;
  return {{"distance_m", b.distance_m},
          {"rate_bps", b.data_rate_bps},
          {"p_tx_dbm", b.p_tx_dbm},
          {"fspl_db", b.fspl_db},
          {"p_rx_dbm", b.p_rx_dbm},
          {"noise_floor_dbm", b.noise_floor_dbm},
          {"snr_db", b.snr_db},
          {"ebn0_db", b.ebn0_db},
          {"required_ebn0_db", b.required_ebn0_db},
          {"margin_db", b.margin_db},
          {"energy_pj_per_bit", r.efficiency.energy_pj_per_bit},
          {"normalized_pj_per_bit_per_m", r.efficiency.normalized_pj_per_bit_per_m}};
}

nlohmann::json to_json(const BerRow& r) {
  nlohmann::json j = {{"distance_m", r.distance_m},
                      {"rate_bps", r.rate_bps},
                      {"detector", std::string(to_string(r.detector))},
                      {"n_bits", r.result.n_bits},
                      {"n_errors", r.result.n_errors},
                      {"ber", r.result.ber},
                      {"ci95", r.result.ci95_halfwidth}};
  if (r.ebn0_db) {
    j["ebn0_db"] = *r.ebn0_db;
  }
  return j;
}

nlohmann::json to_json(const PsdEstimate& p) {
  return {{"rbw_hz", p.rbw_hz}, {"freqs_hz", p.freqs_hz}, {"dbm_per_mhz", p.dbm_per_mhz}};
}

void write_psd_csv(std::ostream& os, const PsdEstimate& psd) {
  os << "freq_hz,dbm_per_mhz\n";
  for (std::size_t i = 0; i < psd.size(); ++i) {
    os << g17(psd.freqs_hz[i]) << ',' << g17(psd.dbm_per_mhz[i]) << '\n';
  }
}

void write_mask_csv(std::ostream& os, const MaskReport& r) {
  os << "pass,worst_margin_db,worst_freq_hz,n_violations\n"
     << (r.pass ? "true" : "false") << ',' << g17(r.worst_margin_db) << ',' << g17(r.worst_freq_hz) << ','
     << r.violations.size() << '\n';
}

void write_tones_csv(std::ostream& os, const ToneReport& r) {
  os << "tone_freq_hz,excess_db\n";
  for (std::size_t i = 0; i < r.tone_freqs_hz.size(); ++i) {
    os << g17(r.tone_freqs_hz[i]) << ',' << g17(r.excess_db[i]) << '\n';
  }
}

void write_link_csv(std::ostream& os, const std::vector<LinkRow>& rows) {
  os << "distance_m,rate_bps,p_tx_dbm,fspl_db,p_rx_dbm,noise_floor_dbm,snr_db,ebn0_db,required_ebn0_db,"
        "margin_db,energy_pj_per_bit,normalized_pj_per_bit_per_m\n";
  for (const auto& r : rows) {
    const auto& b = r.budget;
    os << g17(b.distance_m) << ',' << g17(b.data_rate_bps) << ',' << g17(b.p_tx_dbm) << ',' << g17(b.fspl_db) << ','
       << g17(b.p_rx_dbm) << ',' << g17(b.noise_floor_dbm) << ',' << g17(b.snr_db) << ',' << g17(b.ebn0_db) << ','
       << g17(b.required_ebn0_db) << ',' << g17(b.margin_db) << ',' << g17(r.efficiency.energy_pj_per_bit) << ','
       << g17(r.efficiency.normalized_pj_per_bit_per_m) << '\n';
  }
}

void write_link_table(std::ostream& os, const std::vector<LinkRow>& rows) {
  const char* head[] = {"distance_m", "rate_Mbps", "fspl_dB",    "p_rx_dBm",  "floor_dBm",
                        "snr_dB",     "ebn0_dB",   "margin_dB",  "pJ/b",      "pJ/b/m"};
  for (const char* h : head) {
    os << std::setw(12) << h;
  }
  os << '\n';
  for (const auto& r : rows) {
    const auto& b = r.budget;
    const double cells[] = {b.distance_m, b.data_rate_bps / 1e6, b.fspl_db,  b.p_rx_dbm,
                            b.noise_floor_dbm, b.snr_db,         b.ebn0_db,  b.margin_db,
                            r.efficiency.energy_pj_per_bit, r.efficiency.normalized_pj_per_bit_per_m};
    for (double c : cells) {
      os << std::setw(12) << fixed(c, 2);
    }
    os << '\n';
  }
}

void write_ber_csv(std::ostream& os, const std::vector<BerRow>& rows) {
  bool with_ebn0 = false;
  for (const auto& r : rows) {
    with_ebn0 = with_ebn0 || r.ebn0_db.has_value();
  }
  os << "distance_m,rate_bps,detector,n_bits,n_errors,ber,ci95" << (with_ebn0 ? ",ebn0_db" : "") << '\n';
  for (const auto& r : rows) {
    os << g17(r.distance_m) << ',' << g17(r.rate_bps) << ',' << to_string(r.detector) << ',' << r.result.n_bits
       << ',' << r.result.n_errors << ',' << g17(r.result.ber) << ',' << g17(r.result.ci95_halfwidth);
    if (with_ebn0) {
      os << ',' << (r.ebn0_db ? g17(*r.ebn0_db) : std::string());
    }
    os << '\n';
  }
}

} // namespace uwbsim
