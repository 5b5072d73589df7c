#pragma once

#include "uwbsim/channel.hpp"
#include "uwbsim/compliance.hpp"
#include "uwbsim/rx.hpp"
#include "uwbsim/spectrum.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace uwbsim {

struct LinkRow {
  LinkBudgetReport budget;
  EfficiencyMetrics efficiency;
};

struct BerRow {
  double distance_m;
  double rate_bps;
  Detector detector;
  BerResult result;
  std::optional<double> ebn0_db;  // calibrated-AWGN sweeps only
};

nlohmann::json to_json(const MaskReport& r);
nlohmann::json to_json(const ToneReport& r);
nlohmann::json to_json(const LinkRow& r);
nlohmann::json to_json(const BerRow& r);
nlohmann::json to_json(const PsdEstimate& p);

/// Two columns: freq_hz,dbm_per_mhz. One row per bin.
void write_psd_csv(std::ostream& os, const PsdEstimate& psd);
void write_mask_csv(std::ostream& os, const MaskReport& r);
void write_tones_csv(std::ostream& os, const ToneReport& r);
void write_link_csv(std::ostream& os, const std::vector<LinkRow>& rows);
void write_link_table(std::ostream& os, const std::vector<LinkRow>& rows);

/// distance_m,rate_bps,detector,n_bits,n_errors,ber,ci95 (+ ebn0_db when any
/// row carries one).
void write_ber_csv(std::ostream& os, const std::vector<BerRow>& rows);

} // namespace uwbsim
