#include "uwbsim/units.hpp"

#include <algorithm>
#include <cmath>

namespace uwbsim {

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1e3); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

double w_per_hz_to_dbm_per_mhz(double w_per_hz) {
  if (!(w_per_hz > 0.0)) {
    return kPsdFloorDbmPerMhz;
  }
  return std::max(kPsdFloorDbmPerMhz, 10.0 * std::log10(w_per_hz * 1e3 * 1e6));
}

double dbm_per_mhz_to_w_per_hz(double dbm_per_mhz) {
  if (dbm_per_mhz <= kPsdFloorDbmPerMhz) {
    return 0.0;
  }
  return std::pow(10.0, dbm_per_mhz / 10.0) * 1e-3 * 1e-6;
}

double noise_density_dbm_per_hz(double temperature_k, double nf_db) {
  return kThermalNoiseDbmPerHz + 10.0 * std::log10(temperature_k / kReferenceTemperature) + nf_db;
}

} // namespace uwbsim
