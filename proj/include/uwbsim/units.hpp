#pragma once

namespace uwbsim {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299'792'458.0;    // m/s
inline constexpr double kBoltzmann = 1.380649e-23;        // J/K
inline constexpr double kReferenceTemperature = 290.0;    // K
inline constexpr double kThermalNoiseDbmPerHz = -174.0;   // kT at 290 K, rounded as in link budgets

/// Floor used when a power density is exactly zero (log of zero).
inline constexpr double kPsdFloorDbmPerMhz = -300.0;

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);      // power ratio
double linear_to_db(double ratio);   // power ratio

/// W/Hz <-> dBm/MHz. Zero density maps to kPsdFloorDbmPerMhz.
double w_per_hz_to_dbm_per_mhz(double w_per_hz);
double dbm_per_mhz_to_w_per_hz(double dbm_per_mhz);

/// One-sided thermal noise density in dBm/Hz at the given temperature and noise figure:
/// -174 dBm/Hz scaled by T/290, plus NF.
double noise_density_dbm_per_hz(double temperature_k, double nf_db);

} // namespace uwbsim
