#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace isac {

inline constexpr double kSpeedOfLight = 299'792'458.0;     // m/s
inline constexpr double kThermalNoiseDbmPerHz = -174.0;
inline constexpr double kPi = std::numbers::pi;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double lin)
{
    if (lin <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(lin);
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

inline double watts_to_dbm(double w) { return linear_to_db(w * 1e3); }

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

inline double wavelength(double carrier_hz) { return kSpeedOfLight / carrier_hz; }

}  // namespace isac
