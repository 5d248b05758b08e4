#pragma once

#include <cmath>
#include <numbers>

namespace dpsqkd {

namespace constants {
inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double planck = 6.62607015e-34;       // J s
inline constexpr double boltzmann = 1.380649e-23;      // J/K
}  // namespace constants

/// dB -> linear power ratio.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }
inline double mw_to_dbm(double mw) { return linear_to_db(mw); }

/// Attenuation in dB/km to the power decay constant in 1/km.
inline double db_per_km_to_nepers(double db_per_km) {
  return db_per_km * std::numbers::ln10 / 10.0;
}

/// Optical frequency in THz of a vacuum wavelength given in nm.
inline double wavelength_nm_to_thz(double nm) {
  return constants::speed_of_light / (nm * 1e-9) / 1e12;
}

inline double thz_to_wavelength_nm(double thz) {
  return constants::speed_of_light / (thz * 1e12) * 1e9;
}

/// Photons per second carried by an optical power (mW) at a wavelength (nm).
inline double photon_flux(double power_mw, double wavelength_nm) {
  const double energy = constants::planck * constants::speed_of_light / (wavelength_nm * 1e-9);
  return power_mw * 1e-3 / energy;
}

}  // namespace dpsqkd
