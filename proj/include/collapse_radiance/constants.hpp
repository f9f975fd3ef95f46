#pragma once

// Physical constants (CODATA 2018) and the small numerical kernels everything
// else is built from. The library works in SI internally; energies cross API
// boundaries in keV and are converted here, nowhere else.

#include <cmath>
#include <numbers>

#include "collapse_radiance/errors.hpp"

namespace collapse_radiance {

struct PhysicalConstants {
  //! CODATA 2018 exact value [J s]
  static constexpr double h_planck = 6.62607015e-34;
  //! reduced Planck constant h / 2 pi [J s]
  static constexpr double hbar = h_planck / (2.0 * std::numbers::pi);
  //! CODATA 2018 exact value [m/s]
  static constexpr double c_light = 299792458.0;
  //! CODATA 2018 exact value [C]
  static constexpr double e_charge = 1.602176634e-19;
  //! CODATA 2018 vacuum electric permittivity [F/m]
  static constexpr double epsilon0 = 8.8541878128e-12;
  //! reference nucleon mass m0 entering the collapse-model master equations;
  //! CODATA 2018 proton mass [kg]
  static constexpr double m0_nucleon = 1.67262192369e-27;
  //! CODATA 2018 Newtonian constant of gravitation [m^3 kg^-1 s^-2]
  static constexpr double g_newton = 6.67430e-11;
  //! CODATA 2018 Bohr radius [m]
  static constexpr double bohr_radius = 5.29177210903e-11;
  //! one keV in joule (exact, from the exact elementary charge) [J]
  static constexpr double kev_in_joule = 1.0e3 * e_charge;
  //! hbar * c [J m]
  static constexpr double hbar_c = hbar * c_light;
};

//! Energy conversion, keV -> J. Exact scaling by the defined keV.
inline constexpr double kev_to_joule(double energy_kev) {
  return energy_kev * PhysicalConstants::kev_in_joule;
}

//! Energy conversion, J -> keV.
inline constexpr double joule_to_kev(double energy_joule) {
  return energy_joule / PhysicalConstants::kev_in_joule;
}

//! sin(x)/x, stable at the origin. Below |x| = 1e-4 the truncated Taylor
//! series 1 - x^2/6 + x^4/120 is used; the first omitted term is x^6/5040
//! ~ 2e-28 at the switch point, far below double rounding, so the branch
//! join is smooth to ~1e-16 relative.
inline double sinc(double x) {
  if (!std::isfinite(x)) {
    throw DomainError("sinc: non-finite argument");
  }
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + (x2 * x2) / 120.0;
  }
  return std::sin(x) / x;
}

//! Dimensionless photon argument b = 2 pi d / lambda_gamma = d E / (hbar c)
//! for a pair separation d [m] and photon energy E [keV].
inline double photon_argument(double distance_m, double energy_kev) {
  if (!std::isfinite(distance_m) || distance_m < 0.0) {
    throw DomainError("photon_argument: distance must be finite and >= 0");
  }
  if (!std::isfinite(energy_kev) || energy_kev <= 0.0) {
    throw DomainError("photon_argument: energy must be finite and > 0");
  }
  return distance_m * kev_to_joule(energy_kev) / PhysicalConstants::hbar_c;
}

//! Photon energies below this are outside the semiclassical validity range of
//! the emission formulas; evaluations there succeed but carry a warning flag.
inline constexpr double sub_kev_threshold_kev = 1.0;

}  // namespace collapse_radiance
