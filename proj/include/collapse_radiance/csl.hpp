#pragma once

// Spontaneous X-ray emission rates for the Continuous Spontaneous
// Localization model. The general rate is the pair sum
//
//   dG/dE = hbar e^2 lambda / (12 pi^2 eps0 c^3 m0^2 r_C^2 E) * S(E)
//   S(E)  = sum over pair terms of sign * mult * sinc(d E / hbar c)
//           * exp(-d^2 / 4 r_C^2) * (3 - d^2 / 2 r_C^2)
//
// with the two-point correlation kernel
//
//   f_ij = (m_i m_j / 2 r_C^2) exp(-d^2 / 4 r_C^2) (3 - d^2 / 2 r_C^2),
//
// the limit of a double integral over the particles' mass densities; the
// extended-density version of that integral is kept as a quadrature oracle.
// The simple rate keeps only the incoherent terms 3 (N_p^2 + N_e); the
// long-wavelength constant term is proportional to (N_p - N_e)^2. Colored
// (non-Markovian) variants multiply any of these by the cutoff filter
// E_c^2 / (E_c^2 + E^2).

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "collapse_radiance/atom.hpp"
#include "collapse_radiance/constants.hpp"
#include "collapse_radiance/errors.hpp"
#include "collapse_radiance/quadrature.hpp"

namespace collapse_radiance {

//! CSL model parameters.
struct CslParams {
  double lambda_per_s = 0.0;   //!< collapse rate lambda [1/s]
  double corr_length_m = 0.0;  //!< correlation length r_C [m]
  //! cutoff energy E_c = hbar * Omega of the colored variant [keV];
  //! unset means white noise (Markovian)
  std::optional<double> e_cutoff_kev;
};

inline void validate(const CslParams& p) {
  if (!(p.lambda_per_s > 0.0) || !std::isfinite(p.lambda_per_s)) {
    throw DomainError("CslParams: lambda must be finite and > 0");
  }
  if (!(p.corr_length_m > 0.0) || !std::isfinite(p.corr_length_m)) {
    throw DomainError("CslParams: corr_length must be finite and > 0");
  }
  if (p.e_cutoff_kev && (!(*p.e_cutoff_kev > 0.0) ||
                         !std::isfinite(*p.e_cutoff_kev))) {
    throw DomainError("CslParams: e_cutoff must be finite and > 0");
  }
}

//! Colored-noise filter E_c^2 / (E_c^2 + E^2); equals 1/2 at E = E_c and
//! tends to 1 in the Markovian limit E_c -> infinity.
inline double colored_filter(double energy_kev, double e_cutoff_kev) {
  if (!(energy_kev > 0.0) || !std::isfinite(energy_kev)) {
    throw DomainError("colored_filter: energy must be finite and > 0");
  }
  if (!(e_cutoff_kev > 0.0) || !std::isfinite(e_cutoff_kev)) {
    throw DomainError("colored_filter: cutoff must be finite and > 0");
  }
  const double ec2 = e_cutoff_kev * e_cutoff_kev;
  return ec2 / (ec2 + energy_kev * energy_kev);
}

//! Point-particle CSL two-point kernel f_ij [kg^2 / m^2].
inline double csl_f_ij_pointlike(double distance_m, double corr_length_m,
                                 double mass_i_kg, double mass_j_kg) {
  if (!(corr_length_m > 0.0) || !std::isfinite(corr_length_m)) {
    throw DomainError("csl_f_ij_pointlike: corr_length must be > 0");
  }
  if (!(distance_m >= 0.0) || !std::isfinite(distance_m)) {
    throw DomainError("csl_f_ij_pointlike: distance must be >= 0");
  }
  if (!(mass_i_kg >= 0.0) || !(mass_j_kg >= 0.0)) {
    throw DomainError("csl_f_ij_pointlike: masses must be >= 0");
  }
  const double x = distance_m * distance_m /
                   (4.0 * corr_length_m * corr_length_m);
  return mass_i_kg * mass_j_kg / (2.0 * corr_length_m * corr_length_m) *
         std::exp(-x) * (3.0 - 2.0 * x);
}

//! Gaussian full width at half maximum -> standard deviation.
inline constexpr double fwhm_to_sigma(double fwhm) {
  // 2 sqrt(2 ln 2)
  return fwhm / 2.3548200450309493;
}

//! Extended-density CSL kernel: the double integral of the collapse kernel
//! over two spherical Gaussian mass densities, evaluated by quadrature in the
//! relative coordinate. Density widths are full widths at half maximum of the
//! single-particle density profiles; width 0 is accepted and short-circuits
//! to the pointlike kernel. Reduction used: with u = s' - s distributed as an
//! isotropic Gaussian of per-axis variance t^2 = sigma_i^2 + sigma_j^2,
//!
//!   f_ij = m_i m_j int_0^inf du 4 pi u^2 rho_t(u) Aang(u, d),
//!   Aang = (1 / 2 d u) int_{|d-u|}^{d+u} dv v K(v),   K = pointlike kernel,
//!
//! and the inner integral is elementary:
//!   int v K dv = [(2 y - 1) e^{-y}],  y = v^2 / 4 r_C^2.
//! Throws QuadratureError (with the achieved estimate) on non-convergence.
inline double csl_f_ij_extended(double distance_m, double corr_length_m,
                                double mass_i_kg, double mass_j_kg,
                                double width_i_m, double width_j_m,
                                double rel_tol = 1e-9) {
  if (!(width_i_m >= 0.0) || !(width_j_m >= 0.0) ||
      !std::isfinite(width_i_m) || !std::isfinite(width_j_m)) {
    throw DomainError("csl_f_ij_extended: widths must be finite and >= 0");
  }
  if (width_i_m == 0.0 && width_j_m == 0.0) {
    return csl_f_ij_pointlike(distance_m, corr_length_m, mass_i_kg,
                              mass_j_kg);
  }
  if (!(corr_length_m > 0.0) || !(distance_m >= 0.0)) {
    throw DomainError("csl_f_ij_extended: bad distance or corr_length");
  }
  const double si = fwhm_to_sigma(width_i_m);
  const double sj = fwhm_to_sigma(width_j_m);
  const double t2 = si * si + sj * sj;
  const double t = std::sqrt(t2);
  const double rc2 = corr_length_m * corr_length_m;
  const double norm =
      1.0 / std::pow(2.0 * std::numbers::pi * t2, 1.5);  // rho_t(0)

  // int_{v1}^{v2} v K(v) dv, written with expm1 so nearly equal bounds do not
  // cancel: e^{-y1} [(2 y2 - 1) expm1(-(y2 - y1)) + 2 (y2 - y1)] / (2 r_C^2)
  // carries the kernel's 1/(2 r_C^2) normalization separately below.
  const auto inner = [&](double v1, double v2) {
    const double y1 = v1 * v1 / (4.0 * rc2);
    const double y2 = v2 * v2 / (4.0 * rc2);
    const double dy = y2 - y1;
    return std::exp(-y1) * ((2.0 * y2 - 1.0) * std::expm1(-dy) + 2.0 * dy);
  };

  const double d = distance_m;
  const auto integrand = [&](double u) {
    if (u == 0.0) return 0.0;  // u^2 factor; avoids 0/0 in the d > 0 branch
    const double rho = norm * std::exp(-u * u / (2.0 * t2));
    double ang;
    if (d == 0.0 || u >= 1e12 * d) {
      // angular average degenerates to K itself
      const double y = u * u / (4.0 * rc2);
      ang = std::exp(-y) * (3.0 - 2.0 * y);
    } else {
      ang = inner(std::abs(d - u), d + u) * (2.0 * rc2) / (2.0 * d * u);
    }
    return 4.0 * std::numbers::pi * u * u * rho * ang;
  };

  // The u-Gaussian dies by 12 t; K varies on the r_C scale and is bounded.
  const double upper = 12.0 * t;
  const auto q = integrate_adaptive(integrand, 0.0, upper, rel_tol,
                                    /*abs_scale=*/3.0);
  return mass_i_kg * mass_j_kg / (2.0 * rc2) * q.value;
}

//! Structure factor S(E): fixed-order sum over pair terms of
//! sign * mult * sinc * gaussian * polynomial. May legitimately be negative
//! at intermediate energies. Incoherent limit is 3 (N_p^2 + N_e).
inline double csl_structure_factor(std::span<const PairTerm> terms,
                                   double energy_kev, double corr_length_m) {
  if (!(corr_length_m > 0.0) || !std::isfinite(corr_length_m)) {
    throw DomainError("csl_structure_factor: corr_length must be > 0");
  }
  double sum = 0.0;
  for (const auto& term : terms) {
    const double b = photon_argument(term.distance_m, energy_kev);
    const double x = term.distance_m * term.distance_m /
                     (4.0 * corr_length_m * corr_length_m);
    sum += charge_sign(term.kind) * static_cast<double>(term.multiplicity) *
           sinc(b) * std::exp(-x) * (3.0 - 2.0 * x);
  }
  return sum;
}

inline double csl_structure_factor(const Atom& atom, double energy_kev,
                                   double corr_length_m,
                                   const PairGeometry& geom = {}) {
  const auto terms = enumerate_pairs(atom, geom);
  return csl_structure_factor(terms, energy_kev, corr_length_m);
}

//! Energy-independent prefactor of the general CSL rate,
//! hbar e^2 lambda / (12 pi^2 eps0 c^3 m0^2 r_C^2) [1/s]. Dividing a rate
//! by it and multiplying by E reproduces the bare structure factor.
inline double csl_rate_prefactor(const CslParams& p) {
  validate(p);
  using pc = PhysicalConstants;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return pc::hbar * pc::e_charge * pc::e_charge * p.lambda_per_s /
         (12.0 * pi2 * pc::epsilon0 * pc::c_light * pc::c_light * pc::c_light *
          pc::m0_nucleon * pc::m0_nucleon * p.corr_length_m * p.corr_length_m);
}

namespace detail {

inline void check_energy(double energy_kev, const char* who) {
  if (!(energy_kev > 0.0) || !std::isfinite(energy_kev)) {
    throw DomainError(std::string(who) + ": energy must be finite and > 0");
  }
}

inline double apply_filter(double rate, double energy_kev,
                           const std::optional<double>& e_cutoff_kev) {
  // colored = white * filter, by construction a single extra multiply so the
  // factorization is exact in floating point
  return e_cutoff_kev ? rate * colored_filter(energy_kev, *e_cutoff_kev)
                      : rate;
}

}  // namespace detail

//! General CSL emission rate from precomputed pair terms [1/(s keV)].
//! Valid above ~1 keV (semiclassical regime); lower energies evaluate but
//! spectra flag them.
inline double csl_rate_general(std::span<const PairTerm> terms,
                               double energy_kev, const CslParams& params) {
  validate(params);
  detail::check_energy(energy_kev, "csl_rate_general");
  const double rate = csl_rate_prefactor(params) *
                      csl_structure_factor(terms, energy_kev,
                                           params.corr_length_m) /
                      energy_kev;
  return detail::apply_filter(rate, energy_kev, params.e_cutoff_kev);
}

inline double csl_rate_general(const Atom& atom, double energy_kev,
                               const CslParams& params,
                               const PairGeometry& geom = {}) {
  const auto terms = enumerate_pairs(atom, geom);
  return csl_rate_general(terms, energy_kev, params);
}

//! Fully incoherent CSL rate, Eq-level equivalent of
//! hbar e^2 lambda (N_p^2 + N_e) / (4 pi^2 eps0 c^3 r_C^2 m0^2 E);
//! computed as prefactor * 3 (N_p^2 + N_e) / E so the general rate converges
//! to it bit-consistently at high energy.
inline double csl_rate_simple(const Atom& atom, double energy_kev,
                              const CslParams& params) {
  validate(params);
  validate(atom);
  detail::check_energy(energy_kev, "csl_rate_simple");
  const double np = atom.n_protons;
  const double ne = atom.n_electrons();
  const double rate =
      csl_rate_prefactor(params) * 3.0 * (np * np + ne) / energy_kev;
  return detail::apply_filter(rate, energy_kev, params.e_cutoff_kev);
}

//! Long-wavelength limit: coherent cancellation leaves (N_p - N_e)^2, so the
//! rate vanishes identically for neutral atoms.
inline double csl_rate_longwave(const Atom& atom, double energy_kev,
                                const CslParams& params) {
  validate(params);
  validate(atom);
  detail::check_energy(energy_kev, "csl_rate_longwave");
  const double dq = static_cast<double>(atom.n_protons) - atom.n_electrons();
  const double rate =
      csl_rate_prefactor(params) * 3.0 * dq * dq / energy_kev;
  return detail::apply_filter(rate, energy_kev, params.e_cutoff_kev);
}

}  // namespace collapse_radiance
