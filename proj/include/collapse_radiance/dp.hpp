#pragma once

// Spontaneous X-ray emission rates for the Diosi-Penrose model, in Diosi's
// original normalization (no 8 pi):
//
//   dG/dE = G e^2 / (12 pi^(5/2) eps0 c^3 R0^3 E) * S(E)
//   S(E)  = sum over pair terms of sign * mult * sinc(d E / hbar c)
//           * exp(-d^2 / 4 R0^2)
//
// from the two-point kernel f_ij = 4 pi * overlap of the R0-smeared mass
// densities g_i, g_j, which for Gaussians closes to
// (2 sqrt(pi) R0^3)^-1 exp(-d^2 / 4 R0^2). The overlap integral is retained
// as a quadrature oracle. Unlike CSL the structure factor has no
// (3 - d^2 / 2 R0^2) polynomial and the incoherent limit is N_p^2 + N_e.

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "collapse_radiance/atom.hpp"
#include "collapse_radiance/constants.hpp"
#include "collapse_radiance/csl.hpp"
#include "collapse_radiance/errors.hpp"
#include "collapse_radiance/quadrature.hpp"

namespace collapse_radiance {

//! DP model parameters. The rate itself is fixed by Newton's constant; R0 is
//! the mass-density resolution length.
struct DpParams {
  double r0_m = 0.0;  //!< resolution length R0 [m]
  //! cutoff energy of the colored variant [keV]; unset = Markovian
  std::optional<double> e_cutoff_kev;
};

inline void validate(const DpParams& p) {
  if (!(p.r0_m > 0.0) || !std::isfinite(p.r0_m)) {
    throw DomainError("DpParams: r0 must be finite and > 0");
  }
  if (p.e_cutoff_kev && (!(*p.e_cutoff_kev > 0.0) ||
                         !std::isfinite(*p.e_cutoff_kev))) {
    throw DomainError("DpParams: e_cutoff must be finite and > 0");
  }
}

//! Ratio between Diosi's original rate normalization (used here) and the
//! Penrose-convention one used in the companion gamma-ray analyses: divide
//! rates from this library by this factor to compare with the latter.
inline constexpr double dp_penrose_convention_factor = 8.0 * std::numbers::pi;

//! Closed-form DP two-point kernel
//! f_ij = exp(-d^2 / 4 R0^2) / (2 sqrt(pi) R0^3)  [1/m^3].
inline double dp_f_ij_gaussian(double distance_m, double r0_m) {
  if (!(r0_m > 0.0) || !std::isfinite(r0_m)) {
    throw DomainError("dp_f_ij_gaussian: r0 must be > 0");
  }
  if (!(distance_m >= 0.0) || !std::isfinite(distance_m)) {
    throw DomainError("dp_f_ij_gaussian: distance must be >= 0");
  }
  const double x = distance_m * distance_m / (4.0 * r0_m * r0_m);
  return std::exp(-x) / (2.0 * std::sqrt(std::numbers::pi) * r0_m * r0_m *
                         r0_m);
}

//! Quadrature oracle for the same kernel: evaluates
//! f_ij = 4 pi int d^3r g_i(r) g_j(r - d), g = (2 pi R0^2)^(-3/2)
//! exp(-r^2 / 2 R0^2), reduced by spherical symmetry to a single radial
//! integral. For d > 0 the angular profile integral of g_j is elementary,
//!   int_{|r-d|}^{r+d} s g(s) ds
//!     = R0^2 g0 [exp(-(r-d)^2/2R0^2) - exp(-(r+d)^2/2R0^2)],
//! written with expm1 to avoid cancellation; for d = 0 the direct radial
//! form 4 pi int 4 pi r^2 g^2 dr is used. Throws QuadratureError on
//! non-convergence.
inline double dp_overlap_integral(double distance_m, double r0_m,
                                  double rel_tol = 1e-9) {
  if (!(r0_m > 0.0) || !std::isfinite(r0_m)) {
    throw DomainError("dp_overlap_integral: r0 must be > 0");
  }
  if (!(distance_m >= 0.0) || !std::isfinite(distance_m)) {
    throw DomainError("dp_overlap_integral: distance must be >= 0");
  }
  const double r02 = r0_m * r0_m;
  const double g0 = 1.0 / std::pow(2.0 * std::numbers::pi * r02, 1.5);
  const double d = distance_m;
  const double four_pi = 4.0 * std::numbers::pi;

  if (d == 0.0) {
    const auto integrand = [&](double r) {
      const double g = g0 * std::exp(-r * r / (2.0 * r02));
      return four_pi * four_pi * r * r * g * g;
    };
    const auto q = integrate_adaptive(integrand, 0.0, 12.0 * r0_m, rel_tol);
    return q.value;
  }

  const auto integrand = [&](double r) {
    const double a = (r - d) * (r - d) / (2.0 * r02);
    const double b = (r + d) * (r + d) / (2.0 * r02);
    // exp(-a) - exp(-b) = -exp(-a) expm1(-(b - a)), b - a = 2 r d / R0^2
    const double ring = -std::exp(-a) * std::expm1(-(b - a));
    const double gi = g0 * std::exp(-r * r / (2.0 * r02));
    return four_pi * (2.0 * std::numbers::pi / d) * r * gi * r02 * g0 * ring;
  };
  const auto q =
      integrate_adaptive(integrand, 0.0, d + 12.0 * r0_m, rel_tol,
                         /*abs_scale=*/dp_f_ij_gaussian(distance_m, r0_m));
  return q.value;
}

//! DP structure factor: fixed-order sum of sign * mult * sinc * gaussian.
inline double dp_structure_factor(std::span<const PairTerm> terms,
                                  double energy_kev, double r0_m) {
  if (!(r0_m > 0.0) || !std::isfinite(r0_m)) {
    throw DomainError("dp_structure_factor: r0 must be > 0");
  }
  double sum = 0.0;
  for (const auto& term : terms) {
    const double b = photon_argument(term.distance_m, energy_kev);
    const double x =
        term.distance_m * term.distance_m / (4.0 * r0_m * r0_m);
    sum += charge_sign(term.kind) * static_cast<double>(term.multiplicity) *
           sinc(b) * std::exp(-x);
  }
  return sum;
}

inline double dp_structure_factor(const Atom& atom, double energy_kev,
                                  double r0_m, const PairGeometry& geom = {}) {
  const auto terms = enumerate_pairs(atom, geom);
  return dp_structure_factor(terms, energy_kev, r0_m);
}

//! Energy-independent prefactor of the DP rate,
//! G e^2 / (12 pi^(5/2) eps0 c^3 R0^3) [1/s].
inline double dp_rate_prefactor(const DpParams& p) {
  validate(p);
  using pc = PhysicalConstants;
  const double pi = std::numbers::pi;
  const double pi52 = pi * pi * std::sqrt(pi);
  return pc::g_newton * pc::e_charge * pc::e_charge /
         (12.0 * pi52 * pc::epsilon0 * pc::c_light * pc::c_light *
          pc::c_light * p.r0_m * p.r0_m * p.r0_m);
}

//! General DP emission rate from precomputed pair terms [1/(s keV)].
inline double dp_rate_general(std::span<const PairTerm> terms,
                              double energy_kev, const DpParams& params) {
  validate(params);
  detail::check_energy(energy_kev, "dp_rate_general");
  const double rate =
      dp_rate_prefactor(params) *
      dp_structure_factor(terms, energy_kev, params.r0_m) / energy_kev;
  return detail::apply_filter(rate, energy_kev, params.e_cutoff_kev);
}

inline double dp_rate_general(const Atom& atom, double energy_kev,
                              const DpParams& params,
                              const PairGeometry& geom = {}) {
  const auto terms = enumerate_pairs(atom, geom);
  return dp_rate_general(terms, energy_kev, params);
}

//! Fully incoherent DP rate G e^2 (N_p^2 + N_e) / (12 pi^(5/2) eps0 c^3
//! R0^3 E); the high-energy limit of the general rate.
inline double dp_rate_simple(const Atom& atom, double energy_kev,
                             const DpParams& params) {
  validate(params);
  validate(atom);
  detail::check_energy(energy_kev, "dp_rate_simple");
  const double np = atom.n_protons;
  const double ne = atom.n_electrons();
  const double rate =
      dp_rate_prefactor(params) * (np * np + ne) / energy_kev;
  return detail::apply_filter(rate, energy_kev, params.e_cutoff_kev);
}

}  // namespace collapse_radiance
