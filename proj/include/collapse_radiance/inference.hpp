#pragma once

// Synthetic measured-spectrum generation and the recursive analysis scheme:
// assume a prior correlation length, fit the amplitude, update the
// correlation length, iterate to convergence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "collapse_radiance/atom.hpp"
#include "collapse_radiance/errors.hpp"
#include "collapse_radiance/rng.hpp"
#include "collapse_radiance/spectrum.hpp"

namespace collapse_radiance {

// ---------------------------------------------------------------------------
// Synthetic spectra
// ---------------------------------------------------------------------------

//! A synthetic measured spectrum: Poisson counts in uniform-width bins,
//! with the generating configuration echoed so files round-trip.
struct SyntheticSpectrum {
  EnergyGrid grid;           //!< bin centers [keV]
  double bin_width_kev = 0.0;
  std::vector<std::int64_t> counts;
  double exposure_s = 0.0;
  std::vector<double> efficiency;       //!< per bin, in [0, 1]
  std::vector<double> background_rate;  //!< counts/(s keV) per bin
  std::uint64_t seed = 0;
  //! some predicted rate was negative and clamped to 0 for count generation
  bool clamped_negative_rates = false;

  // Truth echo (what generated the counts); carried into the file sidecar.
  ModelKind truth_model = ModelKind::csl_general;
  ModelParams truth_params;
  Atom atom_echo;
  PairGeometry geom_echo;

  std::size_t n_bins() const { return grid.size(); }
};

namespace detail {

//! Broadcast a per-bin vector: size 1 stretches to n, size n passes through.
inline std::vector<double> broadcast_bins(std::vector<double> v,
                                          std::size_t n, const char* what) {
  if (v.size() == 1 && n > 1) {
    return std::vector<double>(n, v[0]);
  }
  if (v.size() != n) {
    throw DomainError(std::string("synth_counts: ") + what +
                      " must have one entry per bin (or a single value)");
  }
  return v;
}

}  // namespace detail

//! Generate Poisson counts for the given truth model. Expected counts per
//! bin are mu = (rate * efficiency + background_rate) * exposure *
//! bin_width; negative model rates (cancellation artifacts) are clamped to
//! zero for count generation only and flagged. Identical inputs give
//! identical counts (per-bin seeded streams; see rng.hpp).
inline SyntheticSpectrum synth_counts(
    ModelKind truth_model, const Atom& atom, const ModelParams& true_params,
    const PairGeometry& geom, const EnergyGrid& grid, double bin_width_kev,
    double exposure_s, std::vector<double> efficiency,
    std::vector<double> background_rate, std::uint64_t seed) {
  validate(truth_model, true_params);
  validate(atom);
  if (!(exposure_s > 0.0) || !std::isfinite(exposure_s)) {
    throw DomainError("synth_counts: exposure must be finite and > 0");
  }
  if (!(bin_width_kev > 0.0) || !std::isfinite(bin_width_kev)) {
    throw DomainError("synth_counts: bin width must be finite and > 0");
  }
  const std::size_t n = grid.size();
  if (n == 0) {
    throw DomainError("synth_counts: empty grid");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(grid.points[i] - 0.5 * bin_width_kev > 0.0)) {
      throw DomainError("synth_counts: bin extends to non-positive energy");
    }
    if (i > 0 &&
        grid.points[i] - grid.points[i - 1] < bin_width_kev * (1.0 - 1e-9)) {
      throw DomainError("synth_counts: bins overlap");
    }
  }
  auto eff = detail::broadcast_bins(std::move(efficiency), n, "efficiency");
  auto bg =
      detail::broadcast_bins(std::move(background_rate), n, "background");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(eff[i] >= 0.0) || !(eff[i] <= 1.0) || !std::isfinite(eff[i])) {
      throw DomainError("synth_counts: efficiency must be in [0, 1]");
    }
    if (!(bg[i] >= 0.0) || !std::isfinite(bg[i])) {
      throw DomainError("synth_counts: background rate must be >= 0");
    }
  }

  SyntheticSpectrum out;
  out.grid = grid;
  out.bin_width_kev = bin_width_kev;
  out.exposure_s = exposure_s;
  out.efficiency = std::move(eff);
  out.background_rate = std::move(bg);
  out.seed = seed;
  out.truth_model = truth_model;
  out.truth_params = true_params;
  out.atom_echo = atom;
  out.geom_echo = geom;
  out.counts.resize(n);

  const auto terms = enumerate_pairs(atom, geom);
  for (std::size_t i = 0; i < n; ++i) {
    double rate = model_rate(truth_model, atom, grid.points[i], true_params,
                             geom, terms);
    if (rate < 0.0) {
      rate = 0.0;
      out.clamped_negative_rates = true;
    }
    const double mu = (rate * out.efficiency[i] + out.background_rate[i]) *
                      exposure_s * bin_width_kev;
    if (!std::isfinite(mu)) {
      throw DomainError("synth_counts: non-finite expected counts");
    }
    Xoshiro256StarStar rng(bin_stream_seed(seed, i));
    out.counts[i] = poisson_sample(rng, mu);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Amplitude fit
// ---------------------------------------------------------------------------

//! One weighted-least-squares amplitude fit at a fixed correlation length.
struct FitScalar {
  double amplitude = 0.0;  //!< lambda [1/s] for CSL; G-scale multiplier for DP
  double sigma = 0.0;      //!< conditional standard error at this corr length
  double chi2 = 0.0;
  int ndof = 0;
};

namespace detail {

//! Unit-amplitude parameter record: lambda = 1/s for CSL (the rate is exactly
//! linear in lambda); the nominal-G DP rate for DP (amplitude multiplies it).
inline ModelParams unit_amplitude_params(ModelKind model, double corr_length_m,
                                         std::optional<double> e_cutoff_kev) {
  if (is_csl(model)) {
    CslParams p;
    p.lambda_per_s = 1.0;
    p.corr_length_m = corr_length_m;
    p.e_cutoff_kev = e_cutoff_kev;
    return p;
  }
  DpParams p;
  p.r0_m = corr_length_m;
  p.e_cutoff_kev = e_cutoff_kev;
  return p;
}

}  // namespace detail

//! Weighted least squares of counts against
//! mu(a) = (a * shape * efficiency + background) * exposure * bin_width,
//! linear in the amplitude a, with Poisson weights w = 1/max(counts, 1).
//! The shape is the unit-amplitude model rate at the given correlation
//! length (CSL: lambda = 1/s; DP: nominal rate at R0 = corr_length, so the
//! true amplitude is 1). Throws on an all-zero shape or ndof < 1.
inline FitScalar fit_amplitude(const SyntheticSpectrum& data, ModelKind model,
                               const Atom& atom, double corr_length_m,
                               const PairGeometry& geom = {},
                               std::optional<double> e_cutoff_kev = {}) {
  const std::size_t n = data.n_bins();
  if (n < 2) {
    throw DomainError("fit_amplitude: need at least 2 bins (ndof >= 1)");
  }
  if (data.counts.size() != n || data.efficiency.size() != n ||
      data.background_rate.size() != n) {
    throw DomainError("fit_amplitude: inconsistent per-bin array lengths");
  }
  const auto params =
      detail::unit_amplitude_params(model, corr_length_m, e_cutoff_kev);
  validate(model, params);
  const auto terms = enumerate_pairs(atom, geom);

  const double t_bw = data.exposure_s * data.bin_width_kev;
  double sxx = 0.0;
  double sxy = 0.0;
  std::vector<double> x(n);
  std::vector<double> c(n);
  bool any_nonzero = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double shape =
        model_rate(model, atom, data.grid.points[i], params, geom, terms);
    x[i] = shape * data.efficiency[i] * t_bw;
    c[i] = data.background_rate[i] * t_bw;
    if (x[i] != 0.0) any_nonzero = true;
    const double w = 1.0 / std::max(static_cast<double>(data.counts[i]), 1.0);
    sxx += w * x[i] * x[i];
    sxy += w * x[i] * (static_cast<double>(data.counts[i]) - c[i]);
  }
  if (!any_nonzero) {
    throw DomainError("fit_amplitude: degenerate design (all-zero shape)");
  }

  FitScalar fit;
  fit.amplitude = sxy / sxx;
  fit.sigma = 1.0 / std::sqrt(sxx);
  fit.ndof = static_cast<int>(n) - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 1.0 / std::max(static_cast<double>(data.counts[i]), 1.0);
    const double r = static_cast<double>(data.counts[i]) -
                     (fit.amplitude * x[i] + c[i]);
    fit.chi2 += w * r * r;
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Correlation-length iteration
// ---------------------------------------------------------------------------

//! What an update rule sees at each iteration: the current fit plus a
//! profile closure that refits the amplitude at any trial correlation
//! length against the same data.
struct FitDiagnostics {
  double corr_length_m = 0.0;
  double amplitude = 0.0;
  double sigma = 0.0;
  double chi2 = 0.0;
  int ndof = 0;
  std::function<FitScalar(double corr_length_m)> refit;
};

//! Maps the current iteration's diagnostics to the next correlation length.
using UpdateRule = std::function<double(const FitDiagnostics&)>;

//! Fixed point by construction: posterior = prior.
inline double identity_update(const FitDiagnostics& d) {
  return d.corr_length_m;
}

namespace detail {

//! Golden-section minimum of f on [lo, hi] to relative tolerance rel_tol.
template <typename F>
double golden_min(F&& f, double lo, double hi, double rel_tol) {
  constexpr double inv_phi = 0.6180339887498948482;
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && (b - a) > rel_tol * b; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

//! Default update rule: one-dimensional profile-chi2 minimization over the
//! correlation length (the amplitude is refitted at every trial value).
//! Coarse 33-point log scan over [r/8, 8r], then golden-section refinement
//! of the bracketing interval.
inline double profile_chi2_update(const FitDiagnostics& d) {
  constexpr int n_scan = 33;
  const double lo = d.corr_length_m / 8.0;
  const double hi = d.corr_length_m * 8.0;
  const double lla = std::log(lo);
  const double llb = std::log(hi);
  int best = 0;
  double best_chi2 = std::numeric_limits<double>::infinity();
  std::vector<double> grid(n_scan);
  for (int i = 0; i < n_scan; ++i) {
    grid[static_cast<std::size_t>(i)] =
        std::exp(lla + (llb - lla) * i / (n_scan - 1));
    const double c2 = d.refit(grid[static_cast<std::size_t>(i)]).chi2;
    if (c2 < best_chi2) {
      best_chi2 = c2;
      best = i;
    }
  }
  const double bracket_lo =
      grid[static_cast<std::size_t>(std::max(0, best - 1))];
  const double bracket_hi =
      grid[static_cast<std::size_t>(std::min(n_scan - 1, best + 1))];
  return detail::golden_min(
      [&](double r) { return d.refit(r).chi2; }, bracket_lo, bracket_hi,
      1e-6);
}

//! Result of the iterative correlation-length analysis. amplitude_sigma is
//! the marginal standard error: the conditional WLS error widened by the
//! correlation-length uncertainty propagated through the amplitude's
//! dependence on it (profile-chi2 curvature; falls back to the conditional
//! error when the profile has no usable curvature).
struct FitResult {
  double amplitude_hat = 0.0;
  double amplitude_sigma = 0.0;
  double corr_length_hat_m = 0.0;
  std::vector<std::pair<double, double>> iterations;  //!< (prior, posterior)
  bool converged = false;
  double chi2 = 0.0;
  int ndof = 0;
};

//! The recursive scheme: at iteration k, compute the general shape with
//! corr_length_k, fit the amplitude, apply the update rule, stop when the
//! relative change drops below rel_tol or max_iter is reached.
inline FitResult iterate_corr_length(
    const SyntheticSpectrum& data, ModelKind model_family, const Atom& atom,
    const PairGeometry& geom, double prior_m, UpdateRule update_rule = {},
    double rel_tol = 1e-3, int max_iter = 20,
    std::optional<double> e_cutoff_kev = {}) {
  if (!(prior_m > 0.0) || !std::isfinite(prior_m)) {
    throw DomainError("iterate_corr_length: prior must be finite and > 0");
  }
  if (!(rel_tol > 0.0)) {
    throw DomainError("iterate_corr_length: rel_tol must be > 0");
  }
  if (max_iter < 1) {
    throw DomainError("iterate_corr_length: max_iter must be >= 1");
  }
  if (!update_rule) update_rule = profile_chi2_update;

  const auto refit = [&](double r) {
    return fit_amplitude(data, model_family, atom, r, geom, e_cutoff_kev);
  };

  FitResult result;
  double r = prior_m;
  for (int k = 0; k < max_iter; ++k) {
    const FitScalar fit = refit(r);
    FitDiagnostics diag;
    diag.corr_length_m = r;
    diag.amplitude = fit.amplitude;
    diag.sigma = fit.sigma;
    diag.chi2 = fit.chi2;
    diag.ndof = fit.ndof;
    diag.refit = refit;
    const double next = update_rule(diag);
    result.iterations.emplace_back(r, next);
    if (!std::isfinite(next) || !(next > 0.0)) {
      std::ostringstream trace;
      trace << "iterate_corr_length: non-finite/non-positive update at "
               "iteration "
            << k << "; trace:";
      for (const auto& [p, q] : result.iterations) {
        trace << " (" << p << " -> " << q << ")";
      }
      throw Error(trace.str());
    }
    const double rel_change = std::abs(next - r) / r;
    r = next;
    if (rel_change < rel_tol) {
      result.converged = true;
      break;
    }
  }

  result.corr_length_hat_m = r;
  const FitScalar final_fit = refit(r);
  result.amplitude_hat = final_fit.amplitude;
  result.chi2 = final_fit.chi2;
  result.ndof = final_fit.ndof;

  // Marginal amplitude error: sigma^2 = sigma_cond^2 +
  // (d amplitude / d r)^2 * sigma_r^2 with sigma_r^2 = 2 / chi2''(r) from
  // the profile curvature (delta-chi2 = 1 convention).
  double sigma = final_fit.sigma;
  const double h = 0.02;
  const FitScalar up = refit(r * (1.0 + h));
  const FitScalar dn = refit(r * (1.0 - h));
  const double step = h * r;
  const double curvature =
      (up.chi2 + dn.chi2 - 2.0 * final_fit.chi2) / (step * step);
  if (std::isfinite(curvature) && curvature > 0.0) {
    const double sigma_r2 = 2.0 / curvature;
    const double slope = (up.amplitude - dn.amplitude) / (2.0 * step);
    sigma = std::sqrt(sigma * sigma + slope * slope * sigma_r2);
  }
  result.amplitude_sigma = sigma;
  return result;
}

}  // namespace collapse_radiance
