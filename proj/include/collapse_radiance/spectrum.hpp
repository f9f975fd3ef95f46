#pragma once

// Energy grids, spectrum evaluation over any (model, atom, params)
// combination, shape normalization to the common constant prefactors,
// alpha-band envelopes, convergence/cancellation diagnostics, and
// Z-surveys.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "collapse_radiance/atom.hpp"
#include "collapse_radiance/constants.hpp"
#include "collapse_radiance/csl.hpp"
#include "collapse_radiance/dp.hpp"
#include "collapse_radiance/errors.hpp"

namespace collapse_radiance {

// ---------------------------------------------------------------------------
// Energy grids
// ---------------------------------------------------------------------------

enum class GridSpacing { linear, log, listed };

inline const char* grid_spacing_name(GridSpacing s) {
  switch (s) {
    case GridSpacing::linear: return "linear";
    case GridSpacing::log: return "log";
    case GridSpacing::listed: return "listed";
  }
  throw DomainError("grid_spacing_name: unknown spacing");
}

//! Ordered, strictly increasing, positive energies [keV]. The linear and
//! log factories require >= 2 points; from_points accepts any non-empty
//! strictly increasing positive list (spacing tag "listed") so single-point
//! evaluation grids remain expressible.
struct EnergyGrid {
  std::vector<double> points;  //!< keV, strictly increasing, > 0
  GridSpacing spacing = GridSpacing::listed;

  std::size_t size() const { return points.size(); }

  static EnergyGrid linear(double emin_kev, double emax_kev, int n_points) {
    check_range(emin_kev, emax_kev, n_points);
    EnergyGrid g;
    g.spacing = GridSpacing::linear;
    g.points.resize(static_cast<std::size_t>(n_points));
    const double step = (emax_kev - emin_kev) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) {
      g.points[static_cast<std::size_t>(i)] = emin_kev + step * i;
    }
    g.points.front() = emin_kev;
    g.points.back() = emax_kev;
    return g;
  }

  static EnergyGrid logspace(double emin_kev, double emax_kev, int n_points) {
    check_range(emin_kev, emax_kev, n_points);
    EnergyGrid g;
    g.spacing = GridSpacing::log;
    g.points.resize(static_cast<std::size_t>(n_points));
    const double la = std::log(emin_kev);
    const double lb = std::log(emax_kev);
    const double step = (lb - la) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) {
      g.points[static_cast<std::size_t>(i)] = std::exp(la + step * i);
    }
    g.points.front() = emin_kev;
    g.points.back() = emax_kev;
    return g;
  }

  static EnergyGrid from_points(std::vector<double> energies_kev) {
    if (energies_kev.empty()) {
      throw DomainError("EnergyGrid: at least one point required");
    }
    for (std::size_t i = 0; i < energies_kev.size(); ++i) {
      if (!(energies_kev[i] > 0.0) || !std::isfinite(energies_kev[i])) {
        throw DomainError("EnergyGrid: points must be finite and > 0");
      }
      if (i > 0 && !(energies_kev[i] > energies_kev[i - 1])) {
        throw DomainError("EnergyGrid: points must be strictly increasing");
      }
    }
    EnergyGrid g;
    g.spacing = GridSpacing::listed;
    g.points = std::move(energies_kev);
    return g;
  }

 private:
  static void check_range(double emin_kev, double emax_kev, int n_points) {
    if (!(emin_kev > 0.0) || !std::isfinite(emin_kev) ||
        !std::isfinite(emax_kev) || !(emax_kev > emin_kev)) {
      throw DomainError("EnergyGrid: need finite 0 < emin < emax");
    }
    if (n_points < 2) {
      throw DomainError("EnergyGrid: factories require >= 2 points");
    }
  }
};

inline bool same_grid(const EnergyGrid& a, const EnergyGrid& b) {
  return a.points == b.points;
}

//! Log-spaced 1-1000 keV, 512 points: covers the X-ray band and the
//! high-energy convergence region.
inline EnergyGrid default_grid() { return EnergyGrid::logspace(1.0, 1000.0, 512); }

// ---------------------------------------------------------------------------
// Model dispatch
// ---------------------------------------------------------------------------

enum class ModelKind { csl_general, csl_simple, csl_longwave, dp_general, dp_simple };

using ModelParams = std::variant<CslParams, DpParams>;

inline bool is_csl(ModelKind kind) {
  return kind == ModelKind::csl_general || kind == ModelKind::csl_simple ||
         kind == ModelKind::csl_longwave;
}

inline const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::csl_general: return "csl-general";
    case ModelKind::csl_simple: return "csl-simple";
    case ModelKind::csl_longwave: return "csl-longwave";
    case ModelKind::dp_general: return "dp-general";
    case ModelKind::dp_simple: return "dp-simple";
  }
  throw DomainError("model_kind_name: unknown model kind");
}

inline ModelKind parse_model_kind(std::string name) {
  std::replace(name.begin(), name.end(), '_', '-');
  if (name == "csl-general") return ModelKind::csl_general;
  if (name == "csl-simple") return ModelKind::csl_simple;
  if (name == "csl-longwave") return ModelKind::csl_longwave;
  if (name == "dp-general") return ModelKind::dp_general;
  if (name == "dp-simple") return ModelKind::dp_simple;
  throw ParseError("unknown model '" + name +
                   "' (expected csl-general, csl-simple, csl-longwave, "
                   "dp-general or dp-simple)");
}

namespace detail {

inline const CslParams& require_csl(const ModelParams& params,
                                    const char* where) {
  if (const auto* p = std::get_if<CslParams>(&params)) return *p;
  throw DomainError(std::string(where) +
                    ": CSL model requires CSL parameters");
}

inline const DpParams& require_dp(const ModelParams& params,
                                  const char* where) {
  if (const auto* p = std::get_if<DpParams>(&params)) return *p;
  throw DomainError(std::string(where) + ": DP model requires DP parameters");
}

}  // namespace detail

inline void validate(ModelKind kind, const ModelParams& params) {
  if (is_csl(kind)) {
    validate(detail::require_csl(params, "model params"));
  } else {
    validate(detail::require_dp(params, "model params"));
  }
}

//! True when the params carry a colored-noise cutoff energy.
inline bool params_are_colored(const ModelParams& params) {
  return std::visit(
      [](const auto& p) { return p.e_cutoff_kev.has_value(); }, params);
}

//! Scalar rate dispatch shared by spectra, Z-surveys and the CLI so that
//! every path produces bit-identical values. Pair terms may be precomputed
//! and passed in to avoid re-enumeration; they must come from
//! enumerate_pairs(atom, geom).
inline double model_rate(ModelKind kind, const Atom& atom, double energy_kev,
                         const ModelParams& params, const PairGeometry& geom,
                         std::span<const PairTerm> terms) {
  switch (kind) {
    case ModelKind::csl_general:
      return csl_rate_general(terms, energy_kev,
                              detail::require_csl(params, "model_rate"));
    case ModelKind::csl_simple:
      return csl_rate_simple(atom, energy_kev,
                             detail::require_csl(params, "model_rate"));
    case ModelKind::csl_longwave:
      return csl_rate_longwave(atom, energy_kev,
                               detail::require_csl(params, "model_rate"));
    case ModelKind::dp_general:
      return dp_rate_general(terms, energy_kev,
                             detail::require_dp(params, "model_rate"));
    case ModelKind::dp_simple:
      return dp_rate_simple(atom, energy_kev,
                            detail::require_dp(params, "model_rate"));
  }
  (void)geom;
  throw DomainError("model_rate: unknown model kind");
}

inline double model_rate(ModelKind kind, const Atom& atom, double energy_kev,
                         const ModelParams& params,
                         const PairGeometry& geom = {}) {
  const auto terms = enumerate_pairs(atom, geom);
  return model_rate(kind, atom, energy_kev, params, geom, terms);
}

//! The model family's energy-independent prefactor [1/s]; spectra are
//! normalized by dividing it out.
inline double model_prefactor(ModelKind kind, const ModelParams& params) {
  if (is_csl(kind)) {
    return csl_rate_prefactor(detail::require_csl(params, "model_prefactor"));
  }
  return dp_rate_prefactor(detail::require_dp(params, "model_prefactor"));
}

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

//! A computed spectrum plus a full parameter echo sufficient to reproduce
//! the values bit-for-bit.
struct Spectrum {
  EnergyGrid grid;
  std::vector<double> values;  //!< 1/(s keV); after normalization, 1/keV
  ModelKind model = ModelKind::csl_general;
  bool colored = false;        //!< Lorentzian noise filter active
  std::string atom_symbol;
  Atom atom_echo;
  ModelParams params_echo;
  PairGeometry geom_echo;
  bool negative_values = false;  //!< some value < 0 (cancellation artifact)
  bool sub_kev = false;          //!< some grid point below 1 keV
  bool normalized = false;       //!< family prefactor divided out

  //! e.g. "csl-general/markovian", "dp-simple/colored"
  std::string model_tag() const {
    return std::string(model_kind_name(model)) +
           (colored ? "/colored" : "/markovian");
  }
};

//! Evaluate the model rate on every grid point. Pointwise equal (bitwise)
//! to the corresponding scalar rate calls.
inline Spectrum compute_spectrum(ModelKind kind, const Atom& atom,
                                 const ModelParams& params,
                                 const PairGeometry& geom,
                                 const EnergyGrid& grid) {
  validate(kind, params);
  validate(atom);
  if (!(geom.alpha > 0.0) || !(geom.beta > 0.0)) {
    throw DomainError("compute_spectrum: pair geometry must be positive");
  }
  if (grid.points.empty()) {
    throw DomainError("compute_spectrum: empty grid");
  }

  Spectrum s;
  s.grid = grid;
  s.model = kind;
  s.colored = params_are_colored(params);
  s.atom_symbol = atom.symbol;
  s.atom_echo = atom;
  s.params_echo = params;
  s.geom_echo = geom;
  s.values.reserve(grid.size());

  const auto terms = enumerate_pairs(atom, geom);
  for (double e : grid.points) {
    const double v = model_rate(kind, atom, e, params, geom, terms);
    s.values.push_back(v);
    if (v < 0.0) s.negative_values = true;
    if (e < sub_kev_threshold_kev) s.sub_kev = true;
  }
  return s;
}

inline Spectrum compute_spectrum(ModelKind kind, const Atom& atom,
                                 const ModelParams& params,
                                 const EnergyGrid& grid) {
  return compute_spectrum(kind, atom, params, PairGeometry{}, grid);
}

//! Divide out the family's constant prefactor: CSL spectra by
//! hbar e^2 lambda / (12 pi^2 eps0 c^3 m0^2 r_C^2), DP spectra by
//! G e^2 / (12 pi^(5/2) eps0 c^3 R0^3). The normalized simple CSL shape
//! reads 3 (N_p^2 + N_e) / E; the colored filter stays inside the shape.
//! Normalizing twice is an error.
inline Spectrum normalize_shape(const Spectrum& spectrum) {
  if (spectrum.normalized) {
    throw DomainError("normalize_shape: spectrum is already normalized");
  }
  const double pre = model_prefactor(spectrum.model, spectrum.params_echo);
  Spectrum out = spectrum;
  for (double& v : out.values) v /= pre;
  out.normalized = true;
  return out;
}

// ---------------------------------------------------------------------------
// Alpha-band envelopes
// ---------------------------------------------------------------------------

//! Pointwise envelope over a sweep of the same-shell distance coefficient
//! alpha: lower/upper are pointwise min/max over the sampled alpha values,
//! mid is the curve at alpha = (lo + hi) / 2. Shells carrying an
//! alpha_override are pinned to it and do not participate in the sweep.
struct AlphaBand {
  Spectrum lower;
  Spectrum mid;
  Spectrum upper;
};

inline AlphaBand alpha_band(ModelKind kind, const Atom& atom,
                            const ModelParams& params, const EnergyGrid& grid,
                            double alpha_lo, double alpha_hi, int n_samples,
                            PairGeometry geom = {}) {
  if (!(alpha_lo > 0.0) || !std::isfinite(alpha_lo) ||
      !std::isfinite(alpha_hi) || !(alpha_hi >= alpha_lo)) {
    throw DomainError("alpha_band: need finite 0 < lo <= hi");
  }
  if (n_samples < 1) {
    throw DomainError("alpha_band: need at least one sample");
  }

  const double alpha_mid = 0.5 * (alpha_lo + alpha_hi);
  std::vector<double> alphas;
  alphas.reserve(static_cast<std::size_t>(n_samples) + 3);
  if (n_samples == 1) {
    alphas.push_back(alpha_lo);
  } else {
    const double step = (alpha_hi - alpha_lo) / (n_samples - 1);
    for (int i = 0; i < n_samples; ++i) alphas.push_back(alpha_lo + step * i);
    alphas.front() = alpha_lo;
    alphas.back() = alpha_hi;
  }
  alphas.push_back(alpha_mid);  // endpoints and midpoint always sampled
  alphas.push_back(alpha_hi);
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

  AlphaBand band;
  bool first = true;
  for (double a : alphas) {
    PairGeometry g = geom;
    g.alpha = a;
    Spectrum s = compute_spectrum(kind, atom, params, g, grid);
    if (a == alpha_mid) band.mid = s;
    if (first) {
      band.lower = s;
      band.upper = std::move(s);
      first = false;
      continue;
    }
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      band.lower.values[i] = std::min(band.lower.values[i], s.values[i]);
      band.upper.values[i] = std::max(band.upper.values[i], s.values[i]);
    }
    band.lower.negative_values =
        band.lower.negative_values || s.negative_values;
    band.upper.negative_values = band.lower.negative_values;
  }
  PairGeometry gmid = geom;
  gmid.alpha = alpha_mid;
  band.lower.geom_echo = gmid;
  band.upper.geom_echo = gmid;
  return band;
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

//! Smallest grid energy E* such that |general/simple - 1| < rel_tol for
//! every grid point >= E* (the tail condition must hold at all higher
//! points -- sinc oscillations cause multiple crossings). Returns nullopt
//! if the condition fails even at the last point.
inline std::optional<double> convergence_energy(const Spectrum& general,
                                                const Spectrum& simple,
                                                double rel_tol) {
  if (!(rel_tol > 0.0) || !(rel_tol < 1.0)) {
    throw DomainError("convergence_energy: rel_tol must be in (0, 1)");
  }
  if (!same_grid(general.grid, simple.grid)) {
    throw DomainError("convergence_energy: spectra must share the grid");
  }
  if (general.atom_symbol != simple.atom_symbol) {
    throw DomainError("convergence_energy: spectra must share the atom");
  }
  const auto& g = general.values;
  const auto& s = simple.values;
  std::optional<double> best;
  for (std::size_t i = g.size(); i-- > 0;) {
    bool ok;
    if (s[i] == 0.0) {
      ok = (g[i] == 0.0);
    } else {
      ok = std::abs(g[i] / s[i] - 1.0) < rel_tol;
    }
    if (!ok) break;
    best = general.grid.points[i];
  }
  return best;
}

//! Structure factor over its incoherent (E -> infinity) limit:
//! braces / 3(N_p^2 + N_e) for CSL, braces / (N_p^2 + N_e) for DP.
//! 1 means no cancellation, 0 means full cancellation. The colored filter
//! is not part of the structure factor and does not enter.
inline double cancellation_factor(const Atom& atom, double energy_kev,
                                  ModelKind kind, const ModelParams& params,
                                  const PairGeometry& geom = {}) {
  validate(kind, params);
  validate(atom);
  detail::check_energy(energy_kev, "cancellation_factor");
  const double np = atom.n_protons;
  const double ne = atom.n_electrons();
  const double incoherent = np * np + ne;
  switch (kind) {
    case ModelKind::csl_general: {
      const auto& p = detail::require_csl(params, "cancellation_factor");
      return csl_structure_factor(atom, energy_kev, p.corr_length_m, geom) /
             (3.0 * incoherent);
    }
    case ModelKind::csl_simple:
      return 1.0;
    case ModelKind::csl_longwave:
      return (np - ne) * (np - ne) / incoherent;
    case ModelKind::dp_general: {
      const auto& p = detail::require_dp(params, "cancellation_factor");
      return dp_structure_factor(atom, energy_kev, p.r0_m, geom) / incoherent;
    }
    case ModelKind::dp_simple:
      return 1.0;
  }
  throw DomainError("cancellation_factor: unknown model kind");
}

// ---------------------------------------------------------------------------
// Z-survey
// ---------------------------------------------------------------------------

struct ZSurveyRow {
  std::string symbol;
  double rate_per_s_kev = 0.0;
  double cancellation = 0.0;
};

//! Per-atom rate and cancellation factor at fixed energy, sorted by rate
//! descending (ties by symbol, ascending, for deterministic output).
inline std::vector<ZSurveyRow> z_survey(const std::vector<Atom>& atoms,
                                        double energy_kev, ModelKind kind,
                                        const ModelParams& params,
                                        const PairGeometry& geom = {}) {
  if (atoms.empty()) {
    throw DomainError("z_survey: need at least one atom");
  }
  std::vector<ZSurveyRow> rows;
  rows.reserve(atoms.size());
  for (const auto& atom : atoms) {
    ZSurveyRow row;
    row.symbol = atom.symbol;
    row.rate_per_s_kev = model_rate(kind, atom, energy_kev, params, geom);
    row.cancellation = cancellation_factor(atom, energy_kev, kind, params, geom);
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.rate_per_s_kev != b.rate_per_s_kev) {
      return a.rate_per_s_kev > b.rate_per_s_kev;
    }
    return a.symbol < b.symbol;
  });
  return rows;
}

}  // namespace collapse_radiance
