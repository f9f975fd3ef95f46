#pragma once

// Shell-resolved atomic model and the pair decomposition feeding the emission
// rate structure factors. An Atom is a nucleus of n_protons point charges at
// the origin plus electrons grouped into subshells at their mean radii; pair
// distances follow the intracule parametrization (same-shell pairs at
// alpha * rho_o, cross-shell pairs at beta * |rho_o - rho_o'|).

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "collapse_radiance/constants.hpp"
#include "collapse_radiance/errors.hpp"

namespace collapse_radiance {

//! One occupied subshell.
struct Shell {
  std::string label;               //!< e.g. "3d"
  int occupancy = 0;               //!< number of electrons, N_o
  double mean_radius_m = 0.0;      //!< mean orbital radius rho_o [m]
  std::optional<double> alpha_override;  //!< per-shell intracule scale
};

//! Neutral or ionized atom with shell-resolved electron radii.
struct Atom {
  std::string symbol;
  int n_protons = 0;
  bool neutral = true;
  std::string radii_provenance;
  std::vector<Shell> shells;

  int n_electrons() const {
    int n = 0;
    for (const auto& s : shells) n += s.occupancy;
    return n;
  }
};

//! Intracule geometry scales. alpha stretches same-shell pair distances,
//! beta cross-shell ones; defaults follow the He-Be intracule fits
//! (alpha in 1.0-1.5 with midpoint 1.25, beta = 1.04).
struct PairGeometry {
  double alpha = 1.25;
  double beta = 1.04;
};

enum class PairKind {
  proton_proton,
  proton_electron,
  electron_same_shell,
  electron_cross_shell,
  electron_self,
};

//! One group of ordered particle pairs sharing a separation.
struct PairTerm {
  PairKind kind{};
  std::int64_t multiplicity = 0;  //!< number of ordered (i, j) pairs
  double distance_m = 0.0;
};

//! Sign of q_i * q_j / e^2 for the pair class.
inline constexpr int charge_sign(PairKind kind) {
  return kind == PairKind::proton_electron ? -1 : +1;
}

inline const char* pair_kind_name(PairKind kind) {
  switch (kind) {
    case PairKind::proton_proton: return "proton_proton";
    case PairKind::proton_electron: return "proton_electron";
    case PairKind::electron_same_shell: return "electron_same_shell";
    case PairKind::electron_cross_shell: return "electron_cross_shell";
    case PairKind::electron_self: return "electron_self";
  }
  return "?";
}

namespace detail {

//! Parse "3d" style labels. Returns (n, l) when the label is a standard
//! subshell designation (l < n), otherwise nullopt; nonstandard labels are
//! allowed but skip the occupancy capacity check.
inline std::optional<std::pair<int, int>> parse_subshell_label(
    std::string_view label) {
  std::size_t i = 0;
  while (i < label.size() &&
         std::isdigit(static_cast<unsigned char>(label[i]))) {
    ++i;
  }
  if (i == 0 || i + 1 != label.size()) return std::nullopt;
  const int n = std::stoi(std::string(label.substr(0, i)));
  constexpr std::string_view letters = "spdfghik";
  const auto pos = letters.find(label[i]);
  if (pos == std::string_view::npos) return std::nullopt;
  const int l = static_cast<int>(pos);
  if (n < 1 || l >= n) return std::nullopt;
  return std::make_pair(n, l);
}

}  // namespace detail

//! Validate structural invariants. Throws DomainError for bad values and
//! OccupancyError when a neutral atom's electron count disagrees with Z.
inline void validate(const Atom& atom) {
  if (atom.n_protons < 1) {
    throw DomainError("atom '" + atom.symbol + "': n_protons must be >= 1");
  }
  if (atom.shells.empty()) {
    throw DomainError("atom '" + atom.symbol + "': needs at least one shell");
  }
  for (const auto& s : atom.shells) {
    if (s.occupancy < 1) {
      throw DomainError("atom '" + atom.symbol + "' shell '" + s.label +
                        "': occupancy must be >= 1");
    }
    if (!(s.mean_radius_m > 0.0) || !std::isfinite(s.mean_radius_m)) {
      throw DomainError("atom '" + atom.symbol + "' shell '" + s.label +
                        "': mean radius must be finite and > 0");
    }
    if (s.alpha_override && !(*s.alpha_override > 0.0)) {
      throw DomainError("atom '" + atom.symbol + "' shell '" + s.label +
                        "': alpha override must be > 0");
    }
    if (auto nl = detail::parse_subshell_label(s.label)) {
      const int capacity = 2 * (2 * nl->second + 1);
      if (s.occupancy > capacity) {
        throw DomainError("atom '" + atom.symbol + "' shell '" + s.label +
                          "': occupancy " + std::to_string(s.occupancy) +
                          " exceeds capacity " + std::to_string(capacity));
      }
    }
    const auto dup = std::count_if(
        atom.shells.begin(), atom.shells.end(),
        [&](const Shell& o) { return o.label == s.label; });
    if (dup != 1) {
      throw DomainError("atom '" + atom.symbol + "': duplicate shell label '" +
                        s.label + "'");
    }
  }
  if (atom.neutral && atom.n_electrons() != atom.n_protons) {
    throw OccupancyError(
        "atom '" + atom.symbol + "': declared neutral but has " +
        std::to_string(atom.n_electrons()) + " electrons for Z = " +
        std::to_string(atom.n_protons));
  }
}

//! Expand the atom into pair terms, in a fixed canonical order: the
//! proton-proton group, the electron self terms, proton-electron per shell,
//! same-shell pairs per shell (only when N_o >= 2), then cross-shell pairs in
//! (i < j) shell order. Multiplicities count ordered pairs, so they sum to
//! (N_p + N_e)^2 including self pairs. Rate code must accumulate in exactly
//! this order to keep results independent of any outer parallel schedule.
inline std::vector<PairTerm> enumerate_pairs(const Atom& atom,
                                             const PairGeometry& geom = {}) {
  validate(atom);
  if (!(geom.alpha > 0.0) || !(geom.beta > 0.0)) {
    throw DomainError("enumerate_pairs: alpha and beta must be > 0");
  }
  const auto np = static_cast<std::int64_t>(atom.n_protons);
  const auto ne = static_cast<std::int64_t>(atom.n_electrons());
  std::vector<PairTerm> terms;
  terms.reserve(2 + 2 * atom.shells.size() +
                atom.shells.size() * atom.shells.size() / 2);
  terms.push_back({PairKind::proton_proton, np * np, 0.0});
  terms.push_back({PairKind::electron_self, ne, 0.0});
  for (const auto& s : atom.shells) {
    terms.push_back({PairKind::proton_electron, 2 * np * s.occupancy,
                     s.mean_radius_m});
  }
  for (const auto& s : atom.shells) {
    if (s.occupancy >= 2) {
      const double alpha = s.alpha_override.value_or(geom.alpha);
      terms.push_back({PairKind::electron_same_shell,
                       static_cast<std::int64_t>(s.occupancy) *
                           (s.occupancy - 1),
                       alpha * s.mean_radius_m});
    }
  }
  for (std::size_t i = 0; i < atom.shells.size(); ++i) {
    for (std::size_t j = i + 1; j < atom.shells.size(); ++j) {
      terms.push_back({PairKind::electron_cross_shell,
                       2 * static_cast<std::int64_t>(atom.shells[i].occupancy) *
                           atom.shells[j].occupancy,
                       geom.beta * std::abs(atom.shells[i].mean_radius_m -
                                            atom.shells[j].mean_radius_m)});
    }
  }
  return terms;
}

// --- screened-hydrogenic builtin atoms --------------------------------------

//! Slater-rule effective charge for the subshell (n, l) of a configuration
//! given as (n, l, occupancy) triples. Groups are (1s)(2s2p)(3s3p)(3d)(4s4p)
//! (4d)(4f)(5s5p)...; same-group electrons screen 0.35 each (0.30 within 1s),
//! for s/p electrons the n-1 shell screens 0.85 and deeper shells 1.00, while
//! for d/f electrons every electron in a lower group screens 1.00.
inline double slater_z_eff(const std::vector<std::array<int, 3>>& config,
                           int z, int n, int l) {
  const auto group = [](int gn, int gl) {
    return gl <= 1 ? gn * 10 : gn * 10 + gl;
  };
  const int g = group(n, l);
  double shield = 0.0;
  int same = 0;
  for (const auto& [cn, cl, occ] : config) {
    if (group(cn, cl) == g) {
      same += occ;
    } else if (l <= 1) {
      if (cn == n - 1) {
        shield += 0.85 * occ;
      } else if (cn <= n - 2) {
        shield += 1.00 * occ;
      }
    } else if (cn < n || (cn == n && cl < l)) {
      shield += 1.00 * occ;
    }
  }
  shield += (same - 1) * (g == group(1, 0) ? 0.30 : 0.35);
  return z - shield;
}

//! Screened-hydrogenic mean orbital radius,
//! rho_nl = a0 * (3 n^2 - l (l + 1)) / (2 Z_eff).
inline double screened_hydrogenic_radius(int n, int l, double z_eff) {
  if (n < 1 || l < 0 || l >= n) {
    throw DomainError("screened_hydrogenic_radius: invalid quantum numbers");
  }
  if (!(z_eff > 0.0)) {
    throw DomainError("screened_hydrogenic_radius: Z_eff must be > 0");
  }
  return PhysicalConstants::bohr_radius * (3.0 * n * n - l * (l + 1)) /
         (2.0 * z_eff);
}

//! Provenance string carried by every builtin atom.
inline constexpr std::string_view builtin_radii_provenance =
    "screened-hydrogenic estimate";

//! Builtin atoms with ground-state configurations and screened-hydrogenic
//! radii. Known symbols: "Ge", "Xe". Unknown symbols raise DomainError naming
//! the available set.
inline Atom builtin_atom(std::string_view symbol) {
  struct Entry {
    std::string_view symbol;
    int z;
    std::vector<std::array<int, 3>> config;  // (n, l, occupancy)
  };
  static const std::vector<Entry> table = {
      {"Ge", 32, {{1, 0, 2}, {2, 0, 2}, {2, 1, 6}, {3, 0, 2}, {3, 1, 6},
                  {3, 2, 10}, {4, 0, 2}, {4, 1, 2}}},
      {"Xe", 54, {{1, 0, 2}, {2, 0, 2}, {2, 1, 6}, {3, 0, 2}, {3, 1, 6},
                  {3, 2, 10}, {4, 0, 2}, {4, 1, 6}, {4, 2, 10}, {5, 0, 2},
                  {5, 1, 6}}},
  };
  const auto it = std::find_if(table.begin(), table.end(),
                               [&](const Entry& e) { return e.symbol == symbol; });
  if (it == table.end()) {
    std::string names;
    for (const auto& e : table) {
      names += names.empty() ? "" : ", ";
      names += e.symbol;
    }
    throw DomainError("builtin_atom: unknown symbol '" + std::string(symbol) +
                      "' (available: " + names + ")");
  }
  constexpr std::string_view letters = "spdfghik";
  Atom atom;
  atom.symbol = it->symbol;
  atom.n_protons = it->z;
  atom.neutral = true;
  atom.radii_provenance = builtin_radii_provenance;
  for (const auto& [n, l, occ] : it->config) {
    Shell s;
    s.label = std::to_string(n) + std::string(1, letters[l]);
    s.occupancy = occ;
    s.mean_radius_m =
        screened_hydrogenic_radius(n, l, slater_z_eff(it->config, it->z, n, l));
    atom.shells.push_back(std::move(s));
  }
  validate(atom);
  return atom;
}

}  // namespace collapse_radiance
