#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "collapse_radiance/csl.hpp"
#include "collapse_radiance/dp.hpp"
#include "test_helpers.hpp"

// Independent cross-check of the pair-term bookkeeping: expand the atom into
// an explicit charged-particle list and sum the rate kernel over all ordered
// particle pairs (self-pairs included), with no use of enumerate_pairs or
// the kernel helpers. Any multiplicity, sign, or distance-assignment bug in
// the library shows up as a mismatch here.

namespace cr = collapse_radiance;

namespace {

// hbar c in keV m (CODATA 2018), written down independently of constants.hpp
constexpr double k_hbar_c_kev_m = 1.973269804593025e-10;

struct Particle {
  double charge;    // +1 proton, -1 electron
  double radius_m;  // shell mean radius; 0 for protons
  int shell;        // -1 for protons
};

std::vector<Particle> expand(const cr::Atom& atom) {
  std::vector<Particle> ps;
  for (int p = 0; p < atom.n_protons; ++p) {
    ps.push_back({+1.0, 0.0, -1});
  }
  for (std::size_t o = 0; o < atom.shells.size(); ++o) {
    for (int e = 0; e < atom.shells[o].occupancy; ++e) {
      ps.push_back({-1.0, atom.shells[o].mean_radius_m, static_cast<int>(o)});
    }
  }
  return ps;
}

// Pair distance under the intracule model: protons sit at a point, a
// proton-electron pair is separated by the shell radius, same-shell electron
// pairs by alpha * radius (per-shell override wins), cross-shell pairs by
// beta * |radius difference|.
double pair_distance(const cr::Atom& atom, const cr::PairGeometry& geom,
                     const Particle& a, const Particle& b) {
  if (a.shell < 0 && b.shell < 0) return 0.0;
  if (a.shell < 0) return b.radius_m;
  if (b.shell < 0) return a.radius_m;
  if (a.shell == b.shell) {
    const auto& sh = atom.shells[static_cast<std::size_t>(a.shell)];
    return sh.alpha_override.value_or(geom.alpha) * sh.mean_radius_m;
  }
  return geom.beta * std::abs(a.radius_m - b.radius_m);
}

double brute_sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

double brute_csl_rate(const cr::Atom& atom, const cr::PairGeometry& geom,
                      double energy_kev, const cr::CslParams& p) {
  const auto particles = expand(atom);
  const double rc2 = p.corr_length_m * p.corr_length_m;
  double s = 0.0;
  for (const auto& a : particles) {
    for (const auto& b : particles) {
      const double d = (&a == &b) ? 0.0 : pair_distance(atom, geom, a, b);
      const double x = d * d / (4.0 * rc2);
      s += a.charge * b.charge * brute_sinc(d * energy_kev / k_hbar_c_kev_m) *
           std::exp(-x) * (3.0 - 2.0 * x);
    }
  }
  double rate = cr::csl_rate_prefactor(p) * s / energy_kev;
  if (p.e_cutoff_kev) {
    const double ec2 = *p.e_cutoff_kev * *p.e_cutoff_kev;
    rate *= ec2 / (ec2 + energy_kev * energy_kev);
  }
  return rate;
}

double brute_dp_rate(const cr::Atom& atom, const cr::PairGeometry& geom,
                     double energy_kev, const cr::DpParams& p) {
  const auto particles = expand(atom);
  const double r02 = p.r0_m * p.r0_m;
  double s = 0.0;
  for (const auto& a : particles) {
    for (const auto& b : particles) {
      const double d = (&a == &b) ? 0.0 : pair_distance(atom, geom, a, b);
      s += a.charge * b.charge * brute_sinc(d * energy_kev / k_hbar_c_kev_m) *
           std::exp(-d * d / (4.0 * r02));
    }
  }
  double rate = cr::dp_rate_prefactor(p) * s / energy_kev;
  if (p.e_cutoff_kev) {
    const double ec2 = *p.e_cutoff_kev * *p.e_cutoff_kev;
    rate *= ec2 / (ec2 + energy_kev * energy_kev);
  }
  return rate;
}

std::vector<double> probe_energies() {
  std::vector<double> es;
  for (int k = 0; k < 10; ++k) {
    es.push_back(std::pow(10.0, 3.0 * k / 9.0));
  }
  return es;
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

void check_atom(const cr::Atom& atom, const cr::PairGeometry& geom) {
  const auto p_csl = test_helpers::csl_prior();
  const auto p_dp = test_helpers::dp_prior();
  for (const double e : probe_energies()) {
    INFO("atom " << atom.symbol << " E = " << e << " keV alpha = "
                 << geom.alpha << " beta = " << geom.beta);
    CHECK(rel_diff(brute_csl_rate(atom, geom, e, p_csl),
                   cr::csl_rate_general(atom, e, p_csl, geom)) < 1e-10);
    CHECK(rel_diff(brute_dp_rate(atom, geom, e, p_dp),
                   cr::dp_rate_general(atom, e, p_dp, geom)) < 1e-10);
  }
}

}  // namespace

TEST_CASE("brute-force pair sum matches the general rates (default "
          "geometry)",
          "[pair_oracle]") {
  check_atom(test_helpers::hydrogen(), {});
  check_atom(test_helpers::toy3(), {});
  check_atom(cr::builtin_atom("Ge"), {});
  check_atom(cr::builtin_atom("Xe"), {});
}

TEST_CASE("brute-force pair sum matches under non-default geometry",
          "[pair_oracle]") {
  cr::PairGeometry geom;
  geom.alpha = 1.1;
  geom.beta = 0.97;
  check_atom(test_helpers::hydrogen(), geom);
  check_atom(test_helpers::toy3(), geom);
  check_atom(cr::builtin_atom("Ge"), geom);
}

TEST_CASE("brute-force pair sum honors per-shell alpha overrides",
          "[pair_oracle]") {
  auto atom = test_helpers::toy3();
  atom.shells[0].alpha_override = 1.6;
  check_atom(atom, {});
  check_atom(test_helpers::negative_artifact_atom(), {});
}

TEST_CASE("brute-force pair sum matches colored rates", "[pair_oracle]") {
  auto p_csl = test_helpers::csl_prior();
  p_csl.e_cutoff_kev = 25.0;
  cr::DpParams p_dp = test_helpers::dp_prior();
  p_dp.e_cutoff_kev = 25.0;
  const auto atom = test_helpers::toy3();
  for (const double e : probe_energies()) {
    INFO("E = " << e << " keV");
    CHECK(rel_diff(brute_csl_rate(atom, {}, e, p_csl),
                   cr::csl_rate_general(atom, e, p_csl, {})) < 1e-10);
    CHECK(rel_diff(brute_dp_rate(atom, {}, e, p_dp),
                   cr::dp_rate_general(atom, e, p_dp, {})) < 1e-10);
  }
}
