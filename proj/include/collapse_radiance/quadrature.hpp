#pragma once

// Adaptive Simpson quadrature used by the overlap-integral oracles. Small and
// self-contained on purpose: the integrands are smooth Gaussians times low
// order polynomials, for which Simpson with Richardson error control reaches
// 1e-10 relative in a few hundred evaluations.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "collapse_radiance/errors.hpp"

namespace collapse_radiance {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;  //!< accumulated error estimate
  long evaluations = 0;
};

namespace detail {

template <class F>
void simpson_step(const F& f, double a, double m, double b, double fa,
                  double fm, double fb, double whole, double tol, int depth,
                  QuadratureResult& out) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  out.evaluations += 2;
  const double h = b - a;
  const double left = h / 12.0 * (fa + 4.0 * flm + fm);
  const double right = h / 12.0 * (fm + 4.0 * frm + fb);
  if (!std::isfinite(left + right)) {
    // refinement cannot repair a non-finite integrand value
    throw QuadratureError("integrate_adaptive: non-finite integrand value",
                          std::numeric_limits<double>::quiet_NaN());
  }
  const double delta = left + right - whole;
  // |delta|/15 is the standard Richardson estimate of the refined error.
  // The epsilon clause stops refinement once delta sits at the panel's
  // floating-point noise floor (splitting further cannot help and would
  // recurse to max_depth when the caller's magnitude seed was far too
  // small, e.g. for narrow peaks the 3-point seed misses entirely).
  const double noise_floor = 8.0 * std::numeric_limits<double>::epsilon() *
                             (std::abs(left) + std::abs(right));
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol ||
      std::abs(delta) <= noise_floor) {
    out.value += left + right + delta / 15.0;
    out.abs_error += std::abs(delta) / 15.0;
    return;
  }
  simpson_step(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
  simpson_step(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

//! Integrate f over [a, b] to relative tolerance rel_tol. The tolerance is
//! interpreted against max(|integral|, abs_scale); pass a positive abs_scale
//! when the integral itself may vanish by cancellation. Throws
//! QuadratureError (carrying the achieved estimate) if the error estimate on
//! a first pass exceeds the request after refinement.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double rel_tol,
                                    double abs_scale = 0.0,
                                    int max_depth = 48) {
  if (!(std::isfinite(a) && std::isfinite(b)) || !(b > a)) {
    throw DomainError("integrate_adaptive: bad interval");
  }
  if (!(rel_tol > 0.0)) {
    throw DomainError("integrate_adaptive: rel_tol must be > 0");
  }
  // coarse magnitude estimate to seed the absolute tolerance
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double scale = std::max(std::abs(whole), abs_scale);
  if (scale == 0.0) scale = std::numeric_limits<double>::min();

  QuadratureResult out;
  out.evaluations = 3;
  detail::simpson_step(f, a, m, b, fa, fm, fb, whole, rel_tol * scale,
                       max_depth, out);
  const double denom = std::max({std::abs(out.value), abs_scale,
                                 std::numeric_limits<double>::min()});
  const double achieved = out.abs_error / denom;
  if (!(std::isfinite(out.value)) ||
      achieved > 4.0 * rel_tol + 16.0 * std::numeric_limits<double>::epsilon()) {
    throw QuadratureError("integrate_adaptive: tolerance not reached",
                          achieved);
  }
  return out;
}

}  // namespace collapse_radiance
