#ifndef ZFLAB_FORMFACTOR_HPP
#define ZFLAB_FORMFACTOR_HPP

// Verification toolkit for candidate form factor families {F_k}.  A family
// packages meromorphic functions C^k -> C together with the scattering
// function they are meant to intertwine and the localization radius they
// claim.  The checks probe the analytic structure behind locality:
//
//   (i)   S-symmetry under adjacent argument swaps,
//   (ii)  S-periodicity under a 2 pi i shift of a single argument,
//   (iii) the residue recursion linking F_k to F_{k-2} on the hyperplanes
//         zeta_n - zeta_m = i pi,
//   (iv)  growth along imaginary directions (diagnostic only; the sharp
//         Paley-Wiener style bound is left open).
//
// (i) and (ii) are identities sampled at random strip points, (iii) is a
// contour integral compared against the recursion formula, and (iv) fits an
// exponential rate for comparison with the claimed radius.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "zflab/core.hpp"
#include "zflab/errors.hpp"
#include "zflab/kinematics.hpp"
#include "zflab/quadrature.hpp"
#include "zflab/rng.hpp"

namespace zflab {

// Pole hyperplane zeta_n - zeta_m = i pi declared on one member; indices are
// zero based with m < n.
struct PoleSpec {
  int member = 0;
  int m = 0;
  int n = 1;
};

using FamilyMember = std::function<cplx(const std::vector<cplx>&)>;

// A candidate family.  members maps the particle number k to an evaluable
// function; evaluation is only guaranteed away from the declared poles.
struct FormFactorFamily {
  ScatteringFunction s;
  std::map<int, FamilyMember> members;
  std::vector<PoleSpec> poles;
  double radius = 0.0;  // localization radius the family claims

  bool has_member(int k) const { return members.find(k) != members.end(); }

  const FamilyMember& member(int k) const {
    auto it = members.find(k);
    if (it == members.end()) {
      throw EvaluationError("family has no member of order " +
                            std::to_string(k));
    }
    return it->second;
  }
};

inline constexpr double default_pole_clearance = 0.05;

// Distance from z to the pole set declared on member k.  Hyperplane offsets
// are reduced mod 2 pi i: an S-periodic family repeats its singularities
// with that period (so zeta_n - zeta_m = -i pi counts as one of the images).
inline double pole_distance(const FormFactorFamily& fam, int k,
                            const std::vector<cplx>& z) {
  double best = std::numeric_limits<double>::infinity();
  for (const PoleSpec& p : fam.poles) {
    if (p.member != k) continue;
    const cplx d = z[static_cast<std::size_t>(p.n)] -
                   z[static_cast<std::size_t>(p.m)] - imag_unit * pi;
    const double im = std::remainder(d.imag(), 2.0 * pi);
    best = std::min(best, std::hypot(d.real(), im));
  }
  return best;
}

// Result of a sampling check; shaped like the JSON record the command line
// driver emits.
struct CheckReport {
  std::string check;
  int k = 0;
  int samples = 0;
  double max_rel_err = 0.0;
  double mean_rel_err = 0.0;
  int resampled = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Random point of the physical strip: Re in [-3, 3], Im in (0, pi).
inline std::vector<cplx> strip_point(Rng& rng, int k) {
  std::vector<cplx> z(static_cast<std::size_t>(k));
  for (cplx& c : z) {
    const double re = rng.uniform(-3.0, 3.0);
    const double im = rng.uniform(0.0, pi);
    c = cplx(re, im);
  }
  return z;
}

inline double rel_dev(cplx a, cplx b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

// Shared driver for the two sampling checks.  worst_dev receives a clear
// sample and returns the largest relative deviation among the identities it
// tests there; a PoleError or EvaluationError from inside counts as a
// rejected sample, like a clearance failure.
template <typename WorstDev>
CheckReport sample_check(const FormFactorFamily& fam, int k, int n_samples,
                         std::uint64_t seed, double clearance,
                         const std::string& name, WorstDev&& worst_dev) {
  fam.member(k);  // arity must exist before any sampling starts
  Rng rng(seed);
  CheckReport rep;
  rep.check = name;
  rep.k = k;
  rep.seed = seed;
  double sum = 0.0;
  int attempts_left = 200 * n_samples + 1000;
  while (rep.samples < n_samples) {
    if (--attempts_left < 0) {
      throw EvaluationError("sampling failed to clear the declared poles");
    }
    const std::vector<cplx> z = strip_point(rng, k);
    if (pole_distance(fam, k, z) < clearance) {
      ++rep.resampled;
      continue;
    }
    double worst = 0.0;
    try {
      worst = worst_dev(z, clearance);
    } catch (const PoleError&) {
      ++rep.resampled;
      continue;
    } catch (const EvaluationError&) {
      ++rep.resampled;
      continue;
    }
    ++rep.samples;
    rep.max_rel_err = std::max(rep.max_rel_err, worst);
    sum += worst;
  }
  rep.mean_rel_err = rep.samples > 0 ? sum / rep.samples : 0.0;
  return rep;
}

}  // namespace detail

// Check (i): F(.., zeta_j, zeta_{j+1}, ..) = S(zeta_{j+1} - zeta_j)
// F(.., zeta_{j+1}, zeta_j, ..) at n_samples random strip points, for every
// adjacent pair.  Points within the clearance of a declared pole, directly
// or after a swap, are redrawn and counted in the report.
inline CheckReport check_s_symmetry(const FormFactorFamily& fam, int k,
                                    int n_samples, std::uint64_t seed = 1,
                                    double clearance = default_pole_clearance) {
  const FamilyMember& f = fam.member(k);
  return detail::sample_check(
      fam, k, n_samples, seed, clearance, "s-symmetry",
      [&](const std::vector<cplx>& z, double clear) {
        const cplx base = f(z);
        double worst = 0.0;
        for (int j = 0; j + 1 < k; ++j) {
          std::vector<cplx> zs = z;
          std::swap(zs[static_cast<std::size_t>(j)],
                    zs[static_cast<std::size_t>(j) + 1]);
          if (pole_distance(fam, k, zs) < clear) {
            throw EvaluationError("swapped point is too close to a pole");
          }
          const cplx factor = fam.s.eval(z[static_cast<std::size_t>(j) + 1] -
                                         z[static_cast<std::size_t>(j)]);
          worst = std::max(worst, detail::rel_dev(base, factor * f(zs)));
        }
        return worst;
      });
}

// Check (ii): F(.., zeta_j + 2 pi i, ..) = (prod_{i != j} S(zeta_i - zeta_j))
// F(.., zeta_j, ..) for every argument.  The shift leaves the mod-2 pi i
// pole distance unchanged, so the base clearance covers the shifted point.
inline CheckReport check_s_periodicity(
    const FormFactorFamily& fam, int k, int n_samples, std::uint64_t seed = 1,
    double clearance = default_pole_clearance) {
  const FamilyMember& f = fam.member(k);
  return detail::sample_check(
      fam, k, n_samples, seed, clearance, "s-periodicity",
      [&](const std::vector<cplx>& z, double) {
        const cplx base = f(z);
        double worst = 0.0;
        for (int j = 0; j < k; ++j) {
          std::vector<cplx> zs = z;
          zs[static_cast<std::size_t>(j)] += 2.0 * pi * imag_unit;
          cplx factor = 1.0;
          for (int i = 0; i < k; ++i) {
            if (i == j) continue;
            factor *= fam.s.eval(z[static_cast<std::size_t>(i)] -
                                 z[static_cast<std::size_t>(j)]);
          }
          worst = std::max(worst, detail::rel_dev(f(zs), factor * base));
        }
        return worst;
      });
}

struct ResidueReport {
  int k = 0;
  int m = 0;
  int n = 0;
  cplx contour;   // (1/2 pi i) oint F_k d zeta_n around the hyperplane
  cplx expected;  // recursion right-hand side at the same base point
  double abs_err = 0.0;
  double rel_err = 0.0;  // zero when both sides vanish
};

// Check (iii): the residue of F_k on zeta_n - zeta_m = i pi against
//
//   -(1/2 pi i) (prod_{j=m..n} S(zeta_j - zeta_m))
//               (1 - prod_{p} S(zeta_m - zeta_p)) F_{k-2}(zeta-hat),
//
// where zeta-hat drops the components m and n.  The n-th entry of the base
// point is projected onto the hyperplane before integrating; the products
// include the S(0) factors at j = m, p = m and the S(i pi) factor at j = n.
// When the scalar prefactor vanishes exactly the lower member is not needed
// (nor required to exist).
inline ResidueReport check_residue(const FormFactorFamily& fam, int k, int m,
                                   int n, std::vector<cplx> base,
                                   double contour_radius = 0.1,
                                   int contour_nodes = 64) {
  if (!(0 <= m && m < n && n < k)) {
    throw EvaluationError("residue pair out of range");
  }
  if (static_cast<int>(base.size()) != k) {
    throw EvaluationError("base point arity does not match the member order");
  }
  const FamilyMember& f = fam.member(k);
  base[static_cast<std::size_t>(n)] =
      base[static_cast<std::size_t>(m)] + imag_unit * pi;
  for (const PoleSpec& p : fam.poles) {
    if (p.member != k || (p.m == m && p.n == n)) continue;
    const cplx d = base[static_cast<std::size_t>(p.n)] -
                   base[static_cast<std::size_t>(p.m)] - imag_unit * pi;
    const double im = std::remainder(d.imag(), 2.0 * pi);
    if (std::hypot(d.real(), im) < 2.0 * contour_radius) {
      throw ContourError(
          "another declared pole lies within twice the contour radius");
    }
  }

  ResidueReport rep;
  rep.k = k;
  rep.m = m;
  rep.n = n;
  std::vector<cplx> moving = base;
  rep.contour = contour_average(
      [&](cplx w) {
        moving[static_cast<std::size_t>(n)] = w;
        return f(moving);
      },
      base[static_cast<std::size_t>(n)], contour_radius, contour_nodes);

  cplx chain = 1.0;
  for (int j = m; j <= n; ++j) {
    chain *= fam.s.eval(base[static_cast<std::size_t>(j)] -
                        base[static_cast<std::size_t>(m)]);
  }
  cplx all = 1.0;
  for (int p = 0; p < k; ++p) {
    all *= fam.s.eval(base[static_cast<std::size_t>(m)] -
                      base[static_cast<std::size_t>(p)]);
  }
  const cplx prefactor =
      -(1.0 / (2.0 * pi * imag_unit)) * chain * (1.0 - all);
  if (prefactor == cplx(0.0)) {
    rep.expected = 0.0;
  } else {
    std::vector<cplx> hat;
    hat.reserve(static_cast<std::size_t>(k) - 2);
    for (int i = 0; i < k; ++i) {
      if (i != m && i != n) hat.push_back(base[static_cast<std::size_t>(i)]);
    }
    rep.expected = prefactor * fam.member(k - 2)(hat);
  }
  rep.abs_err = std::abs(rep.contour - rep.expected);
  const double scale = std::max(std::abs(rep.contour), std::abs(rep.expected));
  rep.rel_err = scale == 0.0 ? 0.0 : rep.abs_err / scale;
  return rep;
}

struct GrowthReport {
  int k = 0;
  std::vector<int> arguments;        // probed argument indices
  std::vector<double> fitted_rates;  // slope of log|F_k| in mu |Im E|
  double max_rate = 0.0;
  double declared_radius = 0.0;
};

namespace detail {

inline double ls_slope(const std::vector<double>& x,
                       const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  if (x.size() < 2) return 0.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) return 0.0;
  return (n * sxy - sx * sy) / det;
}

}  // namespace detail

// Check (iv), diagnostic only.  For each probed argument j the remaining
// coordinates sit at small real values while zeta_j walks the ray
// Re = probe_re, Im = t over the given offsets; log|F_k| is then fitted
// linearly in mu |Im E(zeta)| with E(zeta) = sum_j cosh zeta_j.  For a
// family of the shape (entire prefactor of moderate growth) x gtilde(mu E)
// with gtilde the transform of a function supported in [-r, r], the slope
// estimates r; the claimed radius ships in the report for comparison.  The
// estimate approaches r from below as probe_re grows (the transform of a
// smooth bump saturates its envelope only asymptotically), so probe_re
// defaults fairly deep into the ray.  Offsets must stay clear of pi to keep
// argument differences off the pole hyperplanes.
inline GrowthReport growth_probe(const FormFactorFamily& fam, int k,
                                 std::vector<int> arguments = {},
                                 std::vector<double> offsets = {},
                                 double probe_re = 4.0) {
  const FamilyMember& f = fam.member(k);
  const double mass = fam.s.model().mass;
  GrowthReport rep;
  rep.k = k;
  rep.declared_radius = fam.radius;
  if (k == 0) {
    (void)f(std::vector<cplx>{});  // a constant; nothing to probe
    return rep;
  }
  if (arguments.empty()) {
    for (int j = 0; j < k; ++j) arguments.push_back(j);
  }
  if (offsets.empty()) offsets = {0.5, 0.7, 0.9, 1.1, 1.3};
  rep.arguments = arguments;
  for (int j : arguments) {
    if (j < 0 || j >= k) throw EvaluationError("probe argument out of range");
    std::vector<double> u;
    std::vector<double> y;
    for (double t : offsets) {
      std::vector<cplx> z(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) {
        z[static_cast<std::size_t>(i)] = cplx(0.35 * (i + 1), 0.0);
      }
      z[static_cast<std::size_t>(j)] = cplx(probe_re, t);
      cplx e = 0.0;
      for (const cplx& c : z) e += std::cosh(c);
      const double value = std::abs(f(z));
      if (value <= 0.0) continue;  // log undefined; skip the node
      u.push_back(mass * std::abs(e.imag()));
      y.push_back(std::log(value));
    }
    rep.fitted_rates.push_back(detail::ls_slope(u, y));
  }
  for (double r : rep.fitted_rates) rep.max_rate = std::max(rep.max_rate, r);
  return rep;
}

}  // namespace zflab

#endif
