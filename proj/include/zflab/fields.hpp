#ifndef ZFLAB_FIELDS_HPP
#define ZFLAB_FIELDS_HPP

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "zflab/core.hpp"
#include "zflab/fock.hpp"
#include "zflab/kinematics.hpp"
#include "zflab/operators.hpp"
#include "zflab/quadrature.hpp"

namespace zflab {

// Smooth compactly supported bump exp(-1/(1 - v^2)) on (center - halfwidth,
// center + halfwidth), identically zero outside.
struct Bump {
  double center = 0.0;
  double halfwidth = 1.0;

  double operator()(double u) const {
    const double v = (u - center) / halfwidth;
    const double d = 1.0 - v * v;
    if (d <= 0.0) return 0.0;
    return std::exp(-1.0 / d);
  }
  double lo() const { return center - halfwidth; }
  double hi() const { return center + halfwidth; }
};

// int b(u) exp(i w u) du.  The node count follows the phase volume |w| h so
// the rule stays spectrally accurate for fast oscillations; w may be
// complex (the integrand is entire).
inline cplx bump_transform(const Bump& b, cplx w) {
  const double phase_span =
      (std::abs(w.real()) + std::abs(w.imag())) * b.halfwidth;
  int n = 64 + static_cast<int>(phase_span);
  n = std::min(1536, ((n + 15) / 16) * 16);  // bounded set of cached rules
  const QuadratureRule& gl = gauss_legendre_cached(n);
  const double mid = b.center;
  const double half = b.halfwidth;
  cplx acc = 0.0;
  for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
    const double u = mid + half * gl.nodes[k];
    acc += half * gl.weights[k] * b(u) * std::exp(imag_unit * w * cplx(u));
  }
  return acc;
}

// Product bump in time and space; the support is the open rectangle of the
// two factors.
struct TestFunction2D {
  Bump time;
  Bump space;

  double operator()(double t, double x) const { return time(t) * space(x); }
};

inline bool support_in_region(const TestFunction2D& f, const Region& r) {
  // all four support corners; the regions used here are convex
  const double ts[2] = {f.time.lo(), f.time.hi()};
  const double xs[2] = {f.space.lo(), f.space.hi()};
  for (double t : ts) {
    for (double x : xs) {
      if (!region_contains(r, SpacetimePoint{t, x})) return false;
    }
  }
  return true;
}

// The two one-particle amplitudes a field smearing produces:
//   plus(theta)  = int f(t, x) exp(+i p(theta).(t, x)) dt dx
//   minus(theta) = int f(t, x) exp(-i p(theta).(t, x)) dt dx
// with p.x = E t - P x.  No 2 pi normalization; every reported quantity is
// a ratio in which the convention cancels.
struct FieldTransformPair {
  std::vector<cplx> plus;
  std::vector<cplx> minus;
};

inline FieldTransformPair transform_pair(const RapidityGrid& grid, double mass,
                                         const TestFunction2D& f) {
  const int n = grid.size();
  FieldTransformPair out;
  out.plus.resize(static_cast<std::size_t>(n));
  out.minus.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const TwoMomentum p = two_momentum(mass, grid.theta(i));
    // product structure: the t and x integrals separate
    out.plus[static_cast<std::size_t>(i)] =
        bump_transform(f.time, cplx(p.t)) * bump_transform(f.space, cplx(-p.x));
    out.minus[static_cast<std::size_t>(i)] =
        bump_transform(f.time, cplx(-p.t)) * bump_transform(f.space, cplx(p.x));
  }
  return out;
}

// phi(f) = sum_i w_i [ plus(theta_i) z'(theta_i) + minus(theta_i) z(theta_i) ];
// self-adjoint for real f since then conj(plus) = minus.  Translation
// covariance fixes the orientation: shifting f by a multiplies plus by
// exp(+i p.a), exactly the phase the creators pick up.
inline FockOperator field_operator(const ContextPtr& ctx,
                                   const FieldTransformPair& pair) {
  auto tbl = std::make_shared<CoefficientTable>(ctx);
  const int n = ctx->grid.size();
  Tensor create(n, 1), annihilate(n, 1);
  for (int i = 0; i < n; ++i) {
    create[static_cast<std::size_t>(i)] = pair.plus[static_cast<std::size_t>(i)];
    annihilate[static_cast<std::size_t>(i)] =
        pair.minus[static_cast<std::size_t>(i)];
  }
  tbl->set_block(1, 0, std::move(create));
  tbl->set_block(0, 1, std::move(annihilate));
  return FockOperator::from_table(std::move(tbl), false);
}

// Reflected field phi'(g) = U phi(g_r) U with g_r(t, x) = g(-t, -x) and U
// the antiunitary spacetime reflection.  The transforms of g_r are the
// swapped pair of g, and conjugating by U conjugates the amplitudes, so
// conj(minus) rides the primed creator, conj(plus) the primed annihilator.
inline FockOperator field_prime_operator(const ContextPtr& ctx,
                                         const FieldTransformPair& pair) {
  auto tbl = std::make_shared<CoefficientTable>(ctx);
  const int n = ctx->grid.size();
  Tensor create(n, 1), annihilate(n, 1);
  for (int i = 0; i < n; ++i) {
    create[static_cast<std::size_t>(i)] =
        std::conj(pair.minus[static_cast<std::size_t>(i)]);
    annihilate[static_cast<std::size_t>(i)] =
        std::conj(pair.plus[static_cast<std::size_t>(i)]);
  }
  tbl->set_block(1, 0, std::move(create));
  tbl->set_block(0, 1, std::move(annihilate));
  return FockOperator::from_table(std::move(tbl), true);
}

// Direct application of phi(f), with exact truncation-loss accounting.
inline FockState apply_smeared_field(const FockState& in,
                                     const FieldTransformPair& pair) {
  FockState out = apply_create(in, pair.plus);
  FockState low = apply_annihilate(in, pair.minus);
  // the creation branch already carries the input's account forward
  low.clear_dropped_norm();
  out += low;
  return out;
}

// Direct application of phi'(g).
inline FockState apply_smeared_field_prime(const FockState& in,
                                           const FieldTransformPair& pair) {
  std::vector<cplx> cr(pair.minus.size()), an(pair.plus.size());
  for (std::size_t i = 0; i < cr.size(); ++i) {
    cr[i] = std::conj(pair.minus[i]);
    an[i] = std::conj(pair.plus[i]);
  }
  FockState out = apply_create_prime(in, cr);
  FockState low = apply_annihilate_prime(in, an);
  low.clear_dropped_norm();
  out += low;
  return out;
}

// Same operator through its definition: reflect, apply phi of the
// point-reflected function, reflect back.  The transforms of g_r are the
// swapped pair of g.  Cross-check partner for apply_smeared_field_prime.
inline FockState apply_smeared_field_prime_via_reflection(
    const FockState& in, const FieldTransformPair& pair) {
  FieldTransformPair swapped{pair.minus, pair.plus};
  FockState w = apply_reflection(in);
  w = apply_smeared_field(w, swapped);
  return apply_reflection(w);
}

// Exact commutator value of two free-model fields on the lattice:
// [phi(f), phi(g)] = sum_i w_i (minus_f plus_g - plus_f minus_g)(theta_i)
// times the identity, because at S = 1 the ladder commutators are c-numbers.
inline cplx free_commutator_constant(const RapidityGrid& grid,
                                     const FieldTransformPair& f,
                                     const FieldTransformPair& g) {
  cplx acc = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    acc += grid.weight(i) * (f.minus[k] * g.plus[k] - f.plus[k] * g.minus[k]);
  }
  return acc;
}

}  // namespace zflab

#endif
