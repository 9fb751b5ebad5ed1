#ifndef ZFLAB_KINEMATICS_HPP
#define ZFLAB_KINEMATICS_HPP

#include <cmath>
#include <string>

#include "zflab/core.hpp"
#include "zflab/errors.hpp"

namespace zflab {

enum class ModelKind { free_field, ising, sinh_gordon };

inline std::string model_name(ModelKind k) {
  switch (k) {
    case ModelKind::free_field: return "free";
    case ModelKind::ising: return "ising";
    case ModelKind::sinh_gordon: return "sinh-gordon";
  }
  return "?";
}

// Mass mu > 0 for the single species; coupling enters only the sinh-Gordon
// scattering function and must lie in (0, pi).
struct ModelParams {
  ModelKind kind = ModelKind::free_field;
  double mass = 1.0;
  double coupling = 0.0;

  void validate() const {
    if (!(mass > 0.0)) throw ModelError("mass must be positive");
    if (kind == ModelKind::sinh_gordon && !(coupling > 0.0 && coupling < pi)) {
      throw ModelError("sinh-gordon coupling must lie in (0, pi)");
    }
  }
};

inline ModelParams make_model(ModelKind kind, double mass = 1.0,
                              double coupling = 0.0) {
  ModelParams m{kind, mass, coupling};
  m.validate();
  return m;
}

// Point (or vector) in two-dimensional Minkowski space, metric (+, -).
struct SpacetimePoint {
  double t = 0.0;
  double x = 0.0;
};

using TwoMomentum = SpacetimePoint;

inline SpacetimePoint operator-(SpacetimePoint a, SpacetimePoint b) {
  return {a.t - b.t, a.x - b.x};
}

inline double minkowski_dot(SpacetimePoint a, SpacetimePoint b) {
  return a.t * b.t - a.x * b.x;
}

// On-shell momentum parametrized by rapidity: p = mu (cosh th, sinh th).
inline TwoMomentum two_momentum(double mass, double theta) {
  return {mass * std::cosh(theta), mass * std::sinh(theta)};
}

inline double minkowski_square(SpacetimePoint v) { return minkowski_dot(v, v); }

inline bool is_spacelike(SpacetimePoint a, SpacetimePoint b) {
  return minkowski_square(a - b) < 0.0;
}

// Spacelike and to the left: the ordering that separates the two wedge
// algebras.
inline bool is_spacelike_left(SpacetimePoint a, SpacetimePoint b) {
  return is_spacelike(a, b) && a.x < b.x;
}

// Right/left wedges with an apex, and the centered double cone of a given
// radius (intersection of the two wedges with apexes (0, -r) and (0, r)).
struct Region {
  enum class Kind { right_wedge, left_wedge, double_cone };
  Kind kind = Kind::right_wedge;
  SpacetimePoint apex{};
  double radius = 0.0;

  static Region right_wedge(SpacetimePoint apex) {
    return {Kind::right_wedge, apex, 0.0};
  }
  static Region left_wedge(SpacetimePoint apex) {
    return {Kind::left_wedge, apex, 0.0};
  }
  static Region double_cone(double radius) {
    return {Kind::double_cone, {0.0, 0.0}, radius};
  }
};

inline bool region_contains(const Region& region, SpacetimePoint p) {
  switch (region.kind) {
    case Region::Kind::right_wedge:
      return p.x - region.apex.x > std::abs(p.t - region.apex.t);
    case Region::Kind::left_wedge:
      return p.x - region.apex.x < -std::abs(p.t - region.apex.t);
    case Region::Kind::double_cone:
      return std::abs(p.t) + std::abs(p.x) < region.radius;
  }
  return false;
}

// Two-particle scattering function on the complex rapidity plane.  The three
// models shipped here: S == 1, S == -1, and the sinh-Gordon function
// (sinh z - i sin b) / (sinh z + i sin b), analytic on the strip
// 0 < Im z < pi.
class ScatteringFunction {
 public:
  explicit ScatteringFunction(ModelParams model, double pole_threshold = 1e-12)
      : model_(model), pole_threshold_(pole_threshold) {
    model_.validate();
  }

  const ModelParams& model() const { return model_; }

  cplx eval(cplx zeta) const {
    switch (model_.kind) {
      case ModelKind::free_field: return 1.0;
      case ModelKind::ising: return -1.0;
      case ModelKind::sinh_gordon: {
        const cplx is = imag_unit * std::sin(model_.coupling);
        const cplx den = std::sinh(zeta) + is;
        if (std::abs(den) < pole_threshold_) {
          throw PoleError("scattering function evaluated at a pole");
        }
        return (std::sinh(zeta) - is) / den;
      }
    }
    return 1.0;
  }

  cplx operator()(cplx zeta) const { return eval(zeta); }

 private:
  ModelParams model_;
  double pole_threshold_;
};

inline cplx s_eval(const ScatteringFunction& s, cplx zeta) {
  return s.eval(zeta);
}

}  // namespace zflab

#endif
