#ifndef ZFLAB_QUADRATURE_HPP
#define ZFLAB_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include "zflab/core.hpp"

namespace zflab {

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre nodes by Newton iteration on the Legendre polynomial,
// seeded with the Chebyshev estimate.  Converges to machine precision in a
// handful of steps for every order used here.
inline QuadratureRule gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Recurrence for P_n(x) and its derivative.
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

inline const QuadratureRule& gauss_legendre_cached(int n) {
  static std::map<int, QuadratureRule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
  return it->second;
}

// \int_a^b f(x) dx with an n-point Gauss-Legendre rule; f may return cplx.
template <typename F>
cplx integrate_gl(F&& f, double a, double b, int n) {
  const QuadratureRule& rule = gauss_legendre_cached(n);
  const double mid = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  cplx acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += rule.weights[i] * f(mid + hw * rule.nodes[i]);
  }
  return hw * acc;
}

// (1/2 pi i) \oint f around a circle |z - center| = radius, trapezoidal in
// the angle; spectrally accurate for integrands analytic near the circle.
template <typename F>
cplx contour_average(F&& f, cplx center, double radius, int n_nodes) {
  // Equals the residue sum inside when f is meromorphic: the z' factor of
  // dz = i z' dphi cancels the 1/(2 pi i) normalization.
  cplx acc = 0.0;
  for (int k = 0; k < n_nodes; ++k) {
    double phi = 2.0 * pi * k / n_nodes;
    cplx offset = radius * cplx(std::cos(phi), std::sin(phi));
    acc += f(center + offset) * offset;
  }
  return acc / static_cast<double>(n_nodes);
}

}  // namespace zflab

#endif
