#ifndef ZFLAB_ISING_HPP
#define ZFLAB_ISING_HPP

// Explicit local observables for the constant scattering function S = -1:
// the even-sector family (a single antisymmetric two-particle member) and
// the odd-sector tanh families, their evaluation through a Pfaffian fast
// path, and the assembly of the corresponding normal-ordered operator on a
// truncated grid Fock space.
//
// A family member of order K contributes every block (m, n) with m + n = K
// and m, n within the space cutoff; block entries are boundary values
//
//   f_mn(theta_1..theta_m; eta_1..eta_n)
//     = F_K(theta_1, .., theta_m, eta_1 + i pi, .., eta_n + i pi).
//
// For members with poles on the mixed hyperplanes the real boundary touches
// the singular set where a theta coincides with an eta; those blocks are
// sampled as the symmetric average of F at theta shifted by +i eps and
// -i eps (all theta arguments shifted together, which keeps the sampled
// tensor exactly S-symmetric within each group).  An epsilon refinement
// study quantifies the sensitivity.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "zflab/core.hpp"
#include "zflab/errors.hpp"
#include "zflab/expansion.hpp"
#include "zflab/fock.hpp"
#include "zflab/formfactor.hpp"
#include "zflab/kinematics.hpp"
#include "zflab/operators.hpp"
#include "zflab/quadrature.hpp"
#include "zflab/tensor.hpp"

namespace zflab {

// Smooth test function on the line: the standard bump supported in
// [-radius, radius], normalized to unit integral with the same quadrature
// rule the transform uses, so gtilde(0) == 1 exactly.
class TestFunction1D {
 public:
  explicit TestFunction1D(double radius, int transform_nodes = 128)
      : radius_(radius), nodes_(transform_nodes) {
    if (!(radius > 0.0)) throw ModelError("test function radius must be positive");
    if (transform_nodes < 2) throw ModelError("transform needs at least two nodes");
    const QuadratureRule& gl = gauss_legendre_cached(nodes_);
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      acc += gl.weights[i] * profile(radius_ * gl.nodes[i]);
    }
    norm_ = radius_ * acc;
  }

  double radius() const { return radius_; }
  int transform_nodes() const { return nodes_; }

  // normalized profile; vanishes outside [-radius, radius]
  double operator()(double u) const { return profile(u) / norm_; }

 private:
  double profile(double u) const {
    const double v = u / radius_;
    const double d = 1.0 - v * v;
    if (d <= 0.0) return 0.0;
    return std::exp(-1.0 / d);
  }

  double radius_;
  int nodes_;
  double norm_;

  friend cplx gtilde(const TestFunction1D& g, cplx w);
};

// gtilde(w) = int g(x) exp(i w x) dx, entire in w; fixed-order quadrature
// over the support interval.
inline cplx gtilde(const TestFunction1D& g, cplx w) {
  const QuadratureRule& gl = gauss_legendre_cached(g.nodes_);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double x = g.radius_ * gl.nodes[i];
    acc += gl.weights[i] * g.profile(x) * std::exp(imag_unit * w * x);
  }
  return g.radius_ * acc / g.norm_;
}

// E(zeta) = sum_j cosh zeta_j, the total energy divided by the mass.
inline cplx total_energy(const std::vector<cplx>& z) {
  cplx e = 0.0;
  for (const cplx& c : z) e += std::cosh(c);
  return e;
}

namespace detail {

// Pfaffian of the antisymmetric matrix a (even dimension, row-major) by
// first-row expansion; the sizes here never exceed 6.
inline cplx pfaffian(std::vector<cplx> a, int dim) {
  if (dim == 0) return 1.0;
  if (dim == 2) return a[1];
  cplx acc = 0.0;
  double sign = 1.0;
  for (int j = 1; j < dim; ++j) {
    std::vector<cplx> sub;
    sub.reserve(static_cast<std::size_t>(dim - 2) * (dim - 2));
    for (int r = 1; r < dim; ++r) {
      if (r == j) continue;
      for (int c = 1; c < dim; ++c) {
        if (c == j) continue;
        sub.push_back(a[static_cast<std::size_t>(r) * dim + c]);
      }
    }
    acc += sign * a[static_cast<std::size_t>(j)] * pfaffian(std::move(sub), dim - 2);
    sign = -sign;
  }
  return acc;
}

}  // namespace detail

// The antisymmetrized tanh pairing sum over an odd number of arguments:
//
//   sum over permutations sigma of sign(sigma) prod_j tanh((z_{sigma(2j-1)}
//   - z_{sigma(2j)}) / 2)
//
// evaluated as 2^k k! sum_u (-1)^u Pf(M without row/column u) with
// M_ab = tanh((z_a - z_b)/2), summing over which argument stays unpaired.
// The normalization is pinned by the brute-force sum (see tests).
inline cplx pfaffian_sum(const std::vector<cplx>& z) {
  const int len = static_cast<int>(z.size());
  if (len % 2 != 1) throw EvaluationError("pairing sum needs an odd argument count");
  const int k = (len - 1) / 2;
  std::vector<cplx> m(static_cast<std::size_t>(len) * len, 0.0);
  for (int a = 0; a < len; ++a) {
    for (int b = a + 1; b < len; ++b) {
      const cplx half = 0.5 * (z[a] - z[b]);
      if (std::abs(std::cosh(half)) < 1e-10) {
        throw PoleError("pairing sum evaluated on a pole hyperplane");
      }
      const cplx t = std::tanh(half);
      m[static_cast<std::size_t>(a) * len + b] = t;
      m[static_cast<std::size_t>(b) * len + a] = -t;
    }
  }
  cplx acc = 0.0;
  double usign = 1.0;
  for (int u = 0; u < len; ++u) {
    std::vector<cplx> sub;
    sub.reserve(static_cast<std::size_t>(len - 1) * (len - 1));
    for (int r = 0; r < len; ++r) {
      if (r == u) continue;
      for (int c = 0; c < len; ++c) {
        if (c == u) continue;
        sub.push_back(m[static_cast<std::size_t>(r) * len + c]);
      }
    }
    acc += usign * detail::pfaffian(std::move(sub), len - 1);
    usign = -usign;
  }
  double scale = 1.0;
  for (int j = 1; j <= k; ++j) scale *= 2.0 * j;  // 2^k k!
  return scale * acc;
}

// The even-sector family: one antisymmetric two-particle member
//   F_2(z1, z2) = sinh((z1 - z2)/2) gtilde(mass E(z)),
// entire, so no poles are declared.
inline FormFactorFamily even_family(const TestFunction1D& g, double mass) {
  FormFactorFamily fam{ScatteringFunction(make_model(ModelKind::ising, mass)),
                       {},
                       {},
                       g.radius()};
  fam.members[2] = [g, mass](const std::vector<cplx>& z) {
    return std::sinh(0.5 * (z[0] - z[1])) * gtilde(g, mass * total_energy(z));
  };
  return fam;
}

// The odd-sector family up to order 2 k_max + 1:
//   F_{2k+1}(z) = (1 / ((4 pi i)^k k!)) gtilde(mass E(z)) pairing_sum(z),
// with poles on every pair hyperplane of every member of order >= 3.
inline FormFactorFamily odd_family(const TestFunction1D& g, double mass,
                                   int k_max) {
  if (k_max < 0 || k_max > 3) {
    throw EvaluationError("odd family supports k_max between 0 and 3");
  }
  FormFactorFamily fam{ScatteringFunction(make_model(ModelKind::ising, mass)),
                       {},
                       {},
                       g.radius()};
  for (int k = 0; k <= k_max; ++k) {
    const int order = 2 * k + 1;
    double denom = 1.0;
    for (int j = 1; j <= k; ++j) denom *= 4.0 * pi * j;  // (4 pi)^k k!
    const cplx prefactor = 1.0 / (denom * std::pow(imag_unit, k));
    fam.members[order] = [g, mass, prefactor,
                          order](const std::vector<cplx>& z) {
      cplx pairing = 1.0;
      if (order > 1) pairing = pfaffian_sum(z);
      return prefactor * gtilde(g, mass * total_energy(z)) * pairing;
    };
    if (order >= 3) {
      for (int a = 0; a < order; ++a) {
        for (int b = a + 1; b < order; ++b) {
          fam.poles.push_back(PoleSpec{order, a, b});
        }
      }
    }
  }
  return fam;
}

namespace detail {

struct TupleHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b9;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Samples the (m, n) block of the order m + n member on the grid.  The
// member is evaluated on sorted index tuples only; every other tuple is
// recovered through the exchange relation
//   F(.., z_a, z_b, ..) = S(z_b - z_a) F(.., z_b, z_a, ..),
// applied within each group, which for grid arguments turns into pure
// S-factors in the grid rapidities (a uniform imaginary shift of a group
// drops out of the differences).  needs_pv selects the principal value
// average at theta +- i eps.
inline Tensor sample_member_block(const FormFactorFamily& fam,
                                  const ContextPtr& ctx, int m, int n,
                                  bool needs_pv, double epsilon) {
  const int n_points = ctx->grid.size();
  const FamilyMember& member = fam.member(m + n);
  Tensor out(n_points, m + n);

  const auto evaluate = [&](const std::vector<int>& t) -> cplx {
    std::vector<cplx> z(t.size());
    for (std::size_t a = 0; a < t.size(); ++a) {
      z[a] = cplx(ctx->grid.theta(t[a]),
                  a < static_cast<std::size_t>(m) ? 0.0 : pi);
    }
    if (!needs_pv || m == 0 || n == 0) return member(z);
    std::vector<cplx> zp = z;
    std::vector<cplx> zm = z;
    for (int a = 0; a < m; ++a) {
      zp[static_cast<std::size_t>(a)] += imag_unit * epsilon;
      zm[static_cast<std::size_t>(a)] -= imag_unit * epsilon;
    }
    return 0.5 * (member(zp) + member(zm));
  };

  std::unordered_map<std::vector<int>, cplx, TupleHash> cache;
  std::vector<int> idx(static_cast<std::size_t>(m + n), 0);
  std::vector<int> sorted;
  std::size_t flat = 0;
  do {
    sorted = idx;
    // bubble each group into ascending order, collecting the exchange
    // factors f(.., x, y, ..) = S(theta_y - theta_x) f(.., y, x, ..)
    cplx phase = 1.0;
    const auto sort_group = [&](int lo, int hi) {
      for (int top = hi; top > lo + 1; --top) {
        for (int p = lo; p + 1 < top; ++p) {
          if (sorted[p] > sorted[p + 1]) {
            phase *= ctx->smat.eval(ctx->grid.theta(sorted[p + 1]) -
                                    ctx->grid.theta(sorted[p]));
            std::swap(sorted[p], sorted[p + 1]);
          }
        }
      }
    };
    sort_group(0, m);
    sort_group(m, m + n);
    auto [it, inserted] = cache.try_emplace(sorted, cplx(0.0));
    if (inserted) it->second = evaluate(sorted);
    out[flat] = phase * it->second;
    ++flat;
  } while (Tensor::next_index(idx, n_points));
  return out;
}

}  // namespace detail

struct BuildOptions {
  double epsilon = 1e-3;  // principal value offset for pole-carrying members
  bool compute_norms = true;
  RestrictedNormOptions norm_options{};
};

struct OrderContribution {
  int order = 0;
  double norm = 0.0;  // restricted norm of this order's blocks alone
};

struct BuildResult {
  std::shared_ptr<const CoefficientTable> table;
  FockOperator op;
  std::vector<OrderContribution> per_order;
  double epsilon = 0.0;
  double radius = 0.0;
  int max_order = 0;
};

namespace detail {

inline bool member_has_poles(const FormFactorFamily& fam, int order) {
  for (const PoleSpec& p : fam.poles) {
    if (p.member == order) return true;
  }
  return false;
}

inline std::shared_ptr<CoefficientTable> sample_family(
    const FormFactorFamily& fam, const ContextPtr& ctx, double epsilon) {
  const ModelParams& fm = fam.s.model();
  const ModelParams& cm = ctx->model;
  if (fm.kind != cm.kind || fm.mass != cm.mass || fm.coupling != cm.coupling) {
    throw ShapeMismatchError("family and context disagree on the model");
  }
  auto table = std::make_shared<CoefficientTable>(ctx);
  for (const auto& [order, member] : fam.members) {
    (void)member;
    const bool pv = member_has_poles(fam, order);
    const int m_lo = std::max(0, order - ctx->n_max);
    const int m_hi = std::min(order, ctx->n_max);
    for (int m = m_lo; m <= m_hi; ++m) {
      Tensor f = sample_member_block(fam, ctx, m, order - m, pv, epsilon);
      if (f.is_zero()) continue;
      table->set_block(m, order - m, std::move(f), true);
    }
  }
  return table;
}

}  // namespace detail

// Assembles the normal-ordered operator of the family on the given space:
// every member of order K contributes the blocks (m, n), m + n = K, that
// fit the cutoff (blocks beyond it are dropped, which for the odd family's
// top order mirrors its natural truncation).  The report carries the
// restricted norm of each order's part on the full truncated space.
inline BuildResult build_operator(const FormFactorFamily& fam,
                                  const ContextPtr& ctx,
                                  const BuildOptions& opt = {}) {
  BuildResult result;
  result.epsilon = opt.epsilon;
  result.radius = fam.radius;
  std::shared_ptr<CoefficientTable> table =
      detail::sample_family(fam, ctx, opt.epsilon);
  for (const auto& [mn, f] : table->blocks()) {
    result.max_order = std::max(result.max_order, mn.first + mn.second);
  }
  if (opt.compute_norms) {
    std::map<int, std::shared_ptr<CoefficientTable>> by_order;
    for (const auto& [mn, f] : table->blocks()) {
      auto& part = by_order[mn.first + mn.second];
      if (!part) part = std::make_shared<CoefficientTable>(ctx);
      part->set_block(mn.first, mn.second, f, false);
    }
    for (const auto& [order, part] : by_order) {
      const double norm = restricted_norm(FockOperator::from_table(part),
                                          ctx->n_max, opt.norm_options);
      result.per_order.push_back(OrderContribution{order, norm});
    }
  }
  result.table = table;
  result.op = FockOperator::from_table(result.table);
  return result;
}

struct EpsilonEntry {
  double epsilon = 0.0;
  double distance = 0.0;  // max block-entry distance to the finest table
};

// Principal value sensitivity: rebuilds the family's table at each offset
// and reports the distance to the table at the finest offset.  Away from
// the coincidence hyperplanes the symmetric average converges quadratically,
// so the distances should fall off accordingly.
inline std::vector<EpsilonEntry> epsilon_study(
    const FormFactorFamily& fam, const ContextPtr& ctx,
    std::vector<double> epsilons = {1e-2, 1e-3, 1e-4}) {
  if (epsilons.empty()) return {};
  std::sort(epsilons.begin(), epsilons.end(), std::greater<double>());
  std::vector<std::shared_ptr<CoefficientTable>> tables;
  tables.reserve(epsilons.size());
  for (double eps : epsilons) {
    tables.push_back(detail::sample_family(fam, ctx, eps));
  }
  std::vector<EpsilonEntry> entries;
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    entries.push_back(
        EpsilonEntry{epsilons[i], table_distance(*tables[i], *tables.back())});
  }
  return entries;
}

}  // namespace zflab

#endif
