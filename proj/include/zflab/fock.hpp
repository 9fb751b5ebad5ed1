#ifndef ZFLAB_FOCK_HPP
#define ZFLAB_FOCK_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "zflab/core.hpp"
#include "zflab/errors.hpp"
#include "zflab/grid.hpp"
#include "zflab/kinematics.hpp"
#include "zflab/rng.hpp"
#include "zflab/symmetrizer.hpp"
#include "zflab/tensor.hpp"

namespace zflab {

// Everything a state or operator needs to interpret its tensors: the grid,
// the model, the particle-number cutoff, and the cached exchange factors.
struct FockContext {
  RapidityGrid grid;
  ModelParams model;
  ScatteringFunction smat;
  int n_max;
  ExchangeTable exchange;

  FockContext(const RapidityGrid& g, const ModelParams& m, int nmax)
      : grid(g), model(m), smat(m), n_max(nmax), exchange(g, smat) {
    if (nmax < 0) throw DimensionError("n_max must be non-negative");
  }
};

using ContextPtr = std::shared_ptr<const FockContext>;

inline ContextPtr make_context(const RapidityGrid& grid,
                               const ModelParams& model, int n_max) {
  return std::make_shared<const FockContext>(grid, model, n_max);
}

inline bool context_compatible(const ContextPtr& a, const ContextPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->grid == b->grid && a->n_max == b->n_max &&
         a->model.kind == b->model.kind && a->model.mass == b->model.mass &&
         a->model.coupling == b->model.coupling;
}

inline void require_compatible(const ContextPtr& a, const ContextPtr& b) {
  if (!context_compatible(a, b)) {
    throw ShapeMismatchError("operands live on different Fock contexts");
  }
}

// Vector in the truncated S-symmetric Fock space: one rank-n tensor per
// particle number 0..n_max.  All operations preserve S-symmetry of the
// sectors.  dropped_norm() reports, in quadrature, the norm of components
// lost to the particle-number cutoff or to off-grid boosts over the chain of
// operations that produced this state.  The accounting is exact for the
// unit-raise operations defined in this header (creation, smeared fields,
// lattice boosts); it is a diagnostic, not part of the state vector.
class FockState {
 public:
  explicit FockState(ContextPtr ctx) : ctx_(std::move(ctx)) {
    sectors_.reserve(static_cast<std::size_t>(ctx_->n_max) + 1);
    for (int n = 0; n <= ctx_->n_max; ++n) {
      sectors_.emplace_back(ctx_->grid.size(), n);
    }
  }

  static FockState vacuum(ContextPtr ctx) {
    FockState s(std::move(ctx));
    s.sector(0)[0] = 1.0;
    return s;
  }

  const ContextPtr& context() const { return ctx_; }
  int n_max() const { return ctx_->n_max; }
  Tensor& sector(int n) { return sectors_[static_cast<std::size_t>(n)]; }
  const Tensor& sector(int n) const {
    return sectors_[static_cast<std::size_t>(n)];
  }

  double dropped_norm() const { return std::sqrt(dropped_norm_sq_); }
  double dropped_norm_sq() const { return dropped_norm_sq_; }
  void add_dropped_norm_sq(double v) { dropped_norm_sq_ += v; }
  void clear_dropped_norm() { dropped_norm_sq_ = 0.0; }

  double norm_sq() const {
    double acc = 0.0;
    for (const auto& t : sectors_) acc += weighted_norm_sq(ctx_->grid, t);
    return acc;
  }
  double norm() const { return std::sqrt(norm_sq()); }

  FockState& operator+=(const FockState& o) {
    require_compatible(ctx_, o.ctx_);
    for (std::size_t n = 0; n < sectors_.size(); ++n) {
      sectors_[n] += o.sectors_[n];
    }
    dropped_norm_sq_ += o.dropped_norm_sq_;
    return *this;
  }

  FockState& operator-=(const FockState& o) {
    require_compatible(ctx_, o.ctx_);
    for (std::size_t n = 0; n < sectors_.size(); ++n) {
      sectors_[n] -= o.sectors_[n];
    }
    dropped_norm_sq_ += o.dropped_norm_sq_;
    return *this;
  }

  FockState& operator*=(cplx c) {
    for (auto& t : sectors_) t *= c;
    return *this;
  }

 private:
  ContextPtr ctx_;
  std::vector<Tensor> sectors_;
  double dropped_norm_sq_ = 0.0;
};

inline cplx inner_product(const FockState& a, const FockState& b) {
  require_compatible(a.context(), b.context());
  cplx acc = 0.0;
  for (int n = 0; n <= a.n_max(); ++n) {
    acc += weighted_dot(a.context()->grid, a.sector(n), b.sector(n));
  }
  return acc;
}

// Grid delta at point i with respect to the trapezoidal measure: height
// 1/w_i, so that sum_j w_j delta_i(j) f(j) = f(i).  With this normalization
// the contraction term of the discretized exchange algebra is exactly
// delta_ij / w_i.
inline std::vector<cplx> grid_delta_amplitude(const RapidityGrid& grid, int i) {
  std::vector<cplx> amp(grid.size(), 0.0);
  amp[static_cast<std::size_t>(i)] = 1.0 / grid.weight(i);
  return amp;
}

namespace detail {

inline double amplitude_norm_sq(const RapidityGrid& grid,
                                const std::vector<cplx>& amp) {
  double acc = 0.0;
  for (int p = 0; p < grid.size(); ++p) {
    acc += grid.weight(p) * std::norm(amp[static_cast<std::size_t>(p)]);
  }
  return acc;
}

// Gram matrix over one distinguished slot of a rank-n tensor:
// M(p, q) = sum_rest W(rest) conj(psi(p at slot, rest)) psi(q at slot, rest),
// with the remaining n-1 indices weighted.  slot_first selects whether the
// distinguished slot is the first or the last index.
inline std::vector<cplx> slot_gram(const RapidityGrid& grid, const Tensor& psi,
                                   bool slot_first) {
  const int n_points = grid.size();
  const int n = psi.rank();
  const std::size_t np = static_cast<std::size_t>(n_points);
  std::vector<cplx> gram(np * np, 0.0);
  if (n == 0) return gram;
  const std::size_t rest = psi.size() / np;
  std::vector<int> digits(n - 1, 0);
  for (std::size_t j = 0; j < rest; ++j) {
    const double w = index_weight(grid, digits);
    for (std::size_t p = 0; p < np; ++p) {
      const std::size_t ip = slot_first ? p * rest + j : j * np + p;
      const cplx ap = std::conj(psi[ip]) * w;
      if (ap == cplx(0.0)) continue;
      for (std::size_t q = 0; q < np; ++q) {
        const std::size_t iq = slot_first ? q * rest + j : j * np + q;
        gram[p * np + q] += ap * psi[iq];
      }
    }
    Tensor::next_index(digits, n_points);
  }
  return gram;
}

// |z'(a) applied past the cutoff|^2 without materializing the over-cutoff
// tensor: expand <psi, z(a*) z'(a) psi> with the exact discretized exchange
// relation  z(eta) z'(theta) = S(theta - eta) z'(theta) z(eta) + delta.
// For the primed pair the roles of the arguments in S are swapped and the
// distinguished slot is the last one.
inline double raise_norm_sq(const FockContext& ctx, const Tensor& psi,
                            const std::vector<cplx>& amp, bool primed) {
  const RapidityGrid& grid = ctx.grid;
  const int n_points = grid.size();
  const std::size_t np = static_cast<std::size_t>(n_points);
  const double psi_sq = weighted_norm_sq(grid, psi);
  if (psi_sq == 0.0) return 0.0;
  cplx acc = amplitude_norm_sq(grid, amp) * psi_sq;
  const int n = psi.rank();
  if (n > 0) {
    const std::vector<cplx> gram = slot_gram(grid, psi, !primed);
    cplx cross = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
      const cplx ap = grid.weight(static_cast<int>(p)) * amp[p];
      if (ap == cplx(0.0)) continue;
      for (std::size_t q = 0; q < np; ++q) {
        const cplx aq =
            grid.weight(static_cast<int>(q)) * std::conj(amp[q]);
        if (aq == cplx(0.0)) continue;
        const cplx s = primed ? ctx.exchange(static_cast<int>(q),
                                             static_cast<int>(p))
                              : ctx.exchange(static_cast<int>(p),
                                             static_cast<int>(q));
        cross += aq * ap * s * gram[p * np + q];
      }
    }
    acc += static_cast<double>(n) * cross;
  }
  return std::max(0.0, acc.real());
}

}  // namespace detail

// Smeared creation operator sum_i w_i a(theta_i) z'(theta_i): raises every
// sector by one, sqrt(n+1) times the S-symmetric front insertion.  The
// component created past n_max is dropped and its exact norm recorded.
inline FockState apply_create(const FockState& in, const std::vector<cplx>& amp) {
  const ContextPtr& ctx = in.context();
  FockState out(ctx);
  out.add_dropped_norm_sq(in.dropped_norm_sq());
  for (int n = 0; n + 1 <= ctx->n_max; ++n) {
    if (in.sector(n).size() == 0) continue;
    Tensor raised = sym_insert_front(amp, in.sector(n), ctx->exchange);
    raised *= std::sqrt(static_cast<double>(n + 1));
    out.sector(n + 1) += raised;
  }
  out.add_dropped_norm_sq(
      detail::raise_norm_sq(*ctx, in.sector(ctx->n_max), amp, false));
  return out;
}

// Smeared annihilation operator sum_i w_i a(theta_i) z(theta_i): lowers every
// sector by one, (z(a) psi)_{n-1}(rest) = sqrt(n) sum_i w_i a_i psi_n(i, rest).
inline FockState apply_annihilate(const FockState& in,
                                  const std::vector<cplx>& amp) {
  const ContextPtr& ctx = in.context();
  const RapidityGrid& grid = ctx->grid;
  const int n_points = grid.size();
  FockState out(ctx);
  out.add_dropped_norm_sq(in.dropped_norm_sq());
  for (int n = 1; n <= ctx->n_max; ++n) {
    const Tensor& psi = in.sector(n);
    Tensor& low = out.sector(n - 1);
    const std::size_t rest = psi.size() / static_cast<std::size_t>(n_points);
    const double root = std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n_points; ++i) {
      const cplx c = root * grid.weight(i) * amp[static_cast<std::size_t>(i)];
      if (c == cplx(0.0)) continue;
      const std::size_t base = static_cast<std::size_t>(i) * rest;
      for (std::size_t j = 0; j < rest; ++j) low[j] += c * psi[base + j];
    }
  }
  return out;
}

// Primed (reflected) creation operator: back insertion, mirrored phases.
inline FockState apply_create_prime(const FockState& in,
                                    const std::vector<cplx>& amp) {
  const ContextPtr& ctx = in.context();
  FockState out(ctx);
  out.add_dropped_norm_sq(in.dropped_norm_sq());
  for (int n = 0; n + 1 <= ctx->n_max; ++n) {
    if (in.sector(n).size() == 0) continue;
    Tensor raised = sym_insert_back(amp, in.sector(n), ctx->exchange);
    raised *= std::sqrt(static_cast<double>(n + 1));
    out.sector(n + 1) += raised;
  }
  out.add_dropped_norm_sq(
      detail::raise_norm_sq(*ctx, in.sector(ctx->n_max), amp, true));
  return out;
}

// Primed annihilation operator: contracts the last slot.
inline FockState apply_annihilate_prime(const FockState& in,
                                        const std::vector<cplx>& amp) {
  const ContextPtr& ctx = in.context();
  const RapidityGrid& grid = ctx->grid;
  const int n_points = grid.size();
  const std::size_t np = static_cast<std::size_t>(n_points);
  FockState out(ctx);
  out.add_dropped_norm_sq(in.dropped_norm_sq());
  for (int n = 1; n <= ctx->n_max; ++n) {
    const Tensor& psi = in.sector(n);
    Tensor& low = out.sector(n - 1);
    const std::size_t rest = psi.size() / np;
    const double root = std::sqrt(static_cast<double>(n));
    for (std::size_t j = 0; j < rest; ++j) {
      cplx acc = 0.0;
      const std::size_t base = j * np;
      for (std::size_t i = 0; i < np; ++i) {
        acc += grid.weight(static_cast<int>(i)) * amp[i] * psi[base + i];
      }
      low[j] += root * acc;
    }
  }
  return out;
}

// Point versions, z'(theta_i) and z(theta_i) with the grid-delta amplitude.
inline FockState apply_create_at(const FockState& in, int i) {
  return apply_create(in, grid_delta_amplitude(in.context()->grid, i));
}
inline FockState apply_annihilate_at(const FockState& in, int i) {
  return apply_annihilate(in, grid_delta_amplitude(in.context()->grid, i));
}

// Spacetime translation U(x): multiplies each rapidity slot by
// exp(i p(theta) . x) with the Minkowski pairing p.x = E t - p x.
inline FockState apply_translation(const FockState& in,
                                   const SpacetimePoint& x) {
  const ContextPtr& ctx = in.context();
  const RapidityGrid& grid = ctx->grid;
  const int n_points = grid.size();
  std::vector<cplx> phase(static_cast<std::size_t>(n_points));
  for (int p = 0; p < n_points; ++p) {
    const TwoMomentum mom = two_momentum(ctx->model.mass, grid.theta(p));
    phase[static_cast<std::size_t>(p)] =
        std::exp(imag_unit * minkowski_dot(mom, x));
  }
  FockState out(ctx);
  out.add_dropped_norm_sq(in.dropped_norm_sq());
  for (int n = 0; n <= ctx->n_max; ++n) {
    const Tensor& src = in.sector(n);
    Tensor& dst = out.sector(n);
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    for (std::size_t f = 0; f < src.size(); ++f) {
      cplx ph = 1.0;
      for (int d : digits) ph *= phase[static_cast<std::size_t>(d)];
      dst[f] = ph * src[f];
      Tensor::next_index(digits, n_points);
    }
  }
  return out;
}

// Boost by an integer number of grid steps: every rapidity moves by
// steps * dtheta.  Components shifted off the grid are dropped and their
// norm (with the source-point weights) is recorded.
inline FockState apply_boost_steps(const FockState& in, int steps) {
  const ContextPtr& ctx = in.context();
  const int n_points = ctx->grid.size();
  FockState out(ctx);
  out.add_dropped_norm_sq(in.dropped_norm_sq());
  double lost = 0.0;
  for (int n = 0; n <= ctx->n_max; ++n) {
    const Tensor& src = in.sector(n);
    Tensor& dst = out.sector(n);
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    for (std::size_t f = 0; f < src.size(); ++f) {
      bool kept = true;
      std::size_t target = 0;
      for (int d : digits) {
        const int moved = d + steps;
        if (moved < 0 || moved >= n_points) {
          kept = false;
          break;
        }
        target = target * static_cast<std::size_t>(n_points) +
                 static_cast<std::size_t>(moved);
      }
      if (kept) {
        dst[target] = src[f];
      } else if (src[f] != cplx(0.0)) {
        lost += index_weight(ctx->grid, digits) * std::norm(src[f]);
      }
      Tensor::next_index(digits, n_points);
    }
  }
  out.add_dropped_norm_sq(lost);
  return out;
}

// Boost by rapidity lambda; lambda must be an integer multiple of the grid
// spacing (the lattice has no intermediate points to boost onto).
inline FockState apply_boost(const FockState& in, double lambda) {
  const double dtheta = in.context()->grid.dtheta();
  const double ratio = lambda / dtheta;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    throw BoostCommensurabilityError(
        "boost rapidity is not a whole number of grid steps");
  }
  return apply_boost_steps(in, static_cast<int>(rounded));
}

// Spacetime reflection x -> -x: antiunitary, reverses the slot order and
// conjugates.  Rapidities are unchanged, so this is grid-exact.
inline FockState apply_reflection(const FockState& in) {
  const ContextPtr& ctx = in.context();
  FockState out(ctx);
  out.add_dropped_norm_sq(in.dropped_norm_sq());
  for (int n = 0; n <= ctx->n_max; ++n) {
    Tensor t = in.sector(n);
    if (n >= 2) t = t.reverse_front(n);
    t.conj_inplace();
    out.sector(n) = std::move(t);
  }
  return out;
}

// Monomial state z'(theta_{j_1}) ... z'(theta_{j_n}) applied to the vacuum,
// which equals sqrt(n!) P(delta_{j_1} x ... x delta_{j_n}).
inline FockState monomial_state(ContextPtr ctx, const std::vector<int>& points) {
  if (static_cast<int>(points.size()) > ctx->n_max) {
    throw DimensionError("monomial exceeds the particle-number cutoff");
  }
  FockState out = FockState::vacuum(ctx);
  for (auto it = points.rbegin(); it != points.rend(); ++it) {
    out = apply_create_at(out, *it);
  }
  return out;
}

// Deterministic pseudo-random S-symmetric state with components in sectors
// 0..max_sector, normalized.  Useful as generic test vector.
inline FockState random_state(ContextPtr ctx, std::uint64_t seed,
                              int max_sector) {
  Rng rng(seed);
  FockState out(ctx);
  max_sector = std::min(max_sector, ctx->n_max);
  for (int n = 0; n <= max_sector; ++n) {
    Tensor raw(ctx->grid.size(), n);
    for (std::size_t f = 0; f < raw.size(); ++f) raw[f] = rng.gaussian_cplx();
    out.sector(n) = (n >= 2) ? sym_project(raw, ctx->exchange) : raw;
  }
  const double nrm = out.norm();
  if (nrm > 0.0) out *= cplx(1.0 / nrm);
  return out;
}

}  // namespace zflab

#endif
