#pragma once

// Coefficient-table expansion of Fock-space operators: assembling an operator
// from its table and recovering the table back from black-box applications.
//
// Every operator that maps each truncated sector into finitely many others has
// a normal-form expansion
//
//   A = sum_{m,n} 1/(m! n!) sum_{K,L} W_K W_L f_{m,n}(K; L)
//         z'(K_1) ... z'(K_m) z(L_1) ... z(L_n)
//
// with canonical (group-symmetric) coefficient tensors f_{m,n}.  On the grid
// the recovery is exact and direct: pairing with an unnormalized monomial
// collapses through the projector,
//
//   f_{m,n}(K; L) = sqrt(m!) * sector_m( R |L_rev> )(K),
//
// where |L_rev> is the monomial built from L in reversed order and R is A
// minus the already-recovered lower orders.  Blocks with a different particle
// balance m - n land in other sectors and never mix; same-balance blocks of
// lower total order are removed by the subtraction; higher ones annihilate
// more slots than |L_rev> has and vanish.  The group-symmetry phases of a
// canonical block cancel the coset phases of the monomial pairwise, which is
// what makes the formula hold without any least-squares step.

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "zflab/fock.hpp"
#include "zflab/operators.hpp"

namespace zflab {

// z'(theta_i) as an operator expression: single (1,0) block with a grid-delta
// amplitude, so from_table reproduces exactly apply_create_at.
inline FockOperator point_create_operator(ContextPtr ctx, int i) {
  const auto amp = grid_delta_amplitude(ctx->grid, i);
  Tensor f(ctx->grid.size(), 1);
  for (int p = 0; p < ctx->grid.size(); ++p) {
    f[static_cast<std::size_t>(p)] = amp[static_cast<std::size_t>(p)];
  }
  auto tbl = std::make_shared<CoefficientTable>(ctx);
  tbl->set_block(1, 0, std::move(f), false);
  return FockOperator::from_table(std::move(tbl));
}

// z(theta_i) likewise via a (0,1) block.
inline FockOperator point_annihilate_operator(ContextPtr ctx, int i) {
  const auto amp = grid_delta_amplitude(ctx->grid, i);
  Tensor f(ctx->grid.size(), 1);
  for (int p = 0; p < ctx->grid.size(); ++p) {
    f[static_cast<std::size_t>(p)] = amp[static_cast<std::size_t>(p)];
  }
  auto tbl = std::make_shared<CoefficientTable>(ctx);
  tbl->set_block(0, 1, std::move(f), false);
  return FockOperator::from_table(std::move(tbl));
}

inline FockOperator assemble(std::shared_ptr<const CoefficientTable> table) {
  return FockOperator::from_table(std::move(table));
}

// Largest entrywise difference over the union of blocks; absent blocks count
// as zero.
inline double table_distance(const CoefficientTable& a,
                             const CoefficientTable& b) {
  require_compatible(a.context(), b.context());
  std::map<std::pair<int, int>, int> keys;
  for (const auto& kv : a.blocks()) keys[kv.first] |= 1;
  for (const auto& kv : b.blocks()) keys[kv.first] |= 2;
  double worst = 0.0;
  for (const auto& kv : keys) {
    const Tensor* fa = a.block(kv.first.first, kv.first.second);
    const Tensor* fb = b.block(kv.first.first, kv.first.second);
    const std::size_t size = fa ? fa->size() : fb->size();
    for (std::size_t i = 0; i < size; ++i) {
      const cplx va = fa ? (*fa)[i] : cplx(0.0);
      const cplx vb = fb ? (*fb)[i] : cplx(0.0);
      worst = std::max(worst, std::abs(va - vb));
    }
  }
  return worst;
}

// Deviation of a table from describing a self-adjoint operator, measured as
// the distance to its own adjoint table.
inline double self_adjoint_defect(const CoefficientTable& t) {
  return table_distance(t, t.adjoint());
}

struct ExtractionResult {
  std::shared_ptr<CoefficientTable> table;
  // Per recovered block: false once the total order is high enough that a
  // truncated product operator no longer reproduces the untruncated matrix
  // elements feeding this block.
  std::map<std::pair<int, int>, bool> reliable;
};

namespace detail {

// Writes f(.; L) = sqrt(m!) * sector_m(residual applied to |L_rev>) for every
// tuple L into a rank-(m+n) tensor laid out as (K-group, L-group).
inline Tensor read_block(const FockOperator& op, const FockOperator& recovered,
                         bool subtract, int m, int n) {
  const ContextPtr& ctx = op.context();
  const int n_points = ctx->grid.size();
  Tensor out(n_points, m + n);
  const std::size_t dim_k = size_pow(n_points, m);
  const std::size_t dim_l = size_pow(n_points, n);
  const double scale = std::sqrt(factorial_d(m));
  std::vector<int> ls(static_cast<std::size_t>(n), 0);
  for (std::size_t lflat = 0; lflat < dim_l; ++lflat) {
    std::vector<int> rev(ls.rbegin(), ls.rend());
    const FockState in = monomial_state(ctx, rev);
    FockState image = op.apply(in);
    if (subtract) image -= recovered.apply(in);
    const Tensor& sec = image.sector(m);
    for (std::size_t kflat = 0; kflat < dim_k; ++kflat) {
      out[kflat * dim_l + lflat] = scale * sec[kflat];
    }
    Tensor::next_index(ls, n_points);
  }
  return out;
}

}  // namespace detail

// Recovers the coefficient table of an operator up to the requested total
// order m + n.  Blocks needing more slots than the particle cutoff allows are
// skipped and reported unreliable.
inline ExtractionResult extract(const FockOperator& op, int max_order) {
  const ContextPtr& ctx = op.context();
  ExtractionResult result;
  result.table = std::make_shared<CoefficientTable>(ctx);
  FockOperator recovered(ctx);
  bool have_recovered = false;
  for (int total = 0; total <= max_order; ++total) {
    for (int m = total; m >= 0; --m) {
      const int n = total - m;
      if (m > ctx->n_max || n > ctx->n_max) {
        result.reliable[{m, n}] = false;
        continue;
      }
      Tensor f = detail::read_block(op, recovered, have_recovered, m, n);
      result.reliable[{m, n}] = (total <= 2 * ctx->n_max - 2);
      if (f.is_zero()) continue;
      auto single = std::make_shared<CoefficientTable>(ctx);
      single->set_block(m, n, f, true);
      result.table->set_block(m, n, *single->block(m, n), false);
      recovered += FockOperator::from_table(std::move(single));
      have_recovered = true;
    }
  }
  return result;
}

// Independent recovery route for the constant-one scattering function, where
// the ladder operators obey canonical commutation relations: the coefficient
// is a vacuum expectation of nested commutators, annihilators attached on the
// left and creators on the right,
//
//   f_{m,n}(K; L) = < vac, [z(K_m), ... [z(K_1),
//                      [ ... [A, z'(L_1)] ..., z'(L_n)]] ... ] vac >.
//
// Each commutator strips one leg; the expression tree doubles per nesting, so
// keep the orders small.  For a general scattering function this is not the
// expansion coefficient; extract() above is.
inline cplx extract_free_element(const FockOperator& op,
                                 const std::vector<int>& ks,
                                 const std::vector<int>& ls) {
  const ContextPtr& ctx = op.context();
  FockOperator x = op;
  for (int l : ls) x = commutator(x, point_create_operator(ctx, l));
  for (int k : ks) x = commutator(point_annihilate_operator(ctx, k), x);
  const FockState vac = FockState::vacuum(ctx);
  return inner_product(vac, x.apply(vac));
}

inline std::shared_ptr<CoefficientTable> extract_free(const FockOperator& op,
                                                      int max_order) {
  const ContextPtr& ctx = op.context();
  const int n_points = ctx->grid.size();
  auto table = std::make_shared<CoefficientTable>(ctx);
  for (int total = 0; total <= max_order; ++total) {
    for (int m = total; m >= 0; --m) {
      const int n = total - m;
      if (m > ctx->n_max || n > ctx->n_max) continue;
      Tensor f(n_points, m + n);
      std::vector<int> digits(static_cast<std::size_t>(m + n), 0);
      for (std::size_t flat = 0; flat < f.size(); ++flat) {
        const std::vector<int> ks(digits.begin(), digits.begin() + m);
        const std::vector<int> ls(digits.begin() + m, digits.end());
        f[flat] = extract_free_element(op, ks, ls);
        Tensor::next_index(digits, n_points);
      }
      if (!f.is_zero()) table->set_block(m, n, std::move(f), true);
    }
  }
  return table;
}

}  // namespace zflab
