#ifndef ZFLAB_OPERATORS_HPP
#define ZFLAB_OPERATORS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "zflab/core.hpp"
#include "zflab/errors.hpp"
#include "zflab/fock.hpp"
#include "zflab/symmetrizer.hpp"
#include "zflab/tensor.hpp"

namespace zflab {

namespace detail {

inline double factorial_d(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= static_cast<double>(i);
  return r;
}

// a (a-1) ... (a-k+1)
inline double falling_d(int a, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= static_cast<double>(a - i);
  return r;
}

inline std::size_t size_pow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

}  // namespace detail

// Kernel of one normal-ordered operator: blocks f_{m,n}, each a rank m + n
// tensor whose first m slots form the creation group and last n the
// annihilation group.  The operator it stands for is
//   sum_{m,n} (1/(m! n!)) sum_{K,L} W_K W_L f_{m,n}(K; L)
//             z'(K_1)...z'(K_m) z(L_1)...z(L_n),
// with the primed (reflected) ladder pair substituted when the factor using
// the table is marked primed.  Blocks are kept in canonical form: each group
// S-symmetric on its own.
class CoefficientTable {
 public:
  explicit CoefficientTable(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  const ContextPtr& context() const { return ctx_; }

  void set_block(int m, int n, Tensor f, bool canonicalize = true) {
    if (m < 0 || n < 0) throw DimensionError("negative block degree");
    if (f.rank() != m + n || f.n_points() != ctx_->grid.size()) {
      throw ShapeMismatchError("block tensor has the wrong shape");
    }
    if (canonicalize) {
      if (m >= 2) f = sym_project_block(f, 0, m, ctx_->exchange);
      if (n >= 2) f = sym_project_block(f, m, n, ctx_->exchange);
    }
    blocks_.insert_or_assign(std::make_pair(m, n), std::move(f));
  }

  const Tensor* block(int m, int n) const {
    auto it = blocks_.find(std::make_pair(m, n));
    return it == blocks_.end() ? nullptr : &it->second;
  }

  const std::map<std::pair<int, int>, Tensor>& blocks() const {
    return blocks_;
  }

  // Smallest particle-number change any block can produce; bounds how far a
  // later factor can pull an intermediate sector back down.
  int min_sector_change() const {
    int mc = 0;
    bool first = true;
    for (const auto& [mn, f] : blocks_) {
      const int d = mn.first - mn.second;
      mc = first ? d : std::min(mc, d);
      first = false;
    }
    return mc;
  }

  int max_order() const {
    int mo = 0;
    for (const auto& [mn, f] : blocks_) mo = std::max(mo, mn.first + mn.second);
    return mo;
  }

  // Adjoint kernel: the (m, n) block moves to (n, m) as the conjugated full
  // slot reversal.  Reversal keeps each group S-symmetric, so the result is
  // canonical as is.
  CoefficientTable adjoint() const {
    CoefficientTable out(ctx_);
    for (const auto& [mn, f] : blocks_) {
      Tensor g = f.rank() >= 2 ? f.reverse_front(f.rank()) : f;
      g.conj_inplace();
      out.set_block(mn.second, mn.first, std::move(g), false);
    }
    return out;
  }

 private:
  ContextPtr ctx_;
  std::map<std::pair<int, int>, Tensor> blocks_;
};

// Applies the normal-ordered operator the table stands for.  Output sectors
// above `cap` (and above the space cutoff) are not produced; with the
// per-factor caps chosen in FockOperator::apply_restricted this loses
// nothing from the restricted result.  No truncation-loss accounting here:
// the smeared-field entry points in fock.hpp carry the exact diagnostic.
//
// On a sector of n' particles a block (m, n) contributes to sector
// q = n' - n + m the tensor
//   sqrt(n'!/(n'-n)!) sqrt(q!/(q-m)!) / (m! n!) * P_q(T),
// where for an unprimed factor
//   T(I, k) = sum_J W_J f(I; J) psi(J_rev, k)
// (annihilators eat the leading slots in reversed order, creators join at
// the front), and for a primed factor the mirror image: annihilators eat the
// trailing slots in order, creators join at the back in reversed order.
// T is S-symmetric within each of its two blocks, so P_q reduces to the
// shuffle-coset average.
inline FockState apply_table(const CoefficientTable& tbl, const FockState& in,
                             int cap, bool primed) {
  const ContextPtr& ctx = in.context();
  require_compatible(tbl.context(), ctx);
  if (cap < 0 || cap > ctx->n_max) cap = ctx->n_max;
  const int n_points = ctx->grid.size();
  using RowMat =
      Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  FockState out(ctx);
  out.add_dropped_norm_sq(in.dropped_norm_sq());

  for (const auto& [mn, f] : tbl.blocks()) {
    const int m = mn.first;
    const int n = mn.second;
    for (int np = n; np <= ctx->n_max; ++np) {
      const int q = np - n + m;
      if (q > cap) continue;
      const Tensor& psi = in.sector(np);
      if (psi.is_zero()) continue;

      const std::size_t dim_i = detail::size_pow(n_points, m);
      const std::size_t dim_j = detail::size_pow(n_points, n);
      const std::size_t dim_k = detail::size_pow(n_points, np - n);

      // weights over the contracted group
      std::vector<double> wj(dim_j, 1.0);
      if (n > 0) {
        std::vector<int> digits(static_cast<std::size_t>(n), 0);
        for (std::size_t j = 0; j < dim_j; ++j) {
          wj[j] = index_weight(ctx->grid, digits);
          Tensor::next_index(digits, n_points);
        }
      }

      Eigen::Map<const RowMat> fm(f.data(), static_cast<Eigen::Index>(dim_i),
                                  static_cast<Eigen::Index>(dim_j));
      Tensor t(n_points, q);
      if (!primed) {
        Tensor psi_work;
        const Tensor* src = &psi;
        if (n >= 2) {
          psi_work = psi.reverse_front(n);
          src = &psi_work;
        }
        RowMat pw(static_cast<Eigen::Index>(dim_j),
                  static_cast<Eigen::Index>(dim_k));
        for (std::size_t j = 0; j < dim_j; ++j) {
          const cplx* row = src->data() + j * dim_k;
          for (std::size_t k = 0; k < dim_k; ++k) {
            pw(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
                wj[j] * row[k];
          }
        }
        RowMat tm = fm * pw;  // dim_i x dim_k, slots (I, kvec)
        std::copy(tm.data(), tm.data() + tm.size(), t.data());
      } else {
        RowMat pw(static_cast<Eigen::Index>(dim_k),
                  static_cast<Eigen::Index>(dim_j));
        for (std::size_t k = 0; k < dim_k; ++k) {
          const cplx* row = psi.data() + k * dim_j;
          for (std::size_t j = 0; j < dim_j; ++j) {
            pw(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
                wj[j] * row[j];
          }
        }
        RowMat tm = pw * fm.transpose();  // dim_k x dim_i, slots (kvec, I)
        std::copy(tm.data(), tm.data() + tm.size(), t.data());
        if (m >= 2) {
          // creation slots join in reversed order at the tail
          std::vector<int> perm(static_cast<std::size_t>(q));
          for (int a = 0; a < q - m; ++a) perm[static_cast<std::size_t>(a)] = a;
          for (int a = 0; a < m; ++a) {
            perm[static_cast<std::size_t>(q - m + a)] = q - 1 - a;
          }
          t = t.slot_permute(perm);
        }
      }

      const int first_block = primed ? q - m : m;
      Tensor proj = shuffle_project(t, first_block, ctx->exchange);
      const double c = std::sqrt(detail::falling_d(np, n)) *
                       std::sqrt(detail::falling_d(q, m)) /
                       (detail::factorial_d(m) * detail::factorial_d(n));
      out.sector(q).axpy(cplx(c), proj);
    }
  }
  return out;
}

struct OperatorFactor {
  std::shared_ptr<const CoefficientTable> table;
  bool primed = false;
};

struct OperatorTerm {
  cplx coeff{1.0};
  std::vector<OperatorFactor> factors;  // product, rightmost acts first
};

inline void truncate_sectors(FockState& st, int s) {
  for (int n = s + 1; n <= st.n_max(); ++n) {
    st.sector(n) = Tensor(st.context()->grid.size(), n);
  }
}

// Linear combination of products of normal-ordered kernels, kept as an
// expression.  Nothing is ever materialized as one big matrix; application
// walks each product right to left through apply_table.
class FockOperator {
 public:
  explicit FockOperator(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  static FockOperator from_table(std::shared_ptr<const CoefficientTable> t,
                                 bool primed = false) {
    FockOperator op(t->context());
    OperatorTerm term;
    term.factors.push_back(OperatorFactor{std::move(t), primed});
    op.terms_.push_back(std::move(term));
    return op;
  }

  // c times the identity
  static FockOperator constant(ContextPtr ctx, cplx c) {
    FockOperator op(std::move(ctx));
    OperatorTerm term;
    term.coeff = c;
    op.terms_.push_back(std::move(term));
    return op;
  }

  const ContextPtr& context() const { return ctx_; }
  const std::vector<OperatorTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  FockOperator& operator+=(const FockOperator& o) {
    require_compatible(ctx_, o.ctx_);
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    return *this;
  }

  FockOperator& operator-=(const FockOperator& o) {
    require_compatible(ctx_, o.ctx_);
    for (auto t : o.terms_) {
      t.coeff = -t.coeff;
      terms_.push_back(std::move(t));
    }
    return *this;
  }

  FockOperator& operator*=(cplx c) {
    for (auto& t : terms_) t.coeff *= c;
    return *this;
  }

  friend FockOperator operator+(FockOperator a, const FockOperator& b) {
    a += b;
    return a;
  }
  friend FockOperator operator-(FockOperator a, const FockOperator& b) {
    a -= b;
    return a;
  }
  friend FockOperator operator*(cplx c, FockOperator a) {
    a *= c;
    return a;
  }

  friend FockOperator operator*(const FockOperator& a, const FockOperator& b) {
    require_compatible(a.ctx_, b.ctx_);
    FockOperator out(a.ctx_);
    for (const auto& ta : a.terms_) {
      for (const auto& tb : b.terms_) {
        OperatorTerm t;
        t.coeff = ta.coeff * tb.coeff;
        t.factors = ta.factors;
        t.factors.insert(t.factors.end(), tb.factors.begin(),
                         tb.factors.end());
        out.terms_.push_back(std::move(t));
      }
    }
    return out;
  }

  FockOperator adjoint() const {
    FockOperator out(ctx_);
    for (const auto& t : terms_) {
      OperatorTerm a;
      a.coeff = std::conj(t.coeff);
      for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) {
        a.factors.push_back(OperatorFactor{
            std::make_shared<const CoefficientTable>(it->table->adjoint()),
            it->primed});
      }
      out.terms_.push_back(std::move(a));
    }
    return out;
  }

  // Operator application on the truncated space: every intermediate and the
  // result live below `cap` (default: the space cutoff).
  FockState apply(const FockState& in, int cap = -1) const {
    require_compatible(ctx_, in.context());
    if (cap < 0 || cap > ctx_->n_max) cap = ctx_->n_max;
    FockState out(ctx_);
    out.add_dropped_norm_sq(in.dropped_norm_sq());
    for (const auto& term : terms_) {
      FockState w = in;
      w.clear_dropped_norm();
      truncate_sectors(w, cap);
      for (auto it = term.factors.rbegin(); it != term.factors.rend(); ++it) {
        w = apply_table(*it->table, w, cap, it->primed);
      }
      w *= term.coeff;
      out += w;
    }
    return out;
  }

  // Q_s (this) Q_s with Q_s the projection onto sectors <= s, computed
  // exactly: after the factor with j factors still to come, sectors above
  // s - (least possible further change) can never return below s, so capping
  // them costs nothing.
  FockState apply_restricted(const FockState& in, int s) const {
    require_compatible(ctx_, in.context());
    s = std::min(s, ctx_->n_max);
    FockState start = in;
    start.clear_dropped_norm();
    truncate_sectors(start, s);
    FockState out(ctx_);
    for (const auto& term : terms_) {
      const int p = static_cast<int>(term.factors.size());
      // prefix[j] = sum of min sector changes of factors 0..j-1 (the ones
      // applied after factor j)
      std::vector<int> prefix(static_cast<std::size_t>(p) + 1, 0);
      for (int j = 0; j < p; ++j) {
        prefix[static_cast<std::size_t>(j) + 1] =
            prefix[static_cast<std::size_t>(j)] +
            term.factors[static_cast<std::size_t>(j)].table->min_sector_change();
      }
      FockState w = start;
      bool dead = false;
      for (int j = p - 1; j >= 0; --j) {
        const int cap_j = s - prefix[static_cast<std::size_t>(j)];
        if (cap_j < 0) {
          dead = true;
          break;
        }
        const auto& fac = term.factors[static_cast<std::size_t>(j)];
        w = apply_table(*fac.table, w, std::min(cap_j, ctx_->n_max),
                        fac.primed);
      }
      if (dead) continue;
      w *= term.coeff;
      out += w;
    }
    truncate_sectors(out, s);
    return out;
  }

 private:
  ContextPtr ctx_;
  std::vector<OperatorTerm> terms_;
};

inline FockOperator commutator(const FockOperator& a, const FockOperator& b) {
  return a * b - b * a;
}

struct RestrictedNormOptions {
  int max_iterations = 120;
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  std::uint64_t seed = 0x5eed0c0ffee0ull;
  int start_sector = -1;  // highest sector of the start vector; -1: use s
};

// Operator norm of Q_s A Q_s by power iteration on (Q_s A Q_s)* (Q_s A Q_s),
// deterministic through the seeded start vector.
inline double restricted_norm(const FockOperator& op, int s,
                              const RestrictedNormOptions& opt = {}) {
  const ContextPtr& ctx = op.context();
  const int start_top = opt.start_sector < 0 ? s : opt.start_sector;
  FockState v = random_state(ctx, opt.seed, std::min(start_top, s));
  const FockOperator adj = op.adjoint();
  double est = 0.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    FockState w = op.apply_restricted(v, s);
    const double wn = w.norm();
    const double prev = est;
    est = wn;  // v has unit norm
    if (wn == 0.0) return 0.0;
    if (it > 0 && std::abs(est - prev) <= opt.rel_tol * est + opt.abs_tol) {
      break;
    }
    FockState u = adj.apply_restricted(w, s);
    const double un = u.norm();
    if (un == 0.0) return est;
    u *= cplx(1.0 / un);
    v = std::move(u);
  }
  return est;
}

// || Q_s [A, B] Q_s ||  /  ( ||Q_s A Q_s|| ||Q_s B Q_s|| )
inline double relative_commutator_norm(const FockOperator& a,
                                       const FockOperator& b, int s,
                                       const RestrictedNormOptions& opt = {}) {
  const double na = restricted_norm(a, s, opt);
  const double nb = restricted_norm(b, s, opt);
  const double nc = restricted_norm(commutator(a, b), s, opt);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return nc / (na * nb);
}

}  // namespace zflab

#endif
