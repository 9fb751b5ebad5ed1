#ifndef ZFLAB_SYMMETRIZER_HPP
#define ZFLAB_SYMMETRIZER_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "zflab/core.hpp"
#include "zflab/errors.hpp"
#include "zflab/grid.hpp"
#include "zflab/kinematics.hpp"
#include "zflab/tensor.hpp"

namespace zflab {

// Precomputed exchange factors S(theta_i - theta_j) on the grid; entry (i, j)
// at i * n + j.  Unitarity on the real line makes s[j, i] the inverse (and
// conjugate) of s[i, j].
struct ExchangeTable {
  int n_points = 0;
  std::vector<cplx> s;

  ExchangeTable() = default;

  ExchangeTable(const RapidityGrid& grid, const ScatteringFunction& smat)
      : n_points(grid.size()), s(static_cast<std::size_t>(grid.size()) * grid.size()) {
    for (int i = 0; i < n_points; ++i) {
      for (int j = 0; j < n_points; ++j) {
        s[static_cast<std::size_t>(i) * n_points + j] =
            smat.eval(cplx(grid.theta(i) - grid.theta(j), 0.0));
      }
    }
  }

  cplx operator()(int i, int j) const {
    return s[static_cast<std::size_t>(i) * n_points + j];
  }
};

// One-line permutations of {0..n-1} in lexicographic order; the fixed order
// keeps every symmetrized sum bitwise reproducible.
inline std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::vector<std::pair<int, int>> inversion_pairs(
    const std::vector<int>& perm) {
  std::vector<std::pair<int, int>> inv;
  const int n = static_cast<int>(perm.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (perm[a] > perm[b]) inv.emplace_back(a, b);
    }
  }
  return inv;
}

// out += coeff * D(perm) in, where D is the S-weighted exchange action
//   (D(sigma) f)(t) = prod_{(a,b) inverted} S(t_{sigma(a)} - t_{sigma(b)})
//                     * f(t_{sigma(0)}, ..., t_{sigma(r-1)}).
// Multiplicative over compositions, so one reduced word per permutation is
// enough; the inversion-pair product is that closed form.
inline void exchange_accumulate(Tensor& out, const Tensor& in,
                                const std::vector<int>& perm,
                                const ExchangeTable& table, cplx coeff) {
  out.check_same_shape(in);
  const int r = in.rank();
  if (r == 0) {
    out[0] += coeff * in[0];
    return;
  }
  const auto inv = inversion_pairs(perm);
  std::vector<std::size_t> stride_of(r);
  for (int i = 0; i < r; ++i) stride_of[i] = in.stride(i);
  std::vector<int> digits(r, 0);
  std::vector<int> src(r, 0);
  std::size_t flat = 0;
  do {
    std::size_t src_flat = 0;
    for (int slot = 0; slot < r; ++slot) {
      src[slot] = digits[perm[slot]];
      src_flat += stride_of[slot] * static_cast<std::size_t>(src[slot]);
    }
    cplx phase = coeff;
    for (const auto& [a, b] : inv) phase *= table(src[a], src[b]);
    out[flat++] += phase * in[src_flat];
  } while (Tensor::next_index(digits, in.n_points()));
}

inline Tensor apply_exchange(const Tensor& in, const std::vector<int>& perm,
                             const ExchangeTable& table) {
  Tensor out(in.n_points(), in.rank());
  exchange_accumulate(out, in, perm, table, 1.0);
  return out;
}

// P_r = (1/r!) sum_sigma D(sigma); orthogonal projector onto the
// S-symmetric subspace in the trapezoidal inner product.
inline Tensor sym_project(const Tensor& in, const ExchangeTable& table) {
  const int r = in.rank();
  if (r <= 1) return in;
  Tensor out(in.n_points(), r);
  const auto perms = all_permutations(r);
  const cplx coeff = 1.0 / static_cast<double>(perms.size());
  for (const auto& p : perms) exchange_accumulate(out, in, p, table, coeff);
  return out;
}

// P_r applied to a tensor already S-symmetric in its first m slots and in
// its last r - m slots separately: only the coset representatives that
// interleave the two blocks survive, one per m-subset of the slots.
inline Tensor shuffle_project(const Tensor& in, int m,
                              const ExchangeTable& table) {
  const int r = in.rank();
  if (m < 0 || m > r) throw DimensionError("bad block split");
  if (m == 0 || m == r || r <= 1) return in;
  Tensor out(in.n_points(), r);
  std::vector<int> select(r, 0);
  std::fill(select.begin(), select.begin() + m, 1);
  std::sort(select.begin(), select.end());  // start at lexicographically first mask
  std::size_t count = 0;
  std::vector<int> perm(r);
  do {
    int front = 0, back = m;
    for (int pos = 0; pos < r; ++pos) {
      // positions flagged 1 feed the first block, in increasing order
      if (select[pos]) perm[front++] = pos;
      else perm[back++] = pos;
    }
    // D(sigma) with sigma(a) = perm[a]; blocks stay internally ordered.
    exchange_accumulate(out, in, perm, table, 1.0);
    ++count;
  } while (std::next_permutation(select.begin(), select.end()));
  out *= cplx(1.0 / static_cast<double>(count));
  return out;
}

// P_{r+1}(delta \otimes psi) for S-symmetric psi, with the delta already
// summed against an amplitude vector:
//   out(t_0..t_r) = (1/(r+1)) sum_k [prod_{m<k} S(t_k - t_m)] F(t_k)
//                   * psi(t_0, ..no t_k.., t_r).
// The r + 1 cyclic coset terms replace the full (r+1)! sum.
inline Tensor sym_insert_front(const std::vector<cplx>& amplitude,
                               const Tensor& psi, const ExchangeTable& table) {
  const int q = psi.rank() + 1;
  Tensor out(psi.n_points(), q);
  const int n_points = psi.n_points();
  std::vector<int> digits(q, 0);
  std::size_t flat = 0;
  do {
    cplx acc = 0.0;
    for (int k = 0; k < q; ++k) {
      cplx phase = 1.0;
      for (int m = 0; m < k; ++m) phase *= table(digits[k], digits[m]);
      // index of psi with slot k deleted
      std::size_t idx = 0;
      for (int a = 0; a < q; ++a) {
        if (a == k) continue;
        idx = idx * n_points + static_cast<std::size_t>(digits[a]);
      }
      acc += phase * amplitude[digits[k]] * psi[idx];
    }
    out[flat++] = acc / static_cast<double>(q);
  } while (Tensor::next_index(digits, n_points));
  return out;
}

// Mirror image: P_{r+1}(psi \otimes delta) for S-symmetric psi.
//   out(t_0..t_r) = (1/(r+1)) sum_k [prod_{j>k} S(t_j - t_k)] F(t_k)
//                   * psi(t_0, ..no t_k.., t_r).
inline Tensor sym_insert_back(const std::vector<cplx>& amplitude,
                              const Tensor& psi, const ExchangeTable& table) {
  const int q = psi.rank() + 1;
  Tensor out(psi.n_points(), q);
  const int n_points = psi.n_points();
  std::vector<int> digits(q, 0);
  std::size_t flat = 0;
  do {
    cplx acc = 0.0;
    for (int k = 0; k < q; ++k) {
      cplx phase = 1.0;
      for (int j = k + 1; j < q; ++j) phase *= table(digits[j], digits[k]);
      std::size_t idx = 0;
      for (int a = 0; a < q; ++a) {
        if (a == k) continue;
        idx = idx * n_points + static_cast<std::size_t>(digits[a]);
      }
      acc += phase * amplitude[digits[k]] * psi[idx];
    }
    out[flat++] = acc / static_cast<double>(q);
  } while (Tensor::next_index(digits, n_points));
  return out;
}

// Projector restricted to a contiguous slot range [first, first + count):
// averages D(sigma) over permutations acting inside the range only.  Used to
// put coefficient tensors into canonical form group by group.
inline Tensor sym_project_block(const Tensor& in, int first, int count,
                                const ExchangeTable& table) {
  const int r = in.rank();
  if (first < 0 || count < 0 || first + count > r) {
    throw DimensionError("bad slot range");
  }
  if (count <= 1) return in;
  Tensor out(in.n_points(), r);
  const auto inner = all_permutations(count);
  const cplx coeff = 1.0 / static_cast<double>(inner.size());
  std::vector<int> perm(r);
  for (const auto& p : inner) {
    for (int a = 0; a < r; ++a) perm[a] = a;
    for (int a = 0; a < count; ++a) perm[first + a] = first + p[a];
    exchange_accumulate(out, in, perm, table, coeff);
  }
  return out;
}

}  // namespace zflab

#endif
