#ifndef ZFLAB_TENSOR_HPP
#define ZFLAB_TENSOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "zflab/core.hpp"
#include "zflab/errors.hpp"
#include "zflab/grid.hpp"

namespace zflab {

// Upper bound on dense tensor entries (per tensor).  2^26 complex doubles is
// one gigabyte; anything larger is almost certainly a configuration mistake
// on this kind of desk-scale lattice.
inline std::size_t& tensor_element_budget() {
  static std::size_t budget = std::size_t(1) << 26;
  return budget;
}

// Dense rank-r complex tensor over r copies of an n-point index set, flat
// row-major storage (last index fastest).  Rank 0 is a scalar with one entry.
class Tensor {
 public:
  Tensor() : n_points_(1), rank_(0), data_(1, cplx(0.0)) {}

  Tensor(int n_points, int rank) : n_points_(n_points), rank_(rank) {
    if (n_points < 1 || rank < 0) throw DimensionError("bad tensor shape");
    std::size_t total = 1;
    for (int i = 0; i < rank; ++i) {
      if (total > tensor_element_budget() / static_cast<std::size_t>(n_points)) {
        throw DimensionError("tensor exceeds the dense element budget");
      }
      total *= static_cast<std::size_t>(n_points);
    }
    if (total > tensor_element_budget()) {
      throw DimensionError("tensor exceeds the dense element budget");
    }
    data_.assign(total, cplx(0.0));
  }

  int n_points() const { return n_points_; }
  int rank() const { return rank_; }
  std::size_t size() const { return data_.size(); }
  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }
  cplx& operator[](std::size_t i) { return data_[i]; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }

  std::size_t stride(int slot) const {
    std::size_t s = 1;
    for (int i = slot + 1; i < rank_; ++i) s *= n_points_;
    return s;
  }

  // Odometer-style multi-index walk; digits are in slot order.
  static bool next_index(std::vector<int>& digits, int n_points) {
    for (int slot = static_cast<int>(digits.size()) - 1; slot >= 0; --slot) {
      if (++digits[slot] < n_points) return true;
      digits[slot] = 0;
    }
    return false;
  }

  std::size_t flat_index(const std::vector<int>& digits) const {
    std::size_t f = 0;
    for (int i = 0; i < rank_; ++i) {
      f = f * n_points_ + static_cast<std::size_t>(digits[i]);
    }
    return f;
  }

  Tensor& operator+=(const Tensor& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  Tensor& operator-=(const Tensor& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }

  Tensor& operator*=(cplx c) {
    for (auto& v : data_) v *= c;
    return *this;
  }

  void axpy(cplx a, const Tensor& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * o.data_[i];
  }

  void conj_inplace() {
    for (auto& v : data_) v = std::conj(v);
  }

  // Rearranges slots: out(i_0, ..., i_{r-1}) = in(i_{perm[0]}, ...).  A pure
  // data move; no exchange phases.
  Tensor slot_permute(const std::vector<int>& perm) const {
    Tensor out(n_points_, rank_);
    if (rank_ == 0) {
      out.data_[0] = data_[0];
      return out;
    }
    std::vector<std::size_t> stride_of(rank_);
    for (int i = 0; i < rank_; ++i) stride_of[i] = stride(i);
    std::vector<int> digits(rank_, 0);
    std::size_t flat = 0;
    do {
      std::size_t src = 0;
      for (int slot = 0; slot < rank_; ++slot) {
        src += stride_of[slot] * static_cast<std::size_t>(digits[perm[slot]]);
      }
      out.data_[flat++] = data_[src];
    } while (next_index(digits, n_points_));
    return out;
  }

  // Reverses the order of the first k slots (identity on the rest).
  Tensor reverse_front(int k) const {
    std::vector<int> perm(rank_);
    for (int i = 0; i < rank_; ++i) perm[i] = i;
    std::reverse(perm.begin(), perm.begin() + k);
    return slot_permute(perm);
  }

  bool is_zero() const {
    for (const auto& v : data_) {
      if (v != cplx(0.0)) return false;
    }
    return true;
  }

  void check_same_shape(const Tensor& o) const {
    if (n_points_ != o.n_points_ || rank_ != o.rank_) {
      throw ShapeMismatchError("tensor shapes differ");
    }
  }

 private:
  int n_points_;
  int rank_;
  std::vector<cplx> data_;
};

// Product of trapezoidal weights over a multi-index.
inline double index_weight(const RapidityGrid& grid,
                           const std::vector<int>& digits) {
  double w = 1.0;
  for (int d : digits) w *= grid.weight(d);
  return w;
}

// <a, b> = sum_idx prod(w) conj(a) b; the inner product every adjoint and
// norm in the library refers to.
inline cplx weighted_dot(const RapidityGrid& grid, const Tensor& a,
                         const Tensor& b) {
  a.check_same_shape(b);
  if (a.rank() == 0) return std::conj(a[0]) * b[0];
  std::vector<int> digits(a.rank(), 0);
  std::size_t flat = 0;
  cplx acc = 0.0;
  do {
    acc += index_weight(grid, digits) * std::conj(a[flat]) * b[flat];
    ++flat;
  } while (Tensor::next_index(digits, a.n_points()));
  return acc;
}

inline double weighted_norm_sq(const RapidityGrid& grid, const Tensor& a) {
  if (a.rank() == 0) return std::norm(a[0]);
  std::vector<int> digits(a.rank(), 0);
  std::size_t flat = 0;
  double acc = 0.0;
  do {
    acc += index_weight(grid, digits) * std::norm(a[flat]);
    ++flat;
  } while (Tensor::next_index(digits, a.n_points()));
  return acc;
}

inline double weighted_norm(const RapidityGrid& grid, const Tensor& a) {
  return std::sqrt(weighted_norm_sq(grid, a));
}

}  // namespace zflab

#endif
