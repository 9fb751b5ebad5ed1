#ifndef ZFLAB_GRID_HPP
#define ZFLAB_GRID_HPP

#include <vector>

#include "zflab/errors.hpp"

namespace zflab {

// Uniform rapidity grid on [theta_min, theta_max] with trapezoidal
// quadrature weights; the weights define every inner product and every
// discretized integral in the library, and the half-weight endpoints keep
// sum(w) equal to the window length exactly.
class RapidityGrid {
 public:
  RapidityGrid(double theta_min, double theta_max, int n_points)
      : theta_min_(theta_min), theta_max_(theta_max), n_points_(n_points) {
    if (n_points < 2) throw DimensionError("grid needs at least two points");
    if (!(theta_max > theta_min)) {
      throw DimensionError("grid window must have positive length");
    }
    dtheta_ = (theta_max_ - theta_min_) / (n_points_ - 1);
    weights_.assign(n_points_, dtheta_);
    weights_.front() = 0.5 * dtheta_;
    weights_.back() = 0.5 * dtheta_;
  }

  int size() const { return n_points_; }
  double theta_min() const { return theta_min_; }
  double theta_max() const { return theta_max_; }
  double dtheta() const { return dtheta_; }
  double theta(int i) const { return theta_min_ + i * dtheta_; }
  double weight(int i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

  friend bool operator==(const RapidityGrid& a, const RapidityGrid& b) {
    return a.theta_min_ == b.theta_min_ && a.theta_max_ == b.theta_max_ &&
           a.n_points_ == b.n_points_;
  }

 private:
  double theta_min_;
  double theta_max_;
  int n_points_;
  double dtheta_;
  std::vector<double> weights_;
};

}  // namespace zflab

#endif
