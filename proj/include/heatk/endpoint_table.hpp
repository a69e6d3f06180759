#pragma once

#include <memory>
#include <vector>

namespace heatk {

// Interpolant of theta -> log G_s^{a,b}(cos theta, 1) on [0, theta_max].
// Stores q(theta) = log G + theta^2/(4s), which is smooth, on Chebyshev
// panels that are graded toward theta = pi where q has a boundary layer of
// width ~s.
class EndpointTable {
 public:
  EndpointTable(double a, double b, double s, double theta_max, double rel_tol = 1e-11);

  double log_value(double theta) const;
  double theta_max() const { return theta_max_; }
  double time() const { return s_; }
  std::size_t node_count() const { return values_.size(); }

  // Shared instance covering at least [0, theta_max].
  static std::shared_ptr<const EndpointTable> cached(double a, double b, double s,
                                                     double theta_max);

 private:
  double a_, b_, s_, theta_max_;
  std::vector<double> breaks_;  // panel endpoints
  std::vector<double> values_;  // (kOrder+1) samples of q per panel
};

}  // namespace heatk
