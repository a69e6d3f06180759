#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace heatk {

// Discretization of the probability measure
//   dPi_nu(w) = c_nu (1 - w^2)^{nu - 1/2} dw   on [-1,1],
// with Pi_{-1/2} the mean of the Dirac masses at -1 and 1.
struct QuadratureRule {
  double nu = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

struct TensorRule {
  std::vector<QuadratureRule> factors;
};

// Gauss rule for the unnormalized weight (1-x)^a (1+x)^b; weights sum to
// the total mass of that weight.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// A rule on a sub-interval touching w = 1, with 1 - w stored separately so
// that nodes very close to 1 keep their relative resolution.
struct GapRule {
  std::vector<double> nodes;
  std::vector<double> gaps;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

// c_nu = Gamma(nu+1) / (sqrt(pi) Gamma(nu+1/2)) for nu > -1/2.
double pi_density_constant(double nu);

GaussRule gauss_jacobi(double a, double b, int m);
std::shared_ptr<const GaussRule> cached_gauss_jacobi(double a, double b, int m);

// m-point Gauss rule for Pi_nu, nu > -1/2.
QuadratureRule gauss_jacobi_rule(double nu, int m);
// Like gauss_jacobi_rule but also accepts nu = -1/2 (two atoms).
QuadratureRule pi_rule(double nu, int m);
std::shared_ptr<const QuadratureRule> cached_pi_rule(double nu, int m);

TensorRule tensor_rule(std::span<const double> nus, int m);

// Pi_nu restricted to [0,1] (total mass 1/2). resolution >= 1 gives a
// single substituted Gauss panel; smaller values add geometrically graded
// panels so that features of width ~resolution near w = 1 are resolved.
GapRule half_pi_rule(double nu, int m, double resolution = 1.0);

// Pi_nu restricted to [1 - r, 1], 0 < r <= 1, nu > -1/2.
GapRule pi_rule_near_one(double nu, int m, double r);

template <class F>
double integrate_pi(F&& f, const QuadratureRule& rule) {
  double s = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) s += rule.weights[k] * f(rule.nodes[k]);
  return s;
}

template <class F>
double integrate_pi(F&& f, double nu, int m) {
  if (nu == -0.5) return 0.5 * (f(-1.0) + f(1.0));
  return integrate_pi(f, *cached_pi_rule(nu, m));
}

template <class F>
double integrate_pi_half(F&& f, double nu, int m, double resolution = 1.0) {
  const GapRule r = half_pi_rule(nu, m, resolution);
  double s = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) s += r.weights[k] * f(r.nodes[k]);
  return s;
}

namespace detail {
void check_tensor(const TensorRule& rules);
}

// Full tensor-grid sum; f receives a span of length rules.factors.size().
template <class F>
double integrate_tensor(F&& f, const TensorRule& rules) {
  detail::check_tensor(rules);
  const std::size_t k = rules.factors.size();
  std::vector<std::size_t> idx(k, 0);
  std::vector<double> u(k);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
      u[j] = rules.factors[j].nodes[idx[j]];
      w *= rules.factors[j].weights[idx[j]];
    }
    total += w * f(std::span<const double>(u));
    std::size_t j = 0;
    while (j < k && ++idx[j] == rules.factors[j].size()) idx[j++] = 0;
    if (j == k) break;
  }
  return total;
}

}  // namespace heatk
