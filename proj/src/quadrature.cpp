#include "heatk/quadrature.hpp"

#include "heatk/specfun.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <shared_mutex>
#include <tuple>

namespace heatk {

namespace {

template <class Key, class Value>
class WriteOnceCache {
 public:
  template <class Make>
  std::shared_ptr<const Value> get(const Key& key, Make&& make) {
    {
      std::shared_lock lock(mutex_);
      auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    auto fresh = std::make_shared<const Value>(make());
    std::unique_lock lock(mutex_);
    auto [it, inserted] = map_.emplace(key, std::move(fresh));
    return it->second;
  }

 private:
  std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const Value>> map_;
};

WriteOnceCache<std::tuple<double, double, int>, GaussRule>& gauss_cache() {
  static WriteOnceCache<std::tuple<double, double, int>, GaussRule> c;
  return c;
}

WriteOnceCache<std::pair<double, int>, QuadratureRule>& pi_cache() {
  static WriteOnceCache<std::pair<double, int>, QuadratureRule> c;
  return c;
}

void check_nu(double nu) {
  if (!(nu >= -0.5) || !std::isfinite(nu)) throw DomainError("Pi_nu requires nu >= -1/2");
}

}  // namespace

double pi_density_constant(double nu) {
  return std::exp(log_gamma(nu + 1.0) - log_gamma(nu + 0.5)) / std::sqrt(std::numbers::pi);
}

GaussRule gauss_jacobi(double a, double b, int m) {
  if (m < 1) throw DomainError("quadrature needs at least one point");
  if (!(a > -1.0) || !(b > -1.0)) throw DomainError("Jacobi weight requires a, b > -1");

  // Jacobi matrix of the monic recurrence.
  Eigen::VectorXd diag(m), off(std::max(m - 1, 1));
  const double ab = a + b;
  for (int n = 0; n < m; ++n) {
    if (n == 0)
      diag[n] = (b - a) / (ab + 2.0);
    else
      diag[n] = (b * b - a * a) / ((2.0 * n + ab) * (2.0 * n + ab + 2.0));
  }
  for (int n = 1; n < m; ++n) {
    double b2;
    if (n == 1) {
      b2 = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double s = 2.0 * n + ab;
      b2 = 4.0 * n * (n + a) * (n + b) * (n + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    off[n - 1] = std::sqrt(b2);
  }

  GaussRule r;
  r.nodes.resize(m);
  r.weights.resize(m);
  const double mu0 = jacobi_norm_h(JacobiParams(a, b), 0);
  if (m == 1) {
    r.nodes[0] = diag[0];
    r.weights[0] = mu0;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off.head(m - 1), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw std::runtime_error("Golub-Welsch eigen-solve failed");
  for (int k = 0; k < m; ++k) {
    r.nodes[k] = es.eigenvalues()[k];
    const double v = es.eigenvectors()(0, k);
    r.weights[k] = mu0 * v * v;
  }
  return r;
}

std::shared_ptr<const GaussRule> cached_gauss_jacobi(double a, double b, int m) {
  return gauss_cache().get({a, b, m}, [&] { return gauss_jacobi(a, b, m); });
}

QuadratureRule gauss_jacobi_rule(double nu, int m) {
  if (m < 1) throw DomainError("quadrature needs at least one point");
  if (!(nu > -0.5)) throw DomainError("gauss_jacobi_rule requires nu > -1/2");
  GaussRule g = gauss_jacobi(nu - 0.5, nu - 0.5, m);
  QuadratureRule r{nu, std::move(g.nodes), std::move(g.weights)};
  // Enforce exact antisymmetry of nodes and symmetry of weights.
  for (int k = 0; k < m / 2; ++k) {
    const int j = m - 1 - k;
    const double x = 0.5 * (r.nodes[j] - r.nodes[k]);
    const double w = 0.5 * (r.weights[j] + r.weights[k]);
    r.nodes[k] = -x;
    r.nodes[j] = x;
    r.weights[k] = r.weights[j] = w;
  }
  if (m % 2 == 1) r.nodes[m / 2] = 0.0;
  const double total = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
  for (double& w : r.weights) w /= total;
  return r;
}

QuadratureRule pi_rule(double nu, int m) {
  check_nu(nu);
  if (nu == -0.5) return {nu, {-1.0, 1.0}, {0.5, 0.5}};
  return gauss_jacobi_rule(nu, m);
}

std::shared_ptr<const QuadratureRule> cached_pi_rule(double nu, int m) {
  check_nu(nu);
  if (m < 1) throw DomainError("quadrature needs at least one point");
  return pi_cache().get({nu, m}, [&] { return pi_rule(nu, m); });
}

TensorRule tensor_rule(std::span<const double> nus, int m) {
  if (nus.empty()) throw DomainError("tensor rule needs at least one factor");
  TensorRule t;
  for (double nu : nus) t.factors.push_back(*cached_pi_rule(nu, m));
  return t;
}

namespace detail {
void check_tensor(const TensorRule& rules) {
  if (rules.factors.empty()) throw DomainError("tensor rule needs at least one factor");
  for (const auto& f : rules.factors)
    if (f.size() == 0) throw DomainError("empty quadrature factor");
}
}  // namespace detail

GapRule pi_rule_near_one(double nu, int m, double r) {
  if (!(nu > -0.5)) throw DomainError("panel rule requires nu > -1/2");
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("panel length must lie in (0,1]");
  // u = 1 - r(1-s)/2; (1-u)^{nu-1/2} goes into the Gauss-Jacobi weight,
  // (1+u)^{nu-1/2} = (2 - gap)^{nu-1/2} is smooth because u >= 0.
  const auto g = cached_gauss_jacobi(nu - 0.5, 0.0, m);
  const double scale = pi_density_constant(nu) * std::pow(0.5 * r, nu + 0.5);
  GapRule out;
  out.nodes.resize(m);
  out.gaps.resize(m);
  out.weights.resize(m);
  for (int k = 0; k < m; ++k) {
    // Eigenvalue order is increasing in s, i.e. decreasing gap; store
    // increasing gap instead.
    const int src = m - 1 - k;
    const double gap = 0.5 * r * (1.0 - g->nodes[src]);
    out.gaps[k] = gap;
    out.nodes[k] = 1.0 - gap;
    out.weights[k] = scale * g->weights[src] * std::pow(2.0 - gap, nu - 0.5);
  }
  return out;
}

GapRule half_pi_rule(double nu, int m, double resolution) {
  check_nu(nu);
  if (m < 1) throw DomainError("quadrature needs at least one point");
  if (nu == -0.5) return {{1.0}, {0.0}, {0.5}};
  if (!(resolution > 0.0)) throw DomainError("resolution must be positive");
  if (resolution >= 1.0) return pi_rule_near_one(nu, m, 1.0);

  GapRule out = pi_rule_near_one(nu, m, resolution);
  const auto leg = cached_gauss_jacobi(0.0, 0.0, m);
  const double c = pi_density_constant(nu);
  double lo = resolution;
  while (lo < 1.0) {
    const double hi = std::min(2.0 * lo, 1.0);
    const double half = 0.5 * (hi - lo);
    for (int k = 0; k < m; ++k) {
      const double gap = lo + half * (1.0 + leg->nodes[k]);
      out.gaps.push_back(gap);
      out.nodes.push_back(1.0 - gap);
      out.weights.push_back(c * half * leg->weights[k] * std::pow(gap * (2.0 - gap), nu - 0.5));
    }
    lo = hi;
  }
  return out;
}

}  // namespace heatk
