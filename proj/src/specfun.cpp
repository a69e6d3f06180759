#include "heatk/specfun.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace heatk {

namespace detail {

double clamp_unit(double x, const char* what) {
  if (!(x >= -1.0 - 1e-14 && x <= 1.0 + 1e-14))
    throw DomainError(std::string(what) + " must lie in [-1,1]");
  return std::clamp(x, -1.0, 1.0);
}

namespace {

// Unchecked upward recurrence; x may be any real.
template <class Sink>
void recur(double a, double b, int n, double x, Sink&& sink) {
  double p0 = 1.0;
  sink(0, p0);
  if (n == 0) return;
  double p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
  sink(1, p1);
  for (int k = 2; k <= n; ++k) {
    const double s = 2.0 * k + a + b;
    const double denom = 2.0 * k * (k + a + b) * (s - 2.0);
    const double g1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double g0 = -2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double p2 = (g1 * p1 + g0 * p0) / denom;
    p0 = p1;
    p1 = p2;
    sink(k, p1);
  }
}

}  // namespace
}  // namespace detail

JacobiParams::JacobiParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > -1.0) || !(beta > -1.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw DomainError("Jacobi parameters must satisfy alpha > -1 and beta > -1");
}

double log_gamma(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("log_gamma requires z > 0");
  return boost::math::lgamma(z);
}

double jacobi_poly(const JacobiParams& p, int n, double x) {
  if (n < 0) throw DomainError("degree must be non-negative");
  x = detail::clamp_unit(x, "x");
  double out = 1.0;
  detail::recur(p.alpha(), p.beta(), n, x, [&](int, double v) { out = v; });
  return out;
}

std::vector<double> jacobi_poly_upto(const JacobiParams& p, int n, double x) {
  if (n < 0) throw DomainError("degree must be non-negative");
  x = detail::clamp_unit(x, "x");
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  detail::recur(p.alpha(), p.beta(), n, x, [&](int k, double v) { out[k] = v; });
  return out;
}

PolyEval jacobi_eval(const JacobiParams& p, int n, double x) {
  return {n, jacobi_poly(p, n, x), jacobi_at_one(p, n)};
}

double log_jacobi_norm_h(const JacobiParams& p, int n) {
  if (n < 0) throw DomainError("degree must be non-negative");
  const double a = p.alpha(), b = p.beta();
  double r = (a + b + 1.0) * std::numbers::ln2 + log_gamma(n + a + 1.0) + log_gamma(n + b + 1.0) -
             log_gamma(n + 1.0);
  // (2n+a+b+1) Gamma(n+a+b+1) collapses to Gamma(a+b+2) at n = 0, which also
  // covers a+b+1 = 0.
  if (n == 0)
    r -= log_gamma(a + b + 2.0);
  else
    r -= std::log(2.0 * n + a + b + 1.0) + log_gamma(n + a + b + 1.0);
  return r;
}

double jacobi_norm_h(const JacobiParams& p, int n) { return std::exp(log_jacobi_norm_h(p, n)); }

double log_jacobi_at_one(const JacobiParams& p, int n) {
  if (n < 0) throw DomainError("degree must be non-negative");
  if (n == 0) return 0.0;
  return log_gamma(n + p.alpha() + 1.0) - log_gamma(n + 1.0) - log_gamma(p.alpha() + 1.0);
}

double jacobi_at_one(const JacobiParams& p, int n) { return std::exp(log_jacobi_at_one(p, n)); }

double gegenbauer(double lambda, int n, double x) {
  if (!(lambda > -0.5) || lambda == 0.0)
    throw DomainError("gegenbauer requires lambda > -1/2 and lambda != 0");
  if (n < 0) throw DomainError("degree must be non-negative");
  if (n == 0) return 1.0;
  // (2 lambda)_n / (lambda + 1/2)_n
  double factor;
  if (lambda > 0.0) {
    factor = std::exp(log_gamma(2.0 * lambda + n) - log_gamma(2.0 * lambda) +
                      log_gamma(lambda + 0.5) - log_gamma(lambda + 0.5 + n));
  } else {
    factor = 1.0;
    for (int k = 0; k < n; ++k) factor *= (2.0 * lambda + k) / (lambda + 0.5 + k);
  }
  const double a = lambda - 0.5;
  double pn = 1.0;
  detail::recur(a, a, n, x, [&](int, double v) { pn = v; });
  return factor * pn;
}

}  // namespace heatk
