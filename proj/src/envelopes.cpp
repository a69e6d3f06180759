#include "heatk/envelopes.hpp"

#include "heatk/model_spaces.hpp"
#include "heatk/quadrature.hpp"
#include "heatk/specfun.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace heatk {

namespace {

constexpr double kPi = std::numbers::pi;

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time must be positive");
}

double check_angle(double a, const char* what) {
  if (!(a >= -1e-14 && a <= kPi + 1e-14)) throw DomainError(std::string(what) + " outside [0, pi]");
  return std::clamp(a, 0.0, kPi);
}

EnvelopeValue finish(EnvelopeValue e) {
  e.log_value = e.log_product();
  e.value = std::exp(e.log_value);
  return e;
}

}  // namespace

double EnvelopeValue::log_product() const {
  return std::accumulate(log_poly.begin(), log_poly.end(), 0.0) + log_time + log_gauss;
}

EnvelopeValue env_jac_gen(double alpha, double beta, double phi, double psi, double t) {
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("alpha and beta must exceed -1");
  check_time(t);
  phi = check_angle(phi, "phi");
  psi = check_angle(psi, "psi");
  EnvelopeValue e;
  e.log_poly = {-(alpha + 0.5) * std::log(t + phi * psi),
                -(beta + 0.5) * std::log(t + (kPi - phi) * (kPi - psi))};
  e.log_time = -0.5 * std::log(t);
  const double d = phi - psi;
  e.log_gauss = -d * d / (4.0 * t);
  return finish(e);
}

EnvelopeValue env_jac_spec(double lambda, double phi, double t) {
  if (!(lambda > -1.0)) throw DomainError("lambda must exceed -1");
  check_time(t);
  phi = check_angle(phi, "phi");
  EnvelopeValue e;
  e.log_poly = {-(lambda + 0.5) * std::log(t), -(lambda + 0.5) * std::log(t + kPi - phi)};
  e.log_time = -0.5 * std::log(t);
  e.log_gauss = -phi * phi / (4.0 * t);
  return finish(e);
}

EnvelopeValue env_symmetric(int d, int d_tilde, double dist, double t) {
  if (!valid_antipodal_data(d, d_tilde)) throw DomainError("no symmetric space with these dimensions");
  check_time(t);
  dist = check_angle(dist, "distance");
  EnvelopeValue e;
  e.log_poly = {-0.5 * (d - d_tilde - 1) * std::log(t + kPi - dist)};
  e.log_time = -0.5 * d * std::log(t);
  e.log_gauss = -dist * dist / (4.0 * t);
  return finish(e);
}

DerivativeEnvelope env_symmetric_derivative(int d, int d_tilde, double phi, double t) {
  if (!valid_antipodal_data(d, d_tilde)) throw DomainError("no symmetric space with these dimensions");
  check_time(t);
  phi = check_angle(phi, "phi");
  const double log_shape = std::log(phi) + std::log(kPi - phi);
  DerivativeEnvelope out;
  if (t <= 1.0) {
    EnvelopeValue e;
    e.log_poly = {log_shape, -0.5 * (d + 1 - d_tilde) * std::log(t + kPi - phi)};
    e.log_time = -(0.5 * d + 1.0) * std::log(t);
    e.log_gauss = -phi * phi / (4.0 * t);
    out.short_time = finish(e);
  }
  if (t >= 1.0) {
    EnvelopeValue e;
    e.log_poly = {log_shape};
    e.log_time = -t * (d - 0.5 * d_tilde);
    out.long_time = finish(e);
  }
  return out;
}

EnvelopeValue env_ball(double mu, std::span<const double> x, std::span<const double> y, double t) {
  if (!(mu >= 0.0)) throw DomainError("mu must be non-negative");
  check_time(t);
  const BallPair p = ball_pair(x, y);
  const int d = static_cast<int>(x.size());
  const double lam = mu + 0.5 * (d - 1);
  const double dist = 2.0 * std::atan2(std::sqrt(p.one_minus_w), std::sqrt(p.one_plus_w));
  const double gap = 2.0 * std::atan2(std::sqrt(p.one_plus_w), std::sqrt(p.one_minus_w));  // pi - dist
  // The fraction tends to 0 at antipodal pairs, where ab = 0.
  const double frac = p.ab > 0.0 ? p.ab / gap : 0.0;
  EnvelopeValue e;
  e.log_poly = {-lam * std::log(t + gap), -mu * std::log(t + frac)};
  e.log_time = -0.5 * d * std::log(t);
  e.log_gauss = -dist * dist / (4.0 * t);
  return finish(e);
}

EnvelopeValue env_simplex(std::span<const double> kappa, std::span<const double> x,
                          std::span<const double> y, double t) {
  if (x.size() != y.size() || kappa.size() != x.size() + 1)
    throw DomainError("kappa needs d+1 entries for points in d coordinates");
  for (double k : kappa)
    if (!(k >= 0.0)) throw DomainError("kappa entries must be non-negative");
  check_time(t);
  const auto X = simplex_coords(x);
  const auto Y = simplex_coords(y);
  const double dist = dist_simplex(x, y);
  EnvelopeValue e;
  for (std::size_t j = 0; j < kappa.size(); ++j)
    e.log_poly.push_back(kappa[j] == 0.0 ? 0.0 : -kappa[j] * std::log(t + std::sqrt(X[j] * Y[j])));
  e.log_time = -0.5 * static_cast<double>(x.size()) * std::log(t);
  e.log_gauss = -dist * dist / t;
  return finish(e);
}

LemmaPair lemma_fvii_pair(double nu, double xi, double A, double B, double D) {
  if (!(nu >= -0.5)) throw DomainError("nu must be at least -1/2");
  if (!(B >= 0.0 && B <= 1.0)) throw DomainError("B must lie in [0, 1]");
  if (!(A >= -1.0 && A <= 1.0 - B + 1e-15)) throw DomainError("A must lie in [-1, 1 - B]");
  if (!(D > 0.0)) throw DomainError("D must be positive");

  // Phi(w) through its gap to w = 1: 1 - (A + B w) = (1 - A - B) + B (1 - w).
  const double top_gap = std::max(0.0, 1.0 - A - B);
  auto phi_of_gap = [&](double v) {
    const double one_minus_z = top_gap + B * v;
    return 2.0 * std::asin(std::sqrt(std::min(1.0, 0.5 * one_minus_z)));
  };
  const double phi1 = phi_of_gap(0.0);
  const double pi_gap1 = 2.0 * std::asin(std::sqrt(std::min(1.0, 0.5 * (1.0 + A + B))));  // pi - Phi(1)

  LemmaPair out;
  out.log_scale = -phi1 * phi1 / D;
  const double f1 = std::pow(pi_gap1 + D, -xi);

  if (nu == -0.5) {
    out.lhs = 0.5 * f1;
  } else if (B == 0.0) {
    out.lhs = 0.5 * f1;  // constant integrand, Pi_nu([0,1]) = 1/2
  } else {
    const double c = pi_density_constant(nu);
    auto integrand = [&](double v) -> double {
      if (!(v > 0.0)) return 0.0;
      const double ph = phi_of_gap(v);
      const double density = c * std::pow(v * (2.0 - v), nu - 0.5);
      return density * std::pow(kPi - ph + D, -xi) * std::exp(-(ph - phi1) * (ph + phi1) / D);
    };
    boost::math::quadrature::tanh_sinh<double> ts(18);
    out.lhs = ts.integrate(integrand, 0.0, 1.0, 1e-12);
  }

  const double frac = B == 0.0 ? 0.0 : B / pi_gap1;
  out.rhs = std::pow(D, nu + 0.5) * f1 * std::pow(frac + D, -nu - 0.5);
  return out;
}

LemmaPair lemma_f7_pair(double gamma, double a, double b) {
  if (!(gamma > -1.0)) throw DomainError("gamma must exceed -1");
  if (!(a >= 0.0) || !(b >= a)) throw DomainError("need 0 <= a <= b");
  LemmaPair out;
  out.log_scale = -a * a;
  if (b == a) return out;

  // x = a + s^2 removes the (x - a)^gamma endpoint singularity; e^{-a^2} is
  // factored out.
  auto integrand = [&](double s) -> double {
    if (!(s > 0.0)) return 0.0;
    const double s2 = s * s;
    return 2.0 * std::exp((2.0 * gamma + 1.0) * std::log(s) + (gamma + 1.0) * std::log(a + s2) -
                          s2 * (2.0 * a + s2));
  };
  if (std::isinf(b)) {
    boost::math::quadrature::exp_sinh<double> es;
    out.lhs = es.integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), 1e-12);
    out.rhs = 1.0;
  } else {
    boost::math::quadrature::tanh_sinh<double> ts(18);
    out.lhs = ts.integrate(integrand, 0.0, std::sqrt(b - a), 1e-12);
    const double p = (b - a) * b;
    out.rhs = std::pow(p / (p + 1.0), gamma + 1.0);
  }
  return out;
}

}  // namespace heatk
