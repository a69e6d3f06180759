#include "heatk/jacobi_kernel.hpp"

#include "heatk/endpoint_table.hpp"
#include "heatk/pi_average.hpp"
#include "series.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace heatk {

namespace {

std::atomic<double> g_time_floor{1e-4};

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time must be positive");
}

// Rough log of the kernel size, used to aim truncation and precision. It
// only needs to be within a few dozen e-folds; the result is verified.
double log_size_guess(double a, double b, double x, double y, double t) {
  const double pi = std::numbers::pi;
  const double u = std::acos(x), v = std::acos(y);
  const double d = u - v;
  return -(a + 0.5) * std::log(t + u * v) - (b + 0.5) * std::log(t + (pi - u) * (pi - v)) -
         0.5 * std::log(t) - d * d / (4.0 * t);
}

KernelValue evaluate(double a, double b, double x, double y, double t, double rel_tol,
                     int min_order) {
  double guess = log_size_guess(a, b, x, y, t) - 20.0;
  for (int attempt = 0; attempt < 16; ++attempt) {
    const double log_delta = guess + std::log(rel_tol) - std::log(4.0);
    const auto bounds = detail::log_term_bounds(a, b, t, log_delta - 5.0);
    const int n = std::max(detail::order_from_bounds(bounds, log_delta), min_order);
    const double log_bound = detail::log_partial_bound(bounds, n);
    const double range = log_bound - log_delta;

    if (range < 30.0) {
      const auto s = detail::series_double(a, b, x, y, t, n);
      const double err = 2.0 * (n + 1) * kEps * s.abs_sum;
      if (s.sum > 0.0 && err <= rel_tol * s.sum && std::log(s.sum) >= guess)
        return {s.sum, std::log(s.sum), n + 1, 53};
      if (s.sum > 0.0 && std::log(s.sum) < guess) {
        guess = std::log(s.sum) - 5.0;
        continue;
      }
    }

    const long bits = detail::precision_tier(range / std::numbers::ln2 + std::log2(n + 1.0) + 24.0);
    const auto m = detail::series_mp(a, b, x, y, t, n, bits);
    if (m.positive) {
      const double log_err = detail::log_add(
          m.log_abs_sum + std::log(4.0 * (n + 1)) - static_cast<double>(bits) * std::numbers::ln2,
          m.log_taper_err);
      if (m.log_value >= guess && log_err <= m.log_value + std::log(rel_tol))
        return {m.value, m.log_value, n + 1, bits};
      guess = std::min(guess, m.log_value) - 5.0;
    } else {
      guess -= std::max(40.0, 0.5 * std::abs(guess));
    }
  }
  throw std::runtime_error("heat kernel evaluation did not converge");
}

double reduced_table_reach(double s) {
  // Angles reached by the reduction integrand stay below pi/2 on the
  // dominant quadrant; allow the kept region to widen a few times past it.
  const double half = std::numbers::pi / 2;
  return std::min(std::numbers::pi, std::sqrt(half * half + 4.0 * s * 640.0));
}

}  // namespace

double time_floor() { return g_time_floor.load(); }

void set_time_floor(double t_min) {
  if (!(t_min > 0.0)) throw DomainError("time floor must be positive");
  g_time_floor.store(t_min);
}

Eigenvalue eigenvalue(const JacobiParams& p, int n) {
  if (n < 0) throw DomainError("degree must be non-negative");
  return {n, n * (n + p.alpha() + p.beta() + 1.0)};
}

int truncation_order(const JacobiParams& p, double t, double tol) {
  check_time(t);
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const double log_tol = std::log(tol);
  const auto bounds = detail::log_term_bounds(p.alpha(), p.beta(), t, log_tol - 5.0);
  return detail::order_from_bounds(bounds, log_tol);
}

double heat_kernel(const HeatQuery& q) {
  check_time(q.t);
  if (q.t < time_floor())
    throw DomainError("t = " + std::to_string(q.t) + " is below the time floor " +
                      std::to_string(time_floor()) +
                      "; the series needs too many terms there (lower the floor explicitly)");
  if (!(q.tol > 0.0)) throw DomainError("tolerance must be positive");
  const double x = detail::clamp_unit(q.x, "x");
  const double y = detail::clamp_unit(q.y, "y");
  const double a = q.params.alpha(), b = q.params.beta();
  const int n = truncation_order(q.params, q.t, q.tol);
  const auto s = detail::series_double(a, b, x, y, q.t, n);
  const double err = 2.0 * (n + 1) * kEps * s.abs_sum;
  if (err <= q.tol || (s.sum > 0.0 && err <= 1e-10 * s.sum)) return s.sum;
  // Cancellation ate the binary64 result: sum the same series accurately.
  return evaluate(a, b, x, y, q.t, 1e-12, n).value;
}

KernelValue log_heat_kernel(const JacobiParams& p, double x, double y, double t, double rel_tol) {
  check_time(t);
  if (!(rel_tol > 0.0)) throw DomainError("tolerance must be positive");
  x = detail::clamp_unit(x, "x");
  y = detail::clamp_unit(y, "y");
  return evaluate(p.alpha(), p.beta(), x, y, t, rel_tol, 0);
}

double log_heat_kernel_reduced(double alpha, double beta, double phi, double psi, double t,
                               double rel_tol) {
  if (!(alpha >= -0.5) || !(beta >= -0.5))
    throw DomainError("the reduction formula needs alpha, beta >= -1/2");
  check_time(t);
  const double pi = std::numbers::pi;
  if (!(phi >= 0.0 && phi <= pi && psi >= 0.0 && psi <= pi))
    throw DomainError("angles must lie in [0, pi]");
  const double lam = alpha + beta + 0.5;
  const double s = t / 4.0;
  const auto table = EndpointTable::cached(lam, lam, s, reduced_table_reach(s));
  LinearForm form;
  form.c = {std::sin(phi / 2) * std::sin(psi / 2), std::cos(phi / 2) * std::cos(psi / 2)};
  const double q = std::sin((phi - psi) / 4);
  form.one_minus_top = 2.0 * q * q;
  form.one_plus_a = 1.0;
  const double nus[2] = {alpha, beta};
  AverageOptions opts;
  opts.points = 96;
  opts.rel_tol = rel_tol;
  const double avg =
      log_pi_average([&](double th) { return table->log_value(th); }, s, form, nus, opts);
  const double log_c = 0.5 * std::log(pi) + log_gamma(alpha + beta + 1.5) -
                       (alpha + beta + 1.0) * std::numbers::ln2 - log_gamma(alpha + 1.0) -
                       log_gamma(beta + 1.0);
  return log_c + avg;
}

double heat_kernel_reduced(double alpha, double beta, double phi, double psi, double t,
                           double tol) {
  return std::exp(log_heat_kernel_reduced(alpha, beta, phi, psi, t, std::min(tol, 1e-10)));
}

double log_heat_kernel_dx_at_one(const JacobiParams& p, double x, double t, double rel_tol) {
  const JacobiParams up = p.shifted(1.0);
  return std::log(2.0 * (p.alpha() + 1.0)) - t * (p.alpha() + p.beta() + 2.0) +
         log_heat_kernel(up, x, 1.0, t, rel_tol).log_value;
}

double heat_kernel_dx_at_one(const JacobiParams& p, double x, double t) {
  const JacobiParams up = p.shifted(1.0);
  return 2.0 * (p.alpha() + 1.0) * std::exp(-t * (p.alpha() + p.beta() + 2.0)) *
         log_heat_kernel(up, x, 1.0, t, 1e-12).value;
}

QuadraticResiduals quadratic_transform_pair(double alpha, double x, double y, double t) {
  check_time(t);
  x = detail::clamp_unit(x, "x");
  y = detail::clamp_unit(y, "y");
  const JacobiParams ultra(alpha, alpha);
  const JacobiParams minus(alpha, -0.5);
  const JacobiParams plus(alpha, 0.5);
  auto value = [&](const JacobiParams& p, double u, double v, double s) {
    return log_heat_kernel(p, u, v, s, 1e-15).value;
  };
  const double X = std::min(1.0, std::max(-1.0, 2.0 * x * x - 1.0));
  const double Y = std::min(1.0, std::max(-1.0, 2.0 * y * y - 1.0));
  const double g_pos = value(ultra, x, y, t / 4.0);
  const double g_neg = value(ultra, -x, y, t / 4.0);
  QuadraticResiduals r;
  r.first_value = value(minus, X, Y, t);
  r.first = r.first_value - std::pow(2.0, -alpha - 1.5) * (g_pos + g_neg);
  if (x * y == 0.0) {
    r.second_skipped = true;
  } else {
    r.second_value = value(plus, X, Y, t);
    r.second = r.second_value -
               std::pow(2.0, -alpha - 2.5) * std::exp(t * (alpha + 1.0) / 2.0) / (x * y) *
                   (g_pos - g_neg);
  }
  return r;
}

ComparisonSides comparison_sides(double alpha, double beta, double delta, double x, double y,
                                 double t) {
  if (!(delta >= 0.0) || !(beta >= -delta / 2.0))
    throw DomainError("comparison needs delta >= 0 and beta >= -delta/2");
  const JacobiParams base(alpha, beta);
  const JacobiParams raised(alpha, beta + delta);
  check_time(t);
  x = detail::clamp_unit(x, "x");
  y = detail::clamp_unit(y, "y");
  ComparisonSides s;
  s.lhs = std::pow((1.0 + x) * (1.0 + y), delta / 2.0) *
          log_heat_kernel(raised, x, y, t, 1e-14).value;
  s.rhs = std::exp(delta * (alpha + beta + 1.0 + delta / 2.0) * t / 2.0) *
          log_heat_kernel(base, x, y, t, 1e-14).value;
  return s;
}

bool comparison_check(double alpha, double beta, double delta, double x, double y, double t) {
  const ComparisonSides s = comparison_sides(alpha, beta, delta, x, y, t);
  return s.lhs <= s.rhs + 1e-12 * std::max(1.0, s.rhs);
}

}  // namespace heatk
