#include "heatk/jacobi_kernel.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace heatk;

namespace {

constexpr double kPi = std::numbers::pi;

// Circle kernel by the method of images: (4 pi t)^{-1/2} sum_k e^{-(th + 2 pi k)^2 / 4t},
// returned as a logarithm.
double log_circle(double th, double t) {
  double m = -INFINITY;
  for (int k = -3; k <= 3; ++k) m = std::max(m, -std::pow(th + 2 * kPi * k, 2) / (4 * t));
  double s = 0.0;
  for (int k = -3; k <= 3; ++k) s += std::exp(-std::pow(th + 2 * kPi * k, 2) / (4 * t) - m);
  return m + std::log(s) - 0.5 * std::log(4 * kPi * t);
}

}  // namespace

TEST_CASE("kernel matches an mpmath spectral sum") {
  // tests/oracles/gen.py, 40 digits
  const double rows[][6] = {{0, 0, 0.3, -0.4, 0.1, 0.27881691406177436809},
                            {0.5, -0.5, 0.9, 0.9, 0.05, 12.555868939168305004},
                            {2.5, 1, -0.2, 0.7, 0.5, 0.71440550620969233581},
                            {-0.5, 1, 1, 1, 0.2, 0.48045667309578603427},
                            {7, 3, 1, 0.8, 0.02, 47128.41378361590223}};
  for (const auto& r : rows) {
    const JacobiParams p(r[0], r[1]);
    CHECK(heat_kernel({p, r[2], r[3], r[4], 1e-14}) == doctest::Approx(r[5]).epsilon(1e-11));
    CHECK(log_heat_kernel(p, r[2], r[3], r[4]).log_value ==
          doctest::Approx(std::log(r[5])).epsilon(1e-12));
  }
}

TEST_CASE("small-time log kernel matches a high-precision sum") {
  // 500-600 digit sums with about 1100 terms; the first is the Gaussian
  // tail at distance 2, about e^{-993}.
  const double rows[][6] = {
      {0, 0, -0.416146836547142387, 1, 1e-3, -993.39090705600039409},
      {1, 0.5, 0.95533648912560602292, 0.99500416527802576554, 2e-3, 2.4161863657599769518},
      {7, 3, 0.5403023058681397174, 1, 1e-3, -210.09182331916099659},
  };
  for (const auto& r : rows) {
    const KernelValue v = log_heat_kernel({r[0], r[1]}, r[2], r[3], r[4], 1e-12);
    CHECK(std::abs(v.log_value - r[5]) < 1e-9);
  }
  CHECK(log_heat_kernel({0, 0}, -0.416146836547142387, 1, 1e-3).bits > 53);
}

TEST_CASE("the circle case agrees with the method of images") {
  // alpha = beta = -1/2: G(cos phi, cos psi) = k_t(phi - psi) + k_t(phi + psi)
  for (double t : {1e-3, 0.01, 0.3}) {
    for (auto [phi, psi] : {std::pair{0.4, 0.5}, {0.0, 3.0}, {2.9, 0.2}, {1.0, 1.0}}) {
      const double u = log_circle(phi - psi, t), v = log_circle(phi + psi, t);
      const double want = std::max(u, v) + std::log1p(std::exp(-std::abs(u - v)));
      CAPTURE(t);
      CAPTURE(phi);
      CAPTURE(psi);
      CHECK(std::abs(log_heat_kernel({-0.5, -0.5}, std::cos(phi), std::cos(psi), t).log_value - want) <
            1e-9);
    }
  }
}

TEST_CASE("symmetries") {
  for (auto [a, b] : {std::pair{-0.5, 1.0}, {0.0, 0.0}, {2.5, 0.5}}) {
    const JacobiParams p(a, b);
    for (double t : {0.01, 0.3}) {
      const double g = log_heat_kernel(p, 0.3, -0.6, t).log_value;
      CHECK(log_heat_kernel(p, -0.6, 0.3, t).log_value == doctest::Approx(g).epsilon(1e-12));
      CHECK(log_heat_kernel(p.swapped(), -0.3, 0.6, t).log_value == doctest::Approx(g).epsilon(1e-12));
    }
  }
}

TEST_CASE("long time: G_t h_0 tends to 1") {
  for (auto [a, b] : {std::pair{-0.5, -0.5}, {0.0, 1.0}, {3.0, 1.0}}) {
    const JacobiParams p(a, b);
    const double h0 = jacobi_norm_h(p, 0);
    CHECK(heat_kernel({p, 0.2, -0.9, 40.0, 1e-15}) * h0 == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("reduction formula reproduces the spectral kernel") {
  for (auto [a, b] : {std::pair{0.0, 0.5}, {1.0, -0.5}, {2.5, 1.0}}) {
    for (double t : {0.01, 0.2}) {
      const double phi = 1.1, psi = 2.3;
      const double direct = log_heat_kernel({a, b}, std::cos(phi), std::cos(psi), t).log_value;
      CHECK(std::abs(log_heat_kernel_reduced(a, b, phi, psi, t) - direct) < 1e-8);
    }
  }
  CHECK_THROWS_AS(heat_kernel_reduced(-0.7, 0.0, 1.0, 1.0, 0.1), DomainError);
}

TEST_CASE("derivative at one matches a finite difference") {
  const JacobiParams p(0.5, 1.0);
  const double x = 0.3, t = 0.1, h = 1e-4;
  auto g = [&](double u) { return heat_kernel({p, u, 1.0, t, 1e-15}); };
  const double fd = (g(x + h) - g(x - h)) / (2 * h);
  CHECK(heat_kernel_dx_at_one(p, x, t) == doctest::Approx(fd).epsilon(1e-7));
  CHECK(std::log(heat_kernel_dx_at_one(p, x, t)) ==
        doctest::Approx(log_heat_kernel_dx_at_one(p, x, t)).epsilon(1e-10));
}

TEST_CASE("quadratic transformations and the comparison inequality") {
  for (double alpha : {-0.5, 0.0, 1.0}) {
    const QuadraticResiduals r = quadratic_transform_pair(alpha, 0.7, -0.2, 0.1);
    CHECK(r.first < 1e-10);
    CHECK(r.second < 1e-10);
    CHECK_FALSE(r.second_skipped);
  }
  CHECK(quadratic_transform_pair(0.0, 0.0, 0.5, 0.1).second_skipped);
  for (double delta : {0.0, 0.5, 2.0})
    for (double x : {-0.9, 0.0, 0.95}) {
      CHECK(comparison_check(0.5, 0.0, delta, x, 0.4, 0.2));
      const ComparisonSides s = comparison_sides(0.5, 0.0, delta, x, 0.4, 0.2);
      CHECK(s.lhs <= s.rhs * (1 + 1e-12));
    }
}

TEST_CASE("eigenvalues, truncation and the time floor") {
  const JacobiParams p(0.5, 2.0);
  CHECK(eigenvalue(p, 4).lambda == doctest::Approx(4 * (4 + 3.5)));
  CHECK(truncation_order(p, 0.01, 1e-12) > truncation_order(p, 0.1, 1e-12));
  CHECK(truncation_order(p, 0.1, 1e-6) <= truncation_order(p, 0.1, 1e-12));
  CHECK_THROWS_AS(heat_kernel({p, 0.0, 0.0, 1e-6, 1e-12}), DomainError);
  CHECK_THROWS_AS(set_time_floor(0.0), DomainError);
  CHECK_THROWS_AS(log_heat_kernel(p, 0.0, 0.0, -1.0), DomainError);
}
