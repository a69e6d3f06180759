#include "heatk/model_spaces.hpp"
#include "heatk/pi_average.hpp"
#include "heatk/endpoint_table.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

using namespace heatk;

namespace {

constexpr double kPi = std::numbers::pi;

const SpaceDescriptor* find(const std::vector<SpaceDescriptor>& cat, const std::string& label) {
  for (const auto& s : cat)
    if (s.label() == label) return &s;
  return nullptr;
}

}  // namespace

TEST_CASE("catalog and Jacobi parameters") {
  const auto cat = space_catalog();
  struct Row {
    const char* label;
    int d, d_tilde;
    double alpha, beta;
  };
  const Row rows[] = {{"S^2", 2, 0, 0, 0},         {"S^3", 3, 0, 0.5, 0.5},  {"P^2(R)", 2, 1, 0, -0.5},
                      {"P^4(C)", 4, 2, 1, 0},      {"P^8(H)", 8, 4, 3, 1},   {"P^12(H)", 12, 8, 5, 1},
                      {"P^16(O)", 16, 8, 7, 3}};
  for (const Row& r : rows) {
    CAPTURE(r.label);
    const SpaceDescriptor* s = find(cat, r.label);
    REQUIRE(s != nullptr);
    CHECK(s->d == r.d);
    CHECK(s->d_tilde == r.d_tilde);
    const JacobiParams p = alpha_beta(*s);
    CHECK(p.alpha() == r.alpha);
    CHECK(p.beta() == r.beta);
    CHECK(valid_antipodal_data(s->d, s->d_tilde));
  }
  CHECK_FALSE(valid_antipodal_data(5, 2));
  CHECK_THROWS_AS(SpaceDescriptor::make(Family::CayleyPlane, 8), DomainError);
  CHECK_THROWS_AS(SpaceDescriptor::make(Family::ComplexProj, 5), DomainError);
}

TEST_CASE("scaled symmetric kernel: S^2 Legendre series and long-time limit") {
  const SpaceDescriptor s2 = SpaceDescriptor::make(Family::Sphere, 2);
  // sum (2n+1) e^{-t n(n+1)} P_n(cos d), the kernel against normalized area
  const double t = 0.05, d = 0.8;
  double want = 0.0;
  for (int n = 0; n < 200; ++n) {
    double p0 = 1.0, p1 = std::cos(d);
    double pn = n == 0 ? p0 : p1;
    for (int k = 1; k < n; ++k) {
      const double p2 = ((2 * k + 1) * std::cos(d) * p1 - k * p0) / (k + 1);
      p0 = p1;
      p1 = p2;
      pn = p2;
    }
    want += (2 * n + 1) * std::exp(-t * n * (n + 1)) * pn;
  }
  CHECK(symmetric_heat_kernel(s2, d, t) == doctest::Approx(want).epsilon(1e-12));
  CHECK(log_symmetric_heat_kernel(s2, d, t).log_value == doctest::Approx(std::log(want)).epsilon(1e-12));
  for (const auto& s : space_catalog()) {
    CAPTURE(s.label());
    CHECK(symmetric_heat_kernel(s, 1.3, 30.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("symmetric kernel is decreasing in distance with vanishing end slopes") {
  for (const auto& s : space_catalog()) {
    CAPTURE(s.label());
    double prev = INFINITY;
    for (int i = 0; i <= 12; ++i) {
      const double d = kPi * i / 12;
      const double k = log_symmetric_heat_kernel(s, d, 0.2).log_value;
      CHECK(k < prev);
      prev = k;
      const double slope = symmetric_heat_kernel_slope(s, d, 0.2);
      if (i == 0 || i == 12) CHECK(std::abs(slope) < 1e-12);
      else CHECK(slope > 0.0);
    }
  }
}

TEST_CASE("unscaling changes distance, time and volume consistently") {
  const SpaceDescriptor s = SpaceDescriptor::make(Family::Sphere, 2, 2 * kPi);
  // diameter 2 pi: distance 2 pi / 3 is scaled distance pi / 3, time is divided by 4
  CHECK(unscale_kernel(s, 2 * kPi / 3, 0.4, 5.0) ==
        doctest::Approx(symmetric_heat_kernel(s, kPi / 3, 0.1) / 5.0).epsilon(1e-14));
  CHECK_THROWS_AS(unscale_kernel(s, 1.0, 0.1, std::nullopt), DomainError);
}

TEST_CASE("ball geometry and volume") {
  const std::vector<double> x = {0.3, -0.2, 0.1}, y = {-0.5, 0.6, 0.0};
  double inner = 0.0, nx = 0.0, ny = 0.0;
  for (int i = 0; i < 3; ++i) {
    inner += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  const double w = inner + std::sqrt(1 - nx) * std::sqrt(1 - ny);
  CHECK(dist_ball(x, y) == doctest::Approx(std::acos(w)).epsilon(1e-14));
  const BallPair p = ball_pair(x, y);
  CHECK(p.one_minus_w == doctest::Approx(1 - w).epsilon(1e-14));
  CHECK(p.one_plus_w == doctest::Approx(1 + w).epsilon(1e-14));
  CHECK(dist_ball(x, x) == 0.0);
  for (double mu : {0.0, 0.5, 2.0})
    for (int d : {1, 2, 3}) {
      const double want = 0.5 * d * std::log(kPi) + std::lgamma(mu + 0.5) - std::lgamma(mu + 0.5 + 0.5 * d);
      CHECK(log_ball_volume(mu, d) == doctest::Approx(want).epsilon(1e-14));
    }
  CHECK_THROWS_AS(check_ball_point(std::vector<double>{0.8, 0.7}), DomainError);
}

TEST_CASE("ball kernel: symmetry, rotation invariance, long-time limit") {
  const ModelOptions opts{1e-10, 48};
  const std::vector<double> x = {0.3, -0.2}, y = {-0.5, 0.6};
  const double c = std::cos(0.7), s = std::sin(0.7);
  const std::vector<double> rx = {c * x[0] - s * x[1], s * x[0] + c * x[1]};
  const std::vector<double> ry = {c * y[0] - s * y[1], s * y[0] + c * y[1]};
  for (double mu : {0.0, 0.5, 2.0})
    for (double t : {0.01, 0.3}) {
      const double k = log_ball_heat_kernel(mu, x, y, t, opts);
      CHECK(log_ball_heat_kernel(mu, y, x, t, opts) == doctest::Approx(k).epsilon(1e-12));
      CHECK(log_ball_heat_kernel(mu, rx, ry, t, opts) == doctest::Approx(k).epsilon(1e-10));
    }
  CHECK(ball_heat_kernel(0.5, x, y, 30.0, opts) * ball_volume(0.5, 2) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("simplex geometry, volume and kernel symmetries") {
  const std::vector<double> x = {0.2, 0.3}, y = {0.6, 0.1};
  const auto X = simplex_coords(x);
  REQUIRE(X.size() == 3);
  CHECK(X[2] == doctest::Approx(0.5));
  CHECK(dist_simplex(x, y) ==
        doctest::Approx(std::acos(std::sqrt(0.2 * 0.6) + std::sqrt(0.3 * 0.1) + std::sqrt(0.5 * 0.3)))
            .epsilon(1e-14));
  const std::vector<double> kappa = {1.0, 0.0, 2.0};
  double want = -std::lgamma(1.5 + 0.5 + 2.5);
  for (double k : kappa) want += std::lgamma(k + 0.5);
  CHECK(log_simplex_volume(kappa) == doctest::Approx(want).epsilon(1e-14));

  const ModelOptions opts{1e-10, 32};
  for (double t : {0.02, 0.3}) {
    const double k = log_simplex_heat_kernel(kappa, x, y, t, opts);
    CHECK(log_simplex_heat_kernel(kappa, y, x, t, opts) == doctest::Approx(k).epsilon(1e-12));
    // relabel the first two vertices
    const std::vector<double> kp = {0.0, 1.0, 2.0}, xp = {0.3, 0.2}, yp = {0.1, 0.6};
    CHECK(log_simplex_heat_kernel(kp, xp, yp, t, opts) == doctest::Approx(k).epsilon(1e-10));
  }
  CHECK(simplex_heat_kernel(kappa, x, y, 30.0, opts) * simplex_volume(kappa) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(check_simplex_point(std::vector<double>{0.7, 0.5}), DomainError);
}

TEST_CASE("Pi average of a Gaussian profile matches mpmath quadrature") {
  // log of the integral of exp(-arccos(a + sum c_j u_j)^2 / 4s) against prod Pi_{nu_j}
  struct Row {
    std::vector<double> nus, c;
    double a, s, want;
  };
  const Row rows[] = {{{0.5}, {0.8}, 0.1, 0.1, -2.6892926022154211494},
                      {{0.0}, {0.7}, -0.3, 0.05, -8.7286891505907364482},
                      {{2.0}, {1.0}, 0.0, 1.0, -0.6081658286143367226},
                      {{0.5, 1.0}, {0.3, 0.6}, 0.1, 0.01, -8.7702910199470894641}};
  for (const Row& r : rows) {
    LinearForm f;
    f.c = r.c;
    double top = r.a;
    for (double c : r.c) top += c;
    f.one_minus_top = 1.0 - top;
    f.one_plus_a = 1.0 + r.a;
    const double s = r.s;
    auto log_g = [s](double th) { return -th * th / (4 * s); };
    CHECK(log_pi_average(log_g, s, f, r.nus) == doctest::Approx(r.want).epsilon(1e-9));
  }
}

TEST_CASE("endpoint table interpolates the kernel at the pole") {
  const EndpointTable tab(1.5, 1.5, 0.01, kPi);
  for (double th : {0.0, 0.3, 1.7, 3.0, kPi}) {
    const double want = log_heat_kernel({1.5, 1.5}, std::cos(th), 1.0, 0.01, 1e-13).log_value;
    CHECK(std::abs(tab.log_value(th) - want) < 1e-9 * std::max(1.0, std::abs(want)));
  }
  const auto shared = EndpointTable::cached(0.5, 0.5, 0.02, 2.0);
  CHECK(shared == EndpointTable::cached(0.5, 0.5, 0.02, 2.0));
  CHECK(shared->theta_max() >= 2.0);
}
