#include "heatk/quadrature.hpp"
#include "heatk/specfun.hpp"

#include "doctest.h"

#include <cmath>
#include <vector>

using namespace heatk;

TEST_CASE("gauss_jacobi matches scipy roots_jacobi") {
  struct Ref {
    double a, b;
    std::vector<double> x, w;
  };
  // scipy.special.roots_jacobi(5, a, b), see tests/oracles/gen.py
  const Ref refs[] = {
      {0.5,
       -0.5,
       {-0.9594929736144975, -0.6548607339452851, -0.14231483827328517, 0.41541501300188644,
        0.8412535328311812},
       {1.1192597692123825, 0.9452542408139504, 0.6524887098192675, 0.3339141637367568,
        0.09067577000743558}},
      {2.0,
       1.5,
       {-0.8100148993326892, -0.47302970508844494, -0.04707340508866665, 0.389257252223699,
        0.7556755721009166},
       {0.07319886690809088, 0.3267450557843197, 0.4537507542367265, 0.2529248725840976,
        0.042709567843947104}},
  };
  for (const Ref& r : refs) {
    const GaussRule g = gauss_jacobi(r.a, r.b, 5);
    REQUIRE(g.nodes.size() == 5);
    for (int k = 0; k < 5; ++k) {
      CHECK(g.nodes[k] == doctest::Approx(r.x[k]).epsilon(1e-13));
      CHECK(g.weights[k] == doctest::Approx(r.w[k]).epsilon(1e-13));
    }
  }
}

TEST_CASE("Gauss-Jacobi rules are exact to degree 2m-1") {
  // Orthogonality of P_j, P_k under the rule for j + k <= 2m - 1.
  const int m = 8;
  for (auto [a, b] : {std::pair{-0.5, -0.5}, {0.0, 2.5}, {3.0, 1.0}, {-0.8, 0.3}}) {
    const JacobiParams p(a, b);
    const GaussRule g = gauss_jacobi(a, b, m);
    double mass = 0.0;
    for (double w : g.weights) mass += w;
    CHECK(mass == doctest::Approx(jacobi_norm_h(p, 0)).epsilon(1e-13));
    for (int j = 0; j < m; ++j)
      for (int k = 0; j + k <= 2 * m - 1 && k < m; ++k) {
        double s = 0.0;
        for (int i = 0; i < m; ++i)
          s += g.weights[i] * jacobi_poly(p, j, g.nodes[i]) * jacobi_poly(p, k, g.nodes[i]);
        const double want = j == k ? jacobi_norm_h(p, j) : 0.0;
        CHECK(std::abs(s - want) < 1e-12 * jacobi_norm_h(p, j));
      }
  }
}

TEST_CASE("Pi_nu rules are probability measures with E w^2 = 1/(2nu+2)") {
  for (double nu : {-0.5, -0.25, 0.0, 0.5, 3.0}) {
    CAPTURE(nu);
    const QuadratureRule r = pi_rule(nu, 16);
    double mass = 0.0, m2 = 0.0, m1 = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      mass += r.weights[k];
      m1 += r.weights[k] * r.nodes[k];
      m2 += r.weights[k] * r.nodes[k] * r.nodes[k];
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(m1) < 1e-15);
    CHECK(m2 == doctest::Approx(1.0 / (2 * nu + 2)).epsilon(1e-13));
    CHECK(integrate_pi([](double w) { return w * w * w * w; }, nu, 16) ==
          doctest::Approx(3.0 / ((2 * nu + 2) * (2 * nu + 4))).epsilon(1e-13));
  }
  const QuadratureRule atoms = pi_rule(-0.5, 16);
  REQUIRE(atoms.size() == 2);
  CHECK(std::abs(atoms.nodes[0]) == 1.0);
  CHECK(atoms.weights[0] == 0.5);
  CHECK_THROWS_AS(gauss_jacobi_rule(-0.5, 4), DomainError);
  CHECK(pi_density_constant(0.5) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("half and near-one rules") {
  for (double nu : {0.0, 0.5, 2.0}) {
    for (double res : {1.0, 1e-3, 1e-8}) {
      const GapRule h = half_pi_rule(nu, 24, res);
      double mass = 0.0;
      for (std::size_t k = 0; k < h.size(); ++k) {
        mass += h.weights[k];
        CHECK(h.gaps[k] == doctest::Approx(1.0 - h.nodes[k]).epsilon(1e-12));
      }
      CHECK(mass == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
  // nu = 1/2: Pi is uniform with density 1/2, so a feature of width eps at
  // w = 1 integrates to eps/2 (1 - e^{-1/eps}).
  const double eps = 1e-7;
  const GapRule h = half_pi_rule(0.5, 24, eps);
  double s = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) s += h.weights[k] * std::exp(-h.gaps[k] / eps);
  CHECK(s == doctest::Approx(eps / 2).epsilon(1e-10));

  const GapRule near = pi_rule_near_one(0.5, 16, 0.1);
  double mass = 0.0;
  for (double w : near.weights) mass += w;
  CHECK(mass == doctest::Approx(0.05).epsilon(1e-13));
  for (double g : near.gaps) CHECK((g > 0.0 && g < 0.1));
}

TEST_CASE("tensor rules integrate products factorwise") {
  const double nus[] = {0.0, 1.5};
  const TensorRule t = tensor_rule(nus, 10);
  const double s = integrate_tensor([](std::span<const double> u) { return u[0] * u[0] * u[1] * u[1]; }, t);
  CHECK(s == doctest::Approx(1.0 / 2 * 1.0 / 5).epsilon(1e-13));
  const double one = integrate_tensor([](std::span<const double>) { return 1.0; }, t);
  CHECK(one == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("cached rules are shared") {
  CHECK(cached_pi_rule(0.7, 12) == cached_pi_rule(0.7, 12));
  CHECK(cached_gauss_jacobi(0.7, 0.1, 12) == cached_gauss_jacobi(0.7, 0.1, 12));
}
