#pragma once

#include <functional>
#include <span>
#include <vector>

namespace heatk {

// z(u) = a + sum_j c_j u_j with c_j >= 0, described through quantities that
// stay accurate when z(1,...,1) is close to 1 or z close to -1.
struct LinearForm {
  std::vector<double> c;
  double one_minus_top = 0.0;  // 1 - (a + sum c_j)
  double one_plus_a = 1.0;     // 1 + a
};

struct AverageOptions {
  int points = 64;          // nodes per dimension and panel
  double rel_tol = 1e-10;   // bound on the discarded far region, relative
  double log_cutoff = 40.0; // initial depth of the kept region, in e-folds
};

// log of the integral of g(arccos z(u)) against the product of Pi_{nu_j},
// where log_g is the logarithm of a non-increasing function of the angle,
// of Gaussian type exp(-theta^2/(4 s)) near its maximum.
//
// Only the region where theta <= theta_cut is integrated, with a Gauss
// panel fitted to it in each coordinate; monotonicity bounds the rest by
// g(theta_cut), and the region is widened until that bound is below
// rel_tol times the result.
double log_pi_average(const std::function<double(double)>& log_g, double s, const LinearForm& form,
                      std::span<const double> nus, const AverageOptions& opts = {});

}  // namespace heatk
