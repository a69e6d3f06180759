#pragma once

#include "heatk/specfun.hpp"

namespace heatk {

// Smallest time accepted by heat_kernel (default 1e-4). Changing it is not
// synchronized with concurrent evaluations; set it before starting work.
double time_floor();
void set_time_floor(double t_min);

struct HeatQuery {
  JacobiParams params;
  double x = 0.0;
  double y = 0.0;
  double t = 1.0;
  double tol = 1e-12;  // absolute bound on the discarded tail
};

struct Eigenvalue {
  int n = 0;
  double lambda = 0.0;
};

Eigenvalue eigenvalue(const JacobiParams& p, int n);

// Kernel value together with its logarithm. `value` underflows to 0 far in
// the Gaussian tail; `log_value` stays accurate there.
struct KernelValue {
  double value = 0.0;
  double log_value = 0.0;
  int terms = 0;
  long bits = 53;  // working precision of the summation
};

// Partial sum of the spectral series with a tail below q.tol. The result
// is within q.tol of the kernel or has relative error below 1e-10; values
// far below q.tol may come out slightly negative.
double heat_kernel(const HeatQuery& q);

// The kernel to relative accuracy rel_tol (truncation and rounding), for
// any t > 0. Switches to extended precision when binary64 summation would
// lose the value to cancellation.
KernelValue log_heat_kernel(const JacobiParams& p, double x, double y, double t,
                            double rel_tol = 1e-10);

// Smallest N with sum_{n>N} exp(-t lambda_n) M_n < tol, M_n bounding
// |P_n(x) P_n(y)| / h_n.
int truncation_order(const JacobiParams& p, double t, double tol);

// The kernel at (cos phi, cos psi) through the double average over
// Pi_alpha x Pi_beta of the ultraspherical kernel at time t/4.
double heat_kernel_reduced(double alpha, double beta, double phi, double psi, double t,
                           double tol = 1e-10);
double log_heat_kernel_reduced(double alpha, double beta, double phi, double psi, double t,
                               double rel_tol = 1e-10);

// d/dx G_t(x, 1) = 2(alpha+1) exp(-t(alpha+beta+2)) G_t^{alpha+1,beta+1}(x, 1).
double heat_kernel_dx_at_one(const JacobiParams& p, double x, double t);
double log_heat_kernel_dx_at_one(const JacobiParams& p, double x, double t,
                                 double rel_tol = 1e-10);

struct QuadraticResiduals {
  double first = 0.0;
  double second = 0.0;
  double first_value = 0.0;   // G^{alpha,-1/2} at (2x^2-1, 2y^2-1)
  double second_value = 0.0;  // G^{alpha,1/2} there
  bool second_skipped = false;  // x y = 0
};

// Residuals of the two quadratic transformations relating
// G^{alpha,-1/2} and G^{alpha,1/2} to G^{alpha,alpha} at time t/4.
QuadraticResiduals quadratic_transform_pair(double alpha, double x, double y, double t);

// Sides of
//   [(1+x)(1+y)]^{delta/2} G^{alpha,beta+delta} <= e^{delta(alpha+beta+1+delta/2)t/2} G^{alpha,beta},
// valid for delta >= 0 and beta >= -delta/2.
struct ComparisonSides {
  double lhs = 0.0;
  double rhs = 0.0;
};
ComparisonSides comparison_sides(double alpha, double beta, double delta, double x, double y,
                                 double t);

// The inequality with slack 1e-12 max(1, rhs).
bool comparison_check(double alpha, double beta, double delta, double x, double y, double t);

}  // namespace heatk
