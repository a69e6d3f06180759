#pragma once

// Orthonormal-recurrence summation of
//   sum_{n<=N} exp(-t n(n+a+b+1)) p_n(x) p_n(y),
// p_n the Jacobi polynomials normalized in L^2((1-x)^a (1+x)^b dx).
// Binary64 and MPFR variants; the caller chooses N and precision.

#include <vector>

namespace heatk::detail {

// log(e^x + e^y), accepting -inf.
double log_add(double x, double y);

struct SeriesSum {
  double sum = 0.0;      // the partial sum (binary64 path)
  double abs_sum = 0.0;  // sum of |terms|, for a cancellation estimate
  int terms = 0;
};

SeriesSum series_double(double a, double b, double x, double y, double t, int n_max);

struct MpSeriesSum {
  double value = 0.0;      // rounded partial sum, may underflow to 0
  double log_value = 0.0;  // log of the partial sum when positive, else NaN
  bool positive = false;
  double log_abs_sum = 0.0;  // log of sum |terms|
  double log_taper_err = 0.0;  // log bound on the error from the precision taper
  int terms = 0;
  long bits = 0;
};

MpSeriesSum series_mp(double a, double b, double x, double y, double t, int n_max, long bits);

// log of exp(-t lambda_n) * M_n with M_n >= sup |p_n(x) p_n(y)|, for
// n = 0, 1, ... until the terms have peaked and dropped below log_floor.
std::vector<double> log_term_bounds(double a, double b, double t, double log_floor);

// Smallest N with log sum_{n>N} T_n < log_tol, given log T_n from
// log_term_bounds.
int order_from_bounds(const std::vector<double>& log_terms, double log_tol);

// log sum_{n<=N} T_n.
double log_partial_bound(const std::vector<double>& log_terms, int n);

// Precision tier (bits) covering the request; tiers grow geometrically so
// that recurrence coefficients can be cached per tier.
long precision_tier(double bits);

}  // namespace heatk::detail
