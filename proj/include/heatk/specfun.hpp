#pragma once

#include <stdexcept>
#include <vector>

namespace heatk {

// Thrown for arguments outside an operation's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Jacobi type parameters (alpha, beta), both > -1.
class JacobiParams {
 public:
  JacobiParams(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  // alpha >= -1/2 and beta >= -1/2: the range where the two-sided
  // envelope is a theorem rather than a conjecture.
  bool sharp_range() const { return alpha_ >= -0.5 && beta_ >= -0.5; }

  JacobiParams swapped() const { return {beta_, alpha_}; }
  JacobiParams shifted(double k) const { return {alpha_ + k, beta_ + k}; }

  friend bool operator==(const JacobiParams&, const JacobiParams&) = default;

 private:
  double alpha_;
  double beta_;
};

struct PolyEval {
  int degree = 0;
  double value = 1.0;
  double value_at_one = 1.0;
};

// ln Gamma(z) for z > 0.
double log_gamma(double z);

// P_n^{a,b}(x) by the upward three-term recurrence.
double jacobi_poly(const JacobiParams& p, int n, double x);

// P_0(x), ..., P_n(x) from one upward pass.
std::vector<double> jacobi_poly_upto(const JacobiParams& p, int n, double x);

PolyEval jacobi_eval(const JacobiParams& p, int n, double x);

// Squared L^2 norm of P_n against (1-x)^a (1+x)^b on [-1,1].
double jacobi_norm_h(const JacobiParams& p, int n);
double log_jacobi_norm_h(const JacobiParams& p, int n);

// P_n(1) = Gamma(n+a+1) / (Gamma(n+1) Gamma(a+1)).
double jacobi_at_one(const JacobiParams& p, int n);
double log_jacobi_at_one(const JacobiParams& p, int n);

// Ultraspherical C_n^lambda(x), lambda > -1/2, lambda != 0.
double gegenbauer(double lambda, int n, double x);

namespace detail {
// Accepts x within 1e-14 of [-1,1] and clamps; throws otherwise.
double clamp_unit(double x, const char* what);
}  // namespace detail

}  // namespace heatk
