#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace heatk {

// An envelope kept in factored form. The value is exp(log_value); very small
// envelopes (e^{-2000} and below at small t) are only meaningful through
// log_value.
struct EnvelopeValue {
  std::vector<double> log_poly;  // one entry per polynomial factor
  double log_time = 0.0;         // the power of t
  double log_gauss = 0.0;        // the Gaussian exponent, <= 0
  double log_value = 0.0;
  double value = 0.0;

  // Sum of the recorded components, for consistency checks.
  double log_product() const;
};

// [t + phi psi]^{-a-1/2} [t + (pi-phi)(pi-psi)]^{-b-1/2} t^{-1/2} exp(-(phi-psi)^2/4t)
EnvelopeValue env_jac_gen(double alpha, double beta, double phi, double psi, double t);

// t^{-lambda-1/2} [t + pi - phi]^{-lambda-1/2} t^{-1/2} exp(-phi^2/4t)
EnvelopeValue env_jac_spec(double lambda, double phi, double t);

// [t + pi - dist]^{-(d-dt-1)/2} t^{-d/2} exp(-dist^2/4t), for the scaled
// rank-one symmetric space with real dimension d and antipodal dimension dt.
EnvelopeValue env_symmetric(int d, int d_tilde, double dist, double t);

// Bounds for -d/dphi of the scaled symmetric-space kernel. The small-time
// shape is reported for t <= 1 and the long-time one for t >= 1, so t = 1
// yields both.
struct DerivativeEnvelope {
  std::optional<EnvelopeValue> short_time;
  std::optional<EnvelopeValue> long_time;
};
DerivativeEnvelope env_symmetric_derivative(int d, int d_tilde, double phi, double t);

// Ball envelope with lambda = mu + (d-1)/2, d = x.size().
EnvelopeValue env_ball(double mu, std::span<const double> x, std::span<const double> y, double t);

// Simplex envelope; kappa has d+1 entries, x and y have d coordinates.
EnvelopeValue env_simplex(std::span<const double> kappa, std::span<const double> x,
                          std::span<const double> y, double t);

// Both sides carry the common factor exp(log_scale).
struct LemmaPair {
  double lhs = 0.0;
  double rhs = 0.0;
  double log_scale = 0.0;
};

// Both sides of the Pi_nu average bound over [0, 1] with Phi(w) = arccos(A + B w).
LemmaPair lemma_fvii_pair(double nu, double xi, double A, double B, double D);

// Both sides of the truncated Gaussian moment bound; b may be +infinity.
LemmaPair lemma_f7_pair(double gamma, double a, double b);

}  // namespace heatk
