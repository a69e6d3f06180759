#include "heatk/model_spaces.hpp"

#include "heatk/endpoint_table.hpp"
#include "heatk/pi_average.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace heatk {

namespace {

constexpr double kPi = std::numbers::pi;

void check_floor(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time must be positive");
  if (t < time_floor()) throw DomainError("time below the configured floor");
}

double check_dist(double dist) {
  if (!(dist >= -1e-14 && dist <= kPi + 1e-14)) throw DomainError("scaled distance outside [0, pi]");
  return std::clamp(dist, 0.0, kPi);
}

// Table reach for kernels whose arguments stay within pi/2 of the top.
double half_range_reach(double s) {
  const double half = kPi / 2;
  return std::min(kPi, std::sqrt(half * half + 4.0 * s * 640.0));
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::Sphere: return "sphere";
    case Family::RealProj: return "real-projective";
    case Family::ComplexProj: return "complex-projective";
    case Family::QuatProj: return "quaternionic-projective";
    case Family::CayleyPlane: return "cayley-plane";
  }
  return "?";
}

SpaceDescriptor SpaceDescriptor::make(Family family, int d, double diam) {
  if (!(diam > 0.0)) throw DomainError("diameter must be positive");
  SpaceDescriptor s;
  s.family = family;
  s.d = d;
  s.diam = diam;
  switch (family) {
    case Family::Sphere:
      if (d < 1) throw DomainError("spheres need d >= 1");
      s.d_tilde = 0;
      break;
    case Family::RealProj:
      if (d < 2) throw DomainError("real projective spaces need d >= 2");
      s.d_tilde = d - 1;
      break;
    case Family::ComplexProj:
      if (d < 4 || d % 2 != 0) throw DomainError("complex projective spaces need d = 4, 6, 8, ...");
      s.d_tilde = d - 2;
      break;
    case Family::QuatProj:
      if (d < 8 || d % 4 != 0) throw DomainError("quaternionic projective spaces need d = 8, 12, ...");
      s.d_tilde = d - 4;
      break;
    case Family::CayleyPlane:
      if (d != 16) throw DomainError("the Cayley plane has d = 16");
      s.d_tilde = 8;
      break;
  }
  return s;
}

std::string SpaceDescriptor::label() const {
  const std::string n = std::to_string(d);
  switch (family) {
    case Family::Sphere: return "S^" + n;
    case Family::RealProj: return "P^" + n + "(R)";
    case Family::ComplexProj: return "P^" + n + "(C)";
    case Family::QuatProj: return "P^" + n + "(H)";
    case Family::CayleyPlane: return "P^16(O)";
  }
  return "?";
}

bool valid_antipodal_data(int d, int d_tilde) {
  if (d >= 1 && d_tilde == 0) return true;
  if (d >= 2 && d_tilde == d - 1) return true;
  if (d >= 4 && d % 2 == 0 && d_tilde == d - 2) return true;
  if (d >= 8 && d % 4 == 0 && d_tilde == d - 4) return true;
  return d == 16 && d_tilde == 8;
}

std::vector<SpaceDescriptor> space_catalog() {
  return {SpaceDescriptor::make(Family::Sphere, 1),      SpaceDescriptor::make(Family::Sphere, 2),
          SpaceDescriptor::make(Family::Sphere, 3),      SpaceDescriptor::make(Family::RealProj, 2),
          SpaceDescriptor::make(Family::RealProj, 3),    SpaceDescriptor::make(Family::ComplexProj, 4),
          SpaceDescriptor::make(Family::ComplexProj, 6), SpaceDescriptor::make(Family::QuatProj, 8),
          SpaceDescriptor::make(Family::QuatProj, 12),   SpaceDescriptor::make(Family::CayleyPlane, 16)};
}

JacobiParams alpha_beta(const SpaceDescriptor& space) {
  return {0.5 * space.d - 1.0, 0.5 * (space.d - space.d_tilde) - 1.0};
}

double symmetric_heat_kernel(const SpaceDescriptor& space, double dist, double t, double tol) {
  const JacobiParams p = alpha_beta(space);
  dist = check_dist(dist);
  return jacobi_norm_h(p, 0) * heat_kernel({p, std::cos(dist), 1.0, t, tol});
}

KernelValue log_symmetric_heat_kernel(const SpaceDescriptor& space, double dist, double t,
                                      double rel_tol) {
  const JacobiParams p = alpha_beta(space);
  dist = check_dist(dist);
  KernelValue v = log_heat_kernel(p, std::cos(dist), 1.0, t, rel_tol);
  const double log_h0 = log_jacobi_norm_h(p, 0);
  v.log_value += log_h0;
  v.value = std::exp(v.log_value);
  return v;
}

double symmetric_heat_kernel_slope(const SpaceDescriptor& space, double dist, double t) {
  const JacobiParams p = alpha_beta(space);
  dist = check_dist(dist);
  return std::sin(dist) * jacobi_norm_h(p, 0) * heat_kernel_dx_at_one(p, std::cos(dist), t);
}

double unscale_kernel(const SpaceDescriptor& space, double dist, double t,
                      std::optional<double> volume) {
  if (!volume) throw DomainError("the total volume of the unscaled space is required");
  if (!(*volume > 0.0)) throw DomainError("volume must be positive");
  if (!(dist >= 0.0 && dist <= space.diam * (1.0 + 1e-14)))
    throw DomainError("distance outside [0, diameter]");
  const double k = kPi / space.diam;
  return symmetric_heat_kernel(space, std::min(kPi, dist * k), k * k * t) / *volume;
}

// ---- ball ----

void check_ball_point(std::span<const double> x) {
  if (x.empty()) throw DomainError("ball points need at least one coordinate");
  double n2 = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError("non-finite coordinate");
    n2 += v * v;
  }
  if (n2 > 1.0 + 1e-14) throw DomainError("point outside the closed unit ball");
}

BallPair ball_pair(std::span<const double> x, std::span<const double> y) {
  check_ball_point(x);
  check_ball_point(y);
  if (x.size() != y.size()) throw DomainError("points of different dimension");
  double nx2 = 0.0, ny2 = 0.0, diff2 = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    nx2 += x[i] * x[i];
    ny2 += y[i] * y[i];
    diff2 += (x[i] - y[i]) * (x[i] - y[i]);
    sum2 += (x[i] + y[i]) * (x[i] + y[i]);
  }
  auto cap = [](double n2) {
    const double n = std::min(1.0, std::sqrt(n2));
    return std::sqrt((1.0 - n) * (1.0 + n));
  };
  const double a = cap(nx2), b = cap(ny2);
  BallPair p;
  p.ab = a * b;
  p.one_minus_w = 0.5 * (diff2 + (a - b) * (a - b));
  p.one_plus_w = 0.5 * (sum2 + (a + b) * (a + b));
  p.one_plus_inner = 0.5 * (sum2 + a * a + b * b);
  return p;
}

double dist_ball(std::span<const double> x, std::span<const double> y) {
  const BallPair p = ball_pair(x, y);
  return 2.0 * std::atan2(std::sqrt(p.one_minus_w), std::sqrt(p.one_plus_w));
}

double log_ball_volume(double mu, int d) {
  if (!(mu > -0.5)) throw DomainError("mu must exceed -1/2");
  if (d < 1) throw DomainError("dimension must be positive");
  return 0.5 * d * std::log(kPi) + log_gamma(mu + 0.5) - log_gamma(mu + 0.5 * (d + 1));
}

double ball_volume(double mu, int d) { return std::exp(log_ball_volume(mu, d)); }

double log_ball_heat_kernel(double mu, std::span<const double> x, std::span<const double> y,
                            double t, const ModelOptions& opts) {
  if (!(mu >= 0.0)) throw DomainError("the ball kernel needs mu >= 0");
  check_floor(t);
  const BallPair p = ball_pair(x, y);
  const int d = static_cast<int>(x.size());
  const double lam = mu + 0.5 * (d - 1);
  const auto table = EndpointTable::cached(lam - 0.5, lam - 0.5, t, kPi);

  LinearForm form;
  form.c = {p.ab};
  form.one_minus_top = p.one_minus_w;
  form.one_plus_a = p.one_plus_inner;
  const double nus[1] = {mu - 0.5};
  AverageOptions avg;
  avg.points = opts.points;
  avg.rel_tol = opts.rel_tol;
  const double log_avg =
      log_pi_average([&](double th) { return table->log_value(th); }, t, form, nus, avg);
  const double log_c = 2.0 * lam * std::numbers::ln2 + 2.0 * log_gamma(lam + 0.5) -
                       log_gamma(2.0 * lam + 1.0) - log_ball_volume(mu, d);
  return log_c + log_avg;
}

double ball_heat_kernel(double mu, std::span<const double> x, std::span<const double> y, double t,
                        const ModelOptions& opts) {
  return std::exp(log_ball_heat_kernel(mu, x, y, t, opts));
}

// ---- simplex ----

void check_simplex_point(std::span<const double> x) {
  if (x.empty()) throw DomainError("simplex points need at least one coordinate");
  double s = 0.0;
  for (double v : x) {
    if (!std::isfinite(v) || v < -1e-14) throw DomainError("simplex coordinates must be non-negative");
    s += v;
  }
  if (s > 1.0 + 1e-14) throw DomainError("coordinates sum to more than 1");
}

std::vector<double> simplex_coords(std::span<const double> x) {
  check_simplex_point(x);
  std::vector<double> c(x.size() + 1);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    c[i] = std::max(0.0, x[i]);
    s += c[i];
  }
  c.back() = std::max(0.0, 1.0 - s);
  return c;
}

namespace {

struct SimplexPair {
  std::vector<double> c;  // sqrt(x_j y_j), j = 1..d+1
  double diff2 = 0.0;     // |sqrt(x) - sqrt(y)|^2
  double sum2 = 4.0;      // |sqrt(x) + sqrt(y)|^2
};

SimplexPair simplex_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("points of different dimension");
  const auto X = simplex_coords(x);
  const auto Y = simplex_coords(y);
  SimplexPair p;
  p.sum2 = 0.0;
  for (std::size_t j = 0; j < X.size(); ++j) {
    const double u = std::sqrt(X[j]), v = std::sqrt(Y[j]);
    p.c.push_back(u * v);
    p.diff2 += (u - v) * (u - v);
    p.sum2 += (u + v) * (u + v);
  }
  return p;
}

}  // namespace

double dist_simplex(std::span<const double> x, std::span<const double> y) {
  const SimplexPair p = simplex_pair(x, y);
  return 2.0 * std::atan2(std::sqrt(p.diff2), std::sqrt(p.sum2));
}

double log_simplex_volume(std::span<const double> kappa) {
  if (kappa.size() < 2) throw DomainError("kappa needs at least two entries");
  double s = 0.0, total = 0.0;
  for (double k : kappa) {
    if (!(k > -0.5)) throw DomainError("kappa entries must exceed -1/2");
    s += log_gamma(k + 0.5);
    total += k;
  }
  return s - log_gamma(total + 0.5 * static_cast<double>(kappa.size()));
}

double simplex_volume(std::span<const double> kappa) { return std::exp(log_simplex_volume(kappa)); }

double log_simplex_heat_kernel(std::span<const double> kappa, std::span<const double> x,
                               std::span<const double> y, double t, const ModelOptions& opts) {
  if (kappa.size() != x.size() + 1) throw DomainError("kappa needs d+1 entries");
  for (double k : kappa)
    if (!(k >= 0.0)) throw DomainError("kappa entries must be non-negative");
  check_floor(t);
  const SimplexPair p = simplex_pair(x, y);
  const double d = static_cast<double>(x.size());
  const double lam = std::accumulate(kappa.begin(), kappa.end(), 0.0) + 0.5 * (d - 1.0);
  const double s = t / 4.0;
  const auto table = EndpointTable::cached(lam - 0.5, lam - 0.5, s, half_range_reach(s));

  LinearForm form;
  form.c = p.c;
  form.one_minus_top = 0.5 * p.diff2;
  form.one_plus_a = 1.0;
  std::vector<double> nus(kappa.size());
  double log_c = 0.5 * std::log(kPi) + log_gamma(lam + 0.5);
  for (std::size_t j = 0; j < kappa.size(); ++j) {
    nus[j] = kappa[j] - 0.5;
    log_c -= log_gamma(kappa[j] + 0.5);
  }
  AverageOptions avg;
  avg.points = opts.points;
  avg.rel_tol = opts.rel_tol;
  return log_c +
         log_pi_average([&](double th) { return table->log_value(th); }, s, form, nus, avg);
}

double simplex_heat_kernel(std::span<const double> kappa, std::span<const double> x,
                           std::span<const double> y, double t, const ModelOptions& opts) {
  return std::exp(log_simplex_heat_kernel(kappa, x, y, t, opts));
}

}  // namespace heatk
