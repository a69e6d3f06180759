#pragma once

#include "heatk/jacobi_kernel.hpp"

#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace heatk {

// Compact rank-one symmetric spaces.
enum class Family { Sphere, RealProj, ComplexProj, QuatProj, CayleyPlane };

std::string family_name(Family f);

struct SpaceDescriptor {
  Family family = Family::Sphere;
  int d = 2;        // real dimension
  int d_tilde = 0;  // dimension of the set of points farthest from a given one
  double diam = std::numbers::pi;

  // Validates (family, d) and fills in d_tilde.
  static SpaceDescriptor make(Family family, int d, double diam = std::numbers::pi);

  std::string label() const;  // e.g. "P^8(H)"
};

// True if (d, d_tilde) belongs to some family.
bool valid_antipodal_data(int d, int d_tilde);

// Spaces covered by the default checks: S^1..S^3, P^2(R), P^3(R), P^4(C),
// P^6(C), P^8(H), P^12(H) and the Cayley plane.
std::vector<SpaceDescriptor> space_catalog();

// (d/2 - 1, (d - d_tilde)/2 - 1)
JacobiParams alpha_beta(const SpaceDescriptor& space);

// Kernel of the space scaled to diameter pi, against its probability
// measure, as a function of the scaled distance.
double symmetric_heat_kernel(const SpaceDescriptor& space, double dist, double t,
                             double tol = 1e-12);
KernelValue log_symmetric_heat_kernel(const SpaceDescriptor& space, double dist, double t,
                                      double rel_tol = 1e-10);

// -d/d(dist) of the scaled kernel, through the derivative identity.
double symmetric_heat_kernel_slope(const SpaceDescriptor& space, double dist, double t);

// Kernel of the unscaled space (diameter space.diam, total volume `volume`)
// at geodesic distance dist and time t.
double unscale_kernel(const SpaceDescriptor& space, double dist, double t,
                      std::optional<double> volume);

// ---- ball B^d with weight (1 - |x|^2)^{mu - 1/2} ----

void check_ball_point(std::span<const double> x);
double dist_ball(std::span<const double> x, std::span<const double> y);

// 1 - w and 1 + w for w = <x,y> + sqrt(1-|x|^2) sqrt(1-|y|^2), accurate near
// w = 1 and w = -1, and the product of the square roots.
struct BallPair {
  double one_minus_w = 0.0;
  double one_plus_w = 2.0;
  double ab = 0.0;
  double one_plus_inner = 2.0;  // 1 + <x,y>
};
BallPair ball_pair(std::span<const double> x, std::span<const double> y);

// W_mu(B^d), the total weight.
double log_ball_volume(double mu, int d);
double ball_volume(double mu, int d);

struct ModelOptions {
  double rel_tol = 1e-10;
  int points = 64;  // quadrature nodes per averaged coordinate
};

double ball_heat_kernel(double mu, std::span<const double> x, std::span<const double> y, double t,
                        const ModelOptions& opts = {});
double log_ball_heat_kernel(double mu, std::span<const double> x, std::span<const double> y,
                            double t, const ModelOptions& opts = {});

// ---- simplex V^d with weight prod_j x_j^{kappa_j - 1/2}, x_{d+1} = 1 - |x|_1 ----

void check_simplex_point(std::span<const double> x);

// The d+1 barycentric coordinates of x.
std::vector<double> simplex_coords(std::span<const double> x);
double dist_simplex(std::span<const double> x, std::span<const double> y);

// U_kappa(V^d), the total weight.
double log_simplex_volume(std::span<const double> kappa);
double simplex_volume(std::span<const double> kappa);

double simplex_heat_kernel(std::span<const double> kappa, std::span<const double> x,
                           std::span<const double> y, double t, const ModelOptions& opts = {});
double log_simplex_heat_kernel(std::span<const double> kappa, std::span<const double> x,
                               std::span<const double> y, double t,
                               const ModelOptions& opts = {});

}  // namespace heatk
