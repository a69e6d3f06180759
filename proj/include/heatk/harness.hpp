#pragma once

#include "heatk/model_spaces.hpp"

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace heatk {

enum class Target { Jacobi, Symmetric, Ball, Simplex, Lemma21, Lemma22 };

std::string target_name(Target t);
Target parse_target(const std::string& name);

// Catalog label such as "S^2" or "P^8(H)".
SpaceDescriptor parse_space(const std::string& label);

// n equispaced points including both ends (n >= 1; n = 1 gives lo).
std::vector<double> linear_grid(double lo, double hi, int n);
// n points equispaced in log.
std::vector<double> log_grid(double lo, double hi, int n);
// Inserts the midpoint (geometric if `geometric`) between neighbours, so
// n points become 2n - 1 and the old grid is a subset of the new one.
std::vector<double> refine_grid(const std::vector<double>& g, bool geometric);

struct SweepSpec {
  Target target = Target::Jacobi;
  std::vector<double> times;  // used by the four kernel targets

  // jacobi: every (alpha, beta) pair; symmetric: each catalog space
  int angles = 30;
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<SpaceDescriptor> spaces;

  // ball: x = r e_1, y = r' (cos g, sin g, 0, ...)
  std::vector<int> ball_dims;
  std::vector<double> mus;
  int radii = 7;
  int ball_angles = 13;

  // simplex (d = kappa.size() - 1): lattice points x = (i, j, ...) / steps
  std::vector<std::vector<double>> kappas;
  int simplex_steps = 4;

  // lemma21: A, B on a feasible ab_points x ab_points grid
  std::vector<double> nus;
  std::vector<double> xis;
  std::vector<double> Ds;
  int ab_points = 20;

  // lemma22: a in [0, 5], b in [a, 10]
  std::vector<double> gammas;
  int a_points = 11;
  int b_points = 11;

  double rel_tol = 1e-8;
  int points = 32;  // quadrature nodes per averaged coordinate
  int workers = 1;
};

SweepSpec default_sweep(Target target);
// Every grid axis refined n -> 2n - 1 (lattice steps doubled); parameter
// sets are kept.
SweepSpec refined(const SweepSpec& spec);

// `key = value` lines, '#' comments.
std::map<std::string, std::string> read_config(std::istream& in);
// Throws DomainError for unknown keys or malformed values.
void apply_config(SweepSpec& spec, const std::map<std::string, std::string>& config);

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Cell {
  std::size_t id = 0;
  std::size_t group = 0;
  std::vector<double> params;  // in the order of RatioReport::param_names
  double t = kNaN;
  double log_kernel = kNaN;  // natural logs; lemma cells hold log lhs / log rhs
  double log_envelope = kNaN;
  double ratio = kNaN;
  bool degenerate = false;  // both sides vanish (no ratio)
  std::string error;
};

struct GroupSummary {
  std::string label;
  std::size_t cells = 0;
  std::size_t failures = 0;
  std::size_t degenerate = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = -std::numeric_limits<double>::infinity();
  std::size_t argmin = 0;
  std::size_t argmax = 0;

  double spread() const { return max_ratio / min_ratio; }
  void add(const Cell& c);
};

struct RatioReport {
  Target target = Target::Jacobi;
  std::vector<std::string> param_names;
  std::size_t grid_size = 0;
  std::vector<GroupSummary> groups;
  GroupSummary overall;
  std::vector<Cell> cells;
  double seconds = 0.0;

  // Positive finite ratios in every group, with spread below `ceiling`.
  bool ok(double ceiling = 1e4) const;
};

RatioReport run_ratio_sweep(const SweepSpec& spec);

// Decimal rendering of exp(log_value) with 17 significant digits, also
// for values outside the binary64 range.
std::string format_exp(double log_value);
std::string format_double(double v);

void write_csv(std::ostream& out, const RatioReport& report);
void write_json(std::ostream& out, const RatioReport& report, bool with_cells = true);

// ---- exact relations ----

struct IdentityResult {
  std::string name;
  double max_residual = 0.0;
  double threshold = 0.0;
  std::size_t checks = 0;
  bool passed = false;
  std::string worst;  // where the largest residual occurred
  std::string note;
  double seconds = 0.0;
};

// reduction, qiden1, qiden2, derivative, comparison, semigroup,
// normalization, symmetry, long_time, ball_normalization,
// simplex_normalization, monotonicity
std::vector<std::string> identity_names();
IdentityResult run_identity_check(const std::string& name, int workers = 1);
std::vector<IdentityResult> run_identity_checks(const std::vector<std::string>& which,
                                                int workers = 1);

// ---- single evaluations ----

struct KernelQuery {
  Target target = Target::Jacobi;
  double alpha = 0.0, beta = 0.0;  // jacobi
  double phi = 0.0, psi = 0.0;     // jacobi angles
  SpaceDescriptor space;           // symmetric
  double dist = 0.0;               // symmetric, scaled
  double mu = 0.0;                 // ball
  std::vector<double> kappa;       // simplex
  std::vector<double> x, y;        // ball and simplex points
  double rel_tol = 1e-10;
  int points = 64;
};

struct QueryResult {
  double log_kernel = kNaN;
  double log_envelope = kNaN;
  double dist = kNaN;     // distance entering the Gaussian factor
  double divisor = 4.0;   // exp(-dist^2 / (divisor t))
};

QueryResult evaluate_query(const KernelQuery& q, double t);

struct VaradhanReport {
  std::vector<double> times;
  std::vector<double> estimates;  // divisor t |log K| / dist^2
  double dist = 0.0;
  double divisor = 4.0;
  double last = kNaN;   // estimate at the smallest t
  double drift = kNaN;  // change over the last step
};

// Throws DomainError for dist = 0.
VaradhanReport run_varadhan_check(const KernelQuery& q, std::vector<double> times);

}  // namespace heatk
