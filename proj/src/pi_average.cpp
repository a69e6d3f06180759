#include "heatk/pi_average.hpp"

#include "heatk/quadrature.hpp"
#include "heatk/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace heatk {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct LogSum {
  double max = kNegInf;
  double scaled = 0.0;

  void add(double v) {
    if (v == kNegInf) return;
    if (v <= max) {
      scaled += std::exp(v - max);
    } else {
      scaled = scaled * std::exp(max - v) + 1.0;
      max = v;
    }
  }
  double value() const { return max == kNegInf ? kNegInf : max + std::log(scaled); }
};

struct Axis {
  double c = 0.0;
  std::vector<double> u, gap, log_w;  // sorted by increasing gap
};

Axis make_axis(double nu, double c, double reach, int m) {
  Axis ax;
  ax.c = c;
  auto push = [&](double u, double g, double w) {
    ax.u.push_back(u);
    ax.gap.push_back(g);
    ax.log_w.push_back(std::log(w));
  };
  if (nu == -0.5) {
    push(1.0, 0.0, 0.5);
    push(-1.0, 2.0, 0.5);
  } else if (c == 0.0) {
    push(1.0, 0.0, 1.0);
  } else if (reach >= 1.0) {
    const auto r = cached_pi_rule(nu, m);
    for (std::size_t k = r->size(); k-- > 0;) push(r->nodes[k], 1.0 - r->nodes[k], r->weights[k]);
  } else {
    const GapRule r = pi_rule_near_one(nu, m, reach);
    for (std::size_t k = 0; k < r.size(); ++k) push(r.nodes[k], r.gaps[k], r.weights[k]);
  }
  return ax;
}

double angle_from(double one_minus_z, double one_plus_z) {
  if (one_minus_z <= 1.0) return 2.0 * std::asin(std::sqrt(std::max(one_minus_z, 0.0) / 2.0));
  return std::numbers::pi - 2.0 * std::asin(std::sqrt(std::clamp(one_plus_z, 0.0, 2.0) / 2.0));
}

}  // namespace

double log_pi_average(const std::function<double(double)>& log_g, double s, const LinearForm& form,
                      std::span<const double> nus, const AverageOptions& opts) {
  if (nus.size() != form.c.size()) throw DomainError("one measure per coefficient required");
  if (!(s > 0.0)) throw DomainError("time must be positive");
  for (double c : form.c)
    if (!(c >= 0.0)) throw DomainError("coefficients must be non-negative");
  const double one_minus_top = std::max(form.one_minus_top, 0.0);
  const double theta_top = angle_from(one_minus_top, 2.0 - one_minus_top);
  const std::size_t k = nus.size();

  double cutoff = opts.log_cutoff;
  for (int attempt = 0;; ++attempt) {
    const double cut2 = theta_top * theta_top + 4.0 * s * cutoff;
    const bool prune = cut2 < std::numbers::pi * std::numbers::pi;
    const double theta_cut = prune ? std::sqrt(cut2) : std::numbers::pi;
    const double reach_z = prune ? 2.0 * std::pow(std::sin(0.5 * theta_cut), 2) - one_minus_top
                                 : std::numeric_limits<double>::infinity();

    std::vector<Axis> axes;
    axes.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
      const double c = form.c[j];
      const double reach = c > 0.0 ? reach_z / c : std::numeric_limits<double>::infinity();
      axes.push_back(make_axis(nus[j], c, reach, opts.points));
    }

    LogSum acc;
    // Depth-first walk over the tensor grid, abandoning branches once the
    // accumulated gap leaves the kept region.
    auto walk = [&](auto&& self, std::size_t j, double gap, double lin, double lw) -> void {
      const Axis& ax = axes[j];
      for (std::size_t i = 0; i < ax.u.size(); ++i) {
        const double g = gap + ax.c * ax.gap[i];
        if (g > reach_z) break;
        const double l = lin + ax.c * ax.u[i];
        const double w = lw + ax.log_w[i];
        if (j + 1 < k) {
          self(self, j + 1, g, l, w);
        } else {
          const double theta = angle_from(one_minus_top + g, form.one_plus_a + l);
          acc.add(w + log_g(theta));
        }
      }
    };
    walk(walk, 0, 0.0, 0.0, 0.0);
    const double result = acc.value();

    if (!prune) return result;
    const double neglected = log_g(theta_cut);
    if (neglected - result < std::log(opts.rel_tol) || attempt >= 6) return result;
    cutoff *= 2.0;
  }
}

}  // namespace heatk
