#include "heatk/envelopes.hpp"
#include "heatk/harness.hpp"
#include "heatk/quadrature.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace heatk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Jacobi grid shared by the exact relations.
const std::vector<std::pair<double, double>>& jacobi_pairs() {
  static const auto pairs = [] {
    std::vector<std::pair<double, double>> out;
    for (double a : {-0.5, 0.0, 0.5, 1.0})
      for (double b : {-0.5, 0.0, 0.5, 1.0}) out.emplace_back(a, b);
    return out;
  }();
  return pairs;
}
const std::vector<double> kTimes = {0.05, 0.2, 1.0};

std::vector<double> unit_points(int n = 10) {
  std::vector<double> x;
  for (double a : linear_grid(0.0, kPi, n)) x.push_back(std::cos(a));
  return x;
}

std::string where(std::initializer_list<std::pair<const char*, double>> items) {
  std::ostringstream s;
  bool first = true;
  for (const auto& [k, v] : items) {
    s << (first ? "" : " ") << k << '=' << v;
    first = false;
  }
  return s.str();
}

// One residual per task, reduced in task order. Failed evaluations count
// as infinite residuals.
struct Item {
  double residual = 0.0;
  std::string where;
};

void collect(IdentityResult& r, const std::vector<Item>& items) {
  for (const Item& it : items) {
    ++r.checks;
    if (it.residual > r.max_residual) {
      r.max_residual = it.residual;
      r.worst = it.where;
    }
  }
}

template <class F>
std::vector<Item> run_tasks(std::size_t n, int workers, F&& f) {
  std::vector<Item> items(n);
  detail::parallel_for(n, workers, [&](std::size_t i) {
    try {
      items[i] = f(i);
    } catch (const std::exception& e) {
      items[i] = {kInf, std::string("error: ") + e.what()};
    }
  });
  return items;
}

double h0(const JacobiParams& p) { return jacobi_norm_h(p, 0); }

IdentityResult check_reduction(int workers) {
  IdentityResult r{"reduction"};
  r.threshold = 1e-7;
  const auto phi = linear_grid(0.0, kPi, 10);
  const auto& pairs = jacobi_pairs();
  const std::size_t per = kTimes.size() * 100;
  collect(r, run_tasks(pairs.size() * per, workers, [&](std::size_t k) {
            const auto [a, b] = pairs[k / per];
            const double t = kTimes[(k % per) / 100];
            const double f = phi[(k % 100) / 10], p = phi[k % 10];
            const double direct = log_heat_kernel(JacobiParams(a, b), std::cos(f), std::cos(p), t, 1e-13).log_value;
            const double reduced = log_heat_kernel_reduced(a, b, f, p, t, 1e-12);
            return Item{std::abs(std::expm1(reduced - direct)),
                        where({{"alpha", a}, {"beta", b}, {"phi", f}, {"psi", p}, {"t", t}})};
          }));
  r.note = "relative difference between the averaged form and the series";
  return r;
}

IdentityResult check_quadratic(int which, int workers) {
  IdentityResult r{which == 1 ? "qiden1" : "qiden2"};
  r.threshold = 1e-8;
  const auto x = unit_points();
  const std::vector<double> alphas = {-0.5, 0.0, 0.5, 1.0, 2.5};
  const std::size_t per = kTimes.size() * 100;
  auto items = run_tasks(alphas.size() * per, workers, [&](std::size_t k) {
    const double a = alphas[k / per];
    const double t = kTimes[(k % per) / 100];
    const double u = x[(k % 100) / 10], v = x[k % 10];
    const auto q = quadratic_transform_pair(a, u, v, t);
    Item it;
    it.where = where({{"alpha", a}, {"x", u}, {"y", v}, {"t", t}});
    if (which == 1) {
      it.residual = std::abs(q.first) / std::max(1.0, std::abs(q.first_value));
    } else if (!q.second_skipped) {
      it.residual = std::abs(q.second) / std::max(1.0, std::abs(q.second_value));
    } else {
      it.residual = -1.0;  // xy = 0: the second relation divides by xy
    }
    return it;
  });
  std::erase_if(items, [](const Item& it) { return it.residual < 0.0; });
  collect(r, items);
  r.note = "|lhs - rhs| / max(1, |lhs|)";
  return r;
}

IdentityResult check_derivative(int workers) {
  IdentityResult r{"derivative"};
  r.threshold = 1e-5;
  const double h = 1e-3;
  std::vector<double> x;
  for (double a : linear_grid(0.2, kPi - 0.2, 10)) x.push_back(std::cos(a));
  const auto& pairs = jacobi_pairs();
  const std::size_t per = kTimes.size() * x.size();
  collect(r, run_tasks(pairs.size() * per, workers, [&](std::size_t k) {
            const JacobiParams p(pairs[k / per].first, pairs[k / per].second);
            const double t = kTimes[(k % per) / x.size()];
            const double u = x[k % x.size()];
            auto g = [&](double v) { return log_heat_kernel(p, v, 1.0, t, 1e-14).value; };
            const double fd = (g(u - 2 * h) - 8 * g(u - h) + 8 * g(u + h) - g(u + 2 * h)) / (12 * h);
            const double exact = heat_kernel_dx_at_one(p, u, t);
            return Item{std::abs(fd - exact) / std::abs(exact),
                        where({{"alpha", p.alpha()}, {"beta", p.beta()}, {"x", u}, {"t", t}})};
          }));
  r.note = "five-point difference with h = 1e-3, relative";
  return r;
}

IdentityResult check_comparison(int workers) {
  IdentityResult r{"comparison"};
  r.threshold = 1e-12;
  struct Task {
    double a, b, delta;
  };
  std::vector<Task> tasks;
  for (const auto& [a, b] : jacobi_pairs())
    for (double d : {0.0, 0.5, 1.0, 2.0})
      if (b >= -d / 2) tasks.push_back({a, b, d});
  const auto x = unit_points();
  const std::size_t per = kTimes.size() * 100;
  collect(r, run_tasks(tasks.size() * per, workers, [&](std::size_t k) {
            const Task& tk = tasks[k / per];
            const double t = kTimes[(k % per) / 100];
            const double u = x[(k % 100) / 10], v = x[k % 10];
            const auto s = comparison_sides(tk.a, tk.b, tk.delta, u, v, t);
            return Item{std::max(0.0, s.lhs - s.rhs) / std::max(1.0, s.rhs),
                        where({{"alpha", tk.a}, {"beta", tk.b}, {"delta", tk.delta}, {"x", u}, {"y", v}, {"t", t}})};
          }));
  r.note = "excess of the left side over the right, relative to max(1, rhs)";
  return r;
}

// G_t(x_i, z_k) for all grid points and quadrature nodes.
std::vector<std::vector<double>> kernel_matrix(const JacobiParams& p, const std::vector<double>& x,
                                               const std::vector<double>& z, double t, double tol) {
  std::vector<std::vector<double>> m(x.size(), std::vector<double>(z.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < z.size(); ++k) m[i][k] = heat_kernel({p, x[i], z[k], t, tol});
  return m;
}

IdentityResult check_normalization(int workers) {
  IdentityResult r{"normalization"};
  r.threshold = 1e-8;
  const auto x = unit_points();
  const auto& pairs = jacobi_pairs();
  collect(r, run_tasks(pairs.size() * kTimes.size() * x.size(), workers, [&](std::size_t k) {
            const JacobiParams p(pairs[k / 30].first, pairs[k / 30].second);
            const double t = kTimes[(k % 30) / 10];
            const double u = x[k % 10];
            const int n = truncation_order(p, t, 1e-15);
            const auto rule = cached_gauss_jacobi(p.alpha(), p.beta(), n / 2 + 2);
            double sum = 0.0;
            for (std::size_t j = 0; j < rule->nodes.size(); ++j)
              sum += rule->weights[j] * heat_kernel({p, u, rule->nodes[j], t, 1e-15});
            return Item{std::abs(sum - 1.0),
                        where({{"alpha", p.alpha()}, {"beta", p.beta()}, {"x", u}, {"t", t}})};
          }));
  r.note = "|integral of G_t(x, .) against the Jacobi weight - 1|";
  return r;
}

IdentityResult check_semigroup(int workers) {
  IdentityResult r{"semigroup"};
  r.threshold = 1e-7;
  const auto x = unit_points();
  const auto& pairs = jacobi_pairs();
  // G_t * G_t = G_{2t}; one task per (pair, t) builds the node matrix once.
  std::vector<std::vector<Item>> parts(pairs.size() * kTimes.size());
  detail::parallel_for(parts.size(), workers, [&](std::size_t k) {
    const JacobiParams p(pairs[k / kTimes.size()].first, pairs[k / kTimes.size()].second);
    const double t = kTimes[k % kTimes.size()];
    try {
      const int n = truncation_order(p, t, 1e-16);
      const auto rule = cached_gauss_jacobi(p.alpha(), p.beta(), n + 2);
      std::vector<double> diag(x.size());
      double smallest = 1.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        diag[i] = log_heat_kernel(p, x[i], x[i], 2 * t, 1e-14).value;
        smallest = std::min(smallest, log_heat_kernel(p, x[i], x[i], t, 1e-14).value);
      }
      const auto m = kernel_matrix(p, x, rule->nodes, t, 1e-14 * smallest);
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) {
          double lhs = 0.0;
          for (std::size_t q = 0; q < rule->nodes.size(); ++q) lhs += rule->weights[q] * m[i][q] * m[j][q];
          const double rhs = log_heat_kernel(p, x[i], x[j], 2 * t, 1e-14).value;
          parts[k].push_back({std::abs(lhs - rhs) / std::sqrt(diag[i] * diag[j]),
                              where({{"alpha", p.alpha()}, {"beta", p.beta()}, {"x", x[i]}, {"y", x[j]}, {"t", t}})});
        }
    } catch (const std::exception& e) {
      parts[k] = {{kInf, std::string("error: ") + e.what()}};
    }
  });
  for (const auto& part : parts) collect(r, part);
  r.note = "|G_t * G_t - G_2t| / sqrt(G_2t(x,x) G_2t(y,y))";
  return r;
}

IdentityResult check_symmetry(int workers) {
  IdentityResult r{"symmetry"};
  r.threshold = 1e-12;
  const auto x = unit_points();
  const auto& pairs = jacobi_pairs();
  const std::size_t per = kTimes.size() * 100;
  collect(r, run_tasks(pairs.size() * per, workers, [&](std::size_t k) {
            const JacobiParams p(pairs[k / per].first, pairs[k / per].second);
            const double t = kTimes[(k % per) / 100];
            const double u = x[(k % 100) / 10], v = x[k % 10];
            auto g = [&](const JacobiParams& q, double a, double b) {
              return log_heat_kernel(q, a, b, t, 1e-14).value;
            };
            const double base = g(p, u, v);
            const double scale = std::sqrt(g(p, u, u) * g(p, v, v));
            const double res = std::max(std::abs(base - g(p, v, u)), std::abs(base - g(p.swapped(), -u, -v)));
            return Item{res / scale, where({{"alpha", p.alpha()}, {"beta", p.beta()}, {"x", u}, {"y", v}, {"t", t}})};
          }));
  r.note = "G(x,y) against G(y,x) and the swapped-parameter kernel at (-x,-y)";
  return r;
}

// Bound for sum_{n>=1} e^{-(lambda_n - lambda_1)} h_0 max|P_n|^2 / h_n; for
// t >= 1 the deviation |G_t h_0 - 1| is at most this times e^{-lambda_1 t}.
double long_time_constant(const JacobiParams& p) {
  const double l1 = p.alpha() + p.beta() + 2.0;
  double sum = 0.0;
  for (int n = 1; n < 10000; ++n) {
    const double peak = std::max(log_jacobi_at_one(p, n), log_jacobi_at_one(p.swapped(), n));
    const double lam = n * (n + p.alpha() + p.beta() + 1.0);
    const double term = std::exp(-(lam - l1) + log_jacobi_norm_h(p, 0) + 2.0 * peak - log_jacobi_norm_h(p, n));
    sum += term;
    if (n > 2 && term < 1e-17 * sum) break;
  }
  return sum;
}

IdentityResult check_long_time(int workers) {
  IdentityResult r{"long_time"};
  r.threshold = 1e-12;
  const std::vector<double> times = {1.0, 2.0, 5.0};
  const auto x = unit_points();
  const auto& pairs = jacobi_pairs();
  std::vector<std::vector<double>> dev(pairs.size(), std::vector<double>(times.size()));
  detail::parallel_for(pairs.size() * times.size(), workers, [&](std::size_t k) {
    const JacobiParams p(pairs[k / times.size()].first, pairs[k / times.size()].second);
    const double t = times[k % times.size()];
    double m = 0.0;
    for (double u : x)
      for (double v : x) m = std::max(m, std::abs(h0(p) * heat_kernel({p, u, v, t, 1e-15}) - 1.0));
    dev[k / times.size()][k % times.size()] = m;
  });
  bool monotone = true;
  std::string broken;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [a, b] = pairs[i];
    const double c = long_time_constant(JacobiParams(a, b));
    for (std::size_t j = 0; j < times.size(); ++j) {
      ++r.checks;
      const double bound = c * std::exp(-times[j] * (a + b + 2.0));
      // equality holds at x = y = 1 and t = 1
      const double res = std::max(0.0, dev[i][j] - bound) / bound;
      if (res > r.max_residual) {
        r.max_residual = res;
        r.worst = where({{"alpha", a}, {"beta", b}, {"t", times[j]}});
      }
      if (j > 0 && !(dev[i][j] < dev[i][j - 1])) {
        monotone = false;
        broken = where({{"alpha", a}, {"beta", b}, {"t", times[j]}});
      }
    }
  }
  r.note = "excess of max |G_t h_0 - 1| over C e^{-t(alpha+beta+2)}, C the summed spectral tail at t = 1";
  if (!monotone) {
    r.note += "; deviation not decreasing at " + broken;
    r.max_residual = std::max(r.max_residual, 1.0);
  }
  return r;
}

// Tensor Gauss rule for the ball weight (1-|y|^2)^{mu-1/2} dy, for kernels
// that depend on y only through |y| and the angle to e_1.
struct BallRule {
  std::vector<double> radius, cosine, weight;
};

BallRule ball_rule(double mu, int d, int m) {
  // r^2 = (1+u)/2; angular density |S^{d-2}| (1-c^2)^{(d-3)/2}
  const auto rad = gauss_jacobi(mu - 0.5, 0.5 * d - 1.0, m);
  const auto ang = gauss_jacobi(0.5 * (d - 3), 0.5 * (d - 3), m);
  const double radial_c = std::pow(2.0, -0.5 - 0.5 * d - mu);
  const double sphere = 2.0 * std::pow(kPi, 0.5 * (d - 1)) / std::tgamma(0.5 * (d - 1));
  BallRule r;
  for (std::size_t i = 0; i < rad.nodes.size(); ++i)
    for (std::size_t j = 0; j < ang.nodes.size(); ++j) {
      r.radius.push_back(std::sqrt(0.5 * (1.0 + rad.nodes[i])));
      r.cosine.push_back(ang.nodes[j]);
      r.weight.push_back(radial_c * rad.weights[i] * sphere * ang.weights[j]);
    }
  return r;
}

IdentityResult check_ball_normalization(int workers) {
  IdentityResult r{"ball_normalization"};
  r.threshold = 1e-6;
  struct Task {
    int d;
    double mu, rx, t;
  };
  std::vector<Task> tasks;
  for (int d : {2, 3})
    for (double mu : {0.0, 0.5, 2.0})
      for (double rx : {0.0, 0.6, 0.95})
        for (double t : kTimes) tasks.push_back({d, mu, rx, t});
  ModelOptions opts;
  opts.rel_tol = 1e-12;
  opts.points = 48;
  std::vector<Item> items(tasks.size());
  // Nodes are spread over the workers; the sum is formed in node order.
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const Task& tk = tasks[k];
    const BallRule rule = ball_rule(tk.mu, tk.d, 40);
    std::vector<double> x(tk.d, 0.0);
    x[0] = tk.rx;
    std::vector<double> terms(rule.weight.size());
    std::string error;
    detail::parallel_for(terms.size(), workers, [&](std::size_t q) {
      std::vector<double> y(tk.d, 0.0);
      const double c = rule.cosine[q];
      y[0] = rule.radius[q] * c;
      y[1] = rule.radius[q] * std::sqrt(std::max(0.0, 1.0 - c * c));
      terms[q] = rule.weight[q] * ball_heat_kernel(tk.mu, x, y, tk.t, opts);
    });
    double sum = 0.0;
    for (double v : terms) sum += v;
    items[k] = {std::abs(sum - 1.0),
                where({{"d", double(tk.d)}, {"mu", tk.mu}, {"|x|", tk.rx}, {"t", tk.t}})};
  }
  collect(r, items);
  r.note = "|integral of the kernel against the ball weight - 1|";
  return r;
}

IdentityResult check_simplex_normalization(int workers) {
  IdentityResult r{"simplex_normalization"};
  r.threshold = 1e-6;
  const std::vector<std::vector<double>> kappas = {{0.0, 0.0, 0.0}, {0.5, 0.5, 0.5}, {1.0, 0.0, 2.0}};
  const std::vector<std::vector<double>> xs = {{1.0 / 3, 1.0 / 3}, {0.7, 0.1}, {0.0, 0.0}};
  ModelOptions opts;
  opts.rel_tol = 1e-12;
  opts.points = 32;
  const int m = 20;
  std::vector<Item> items;
  for (const auto& kap : kappas) {
    // y_1 = s v, y_2 = s (1-v): weight s^{k1+k2} (1-s)^{k3-1/2} v^{k1-1/2} (1-v)^{k2-1/2}
    const auto rs = gauss_jacobi(kap[2] - 0.5, kap[0] + kap[1], m);
    const auto rv = gauss_jacobi(kap[1] - 0.5, kap[0] - 0.5, m);
    const double c = std::pow(2.0, -(kap[0] + kap[1]) - (kap[2] - 0.5) - 1.0) *
                     std::pow(2.0, -(kap[0] - 0.5) - (kap[1] - 0.5) - 1.0);
    for (const auto& x : xs)
      for (double t : kTimes) {
        std::vector<double> terms(rs.nodes.size() * rv.nodes.size());
        detail::parallel_for(terms.size(), workers, [&](std::size_t q) {
          const double s = 0.5 * (1.0 + rs.nodes[q / rv.nodes.size()]);
          const double v = 0.5 * (1.0 + rv.nodes[q % rv.nodes.size()]);
          const double y[2] = {s * v, s * (1.0 - v)};
          terms[q] = c * rs.weights[q / rv.nodes.size()] * rv.weights[q % rv.nodes.size()] *
                     simplex_heat_kernel(kap, x, y, t, opts);
        });
        double sum = 0.0;
        for (double v : terms) sum += v;
        items.push_back({std::abs(sum - 1.0),
                         where({{"k1", kap[0]}, {"k2", kap[1]}, {"k3", kap[2]}, {"x1", x[0]}, {"x2", x[1]}, {"t", t}})});
      }
  }
  collect(r, items);
  r.note = "|integral of the kernel against the simplex weight - 1|";
  return r;
}

IdentityResult check_monotonicity(int workers) {
  IdentityResult r{"monotonicity"};
  r.threshold = 1e-10;
  const auto spaces = space_catalog();
  const std::vector<double> times = {0.05, 0.5, 2.0};
  const auto phi = linear_grid(0.0, kPi, 30);
  const std::size_t per = times.size() * phi.size();
  std::vector<double> slope(spaces.size() * per), logk(spaces.size() * per);
  detail::parallel_for(slope.size(), workers, [&](std::size_t k) {
    const auto& s = spaces[k / per];
    const double t = times[(k % per) / phi.size()];
    const double f = phi[k % phi.size()];
    slope[k] = symmetric_heat_kernel_slope(s, f, t);
    logk[k] = log_symmetric_heat_kernel(s, f, t, 1e-13).log_value;
  });
  std::size_t bad = 0;
  std::string first_bad;
  for (std::size_t k = 0; k < slope.size(); ++k) {
    const std::size_t i = k % phi.size();
    const auto& s = spaces[k / per];
    const double t = times[(k % per) / phi.size()];
    ++r.checks;
    if (i == 0 || i + 1 == phi.size()) {
      if (std::abs(slope[k]) > r.max_residual) {
        r.max_residual = std::abs(slope[k]);
        r.worst = s.label() + " " + where({{"phi", phi[i]}, {"t", t}});
      }
    } else if (!(slope[k] > 0.0) || !(logk[k] < logk[k - 1])) {
      if (bad++ == 0) first_bad = s.label() + " " + where({{"phi", phi[i]}, {"t", t}});
    }
  }
  r.note = "largest |slope| at the endpoints; interior slopes positive and values decreasing";
  if (bad > 0) {
    r.note += "; " + std::to_string(bad) + " interior violations, first at " + first_bad;
    r.max_residual = std::max(r.max_residual, 1.0);
  }
  return r;
}

}  // namespace

std::vector<std::string> identity_names() {
  return {"reduction",     "qiden1",   "qiden2",    "derivative",         "comparison",
          "semigroup",     "normalization", "symmetry", "long_time", "ball_normalization",
          "simplex_normalization", "monotonicity"};
}

IdentityResult run_identity_check(const std::string& name, int workers) {
  const auto start = std::chrono::steady_clock::now();
  IdentityResult r;
  if (name == "reduction") r = check_reduction(workers);
  else if (name == "qiden1") r = check_quadratic(1, workers);
  else if (name == "qiden2") r = check_quadratic(2, workers);
  else if (name == "derivative") r = check_derivative(workers);
  else if (name == "comparison") r = check_comparison(workers);
  else if (name == "semigroup") r = check_semigroup(workers);
  else if (name == "normalization") r = check_normalization(workers);
  else if (name == "symmetry") r = check_symmetry(workers);
  else if (name == "long_time") r = check_long_time(workers);
  else if (name == "ball_normalization") r = check_ball_normalization(workers);
  else if (name == "simplex_normalization") r = check_simplex_normalization(workers);
  else if (name == "monotonicity") r = check_monotonicity(workers);
  else throw DomainError("unknown identity check '" + name + "'");
  r.passed = r.checks > 0 && r.max_residual <= r.threshold;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<IdentityResult> run_identity_checks(const std::vector<std::string>& which, int workers) {
  std::vector<IdentityResult> out;
  for (const auto& name : which.empty() ? identity_names() : which)
    out.push_back(run_identity_check(name, workers));
  return out;
}

QueryResult evaluate_query(const KernelQuery& q, double t) {
  QueryResult r;
  switch (q.target) {
    case Target::Jacobi: {
      r.log_kernel = log_heat_kernel(JacobiParams(q.alpha, q.beta), std::cos(q.phi), std::cos(q.psi), t,
                                     q.rel_tol).log_value;
      r.log_envelope = env_jac_gen(q.alpha, q.beta, q.phi, q.psi, t).log_value;
      r.dist = std::abs(q.phi - q.psi);
      break;
    }
    case Target::Symmetric:
      r.log_kernel = log_symmetric_heat_kernel(q.space, q.dist, t, q.rel_tol).log_value;
      r.log_envelope = env_symmetric(q.space.d, q.space.d_tilde, q.dist, t).log_value;
      r.dist = q.dist;
      break;
    case Target::Ball: {
      ModelOptions o{q.rel_tol, q.points};
      r.log_kernel = log_ball_heat_kernel(q.mu, q.x, q.y, t, o);
      r.log_envelope = env_ball(q.mu, q.x, q.y, t).log_value;
      r.dist = dist_ball(q.x, q.y);
      break;
    }
    case Target::Simplex: {
      ModelOptions o{q.rel_tol, q.points};
      r.log_kernel = log_simplex_heat_kernel(q.kappa, q.x, q.y, t, o);
      r.log_envelope = env_simplex(q.kappa, q.x, q.y, t).log_value;
      r.dist = dist_simplex(q.x, q.y);
      r.divisor = 1.0;
      break;
    }
    default: throw DomainError("single evaluations cover the jacobi, symmetric, ball and simplex targets");
  }
  return r;
}

VaradhanReport run_varadhan_check(const KernelQuery& q, std::vector<double> times) {
  if (times.empty()) throw DomainError("empty time sequence");
  std::sort(times.begin(), times.end(), std::greater<>());
  VaradhanReport rep;
  rep.times = times;
  for (double t : times) {
    const QueryResult r = evaluate_query(q, t);
    if (!(r.dist > 0.0)) throw DomainError("the points coincide; the exponent check needs dist > 0");
    rep.dist = r.dist;
    rep.divisor = r.divisor;
    rep.estimates.push_back(r.divisor * t * std::abs(r.log_kernel) / (r.dist * r.dist));
  }
  rep.last = rep.estimates.back();
  rep.drift = rep.estimates.size() > 1 ? rep.estimates.back() - rep.estimates[rep.estimates.size() - 2] : 0.0;
  return rep;
}

}  // namespace heatk
