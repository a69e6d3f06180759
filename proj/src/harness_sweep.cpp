#include "heatk/envelopes.hpp"
#include "heatk/harness.hpp"
#include "parallel.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <map>
#include <numbers>
#include <sstream>
#include <tuple>

namespace heatk {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

std::string list_label(const std::vector<double>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s + ")";
}

// Cells plus a way to evaluate them; filled per target.
struct Plan {
  std::vector<std::string> param_names;
  std::vector<std::string> group_labels;
  std::vector<Cell> cells;
  std::function<void(Cell&)> eval;
  // Optional shared work done before eval (jacobi symmetry reduction).
  std::function<void(int)> prepare;
};

void set_ratio(Cell& c) {
  c.ratio = std::exp(c.log_kernel - c.log_envelope);
}

Plan plan_jacobi(const SweepSpec& spec) {
  Plan plan;
  plan.param_names = {"alpha", "beta", "phi", "psi"};
  const auto phi = linear_grid(0.0, kPi, spec.angles);
  const int n = spec.angles;
  std::vector<std::pair<double, double>> pairs;
  for (double a : spec.alphas)
    for (double b : spec.betas) {
      pairs.emplace_back(a, b);
      plan.group_labels.push_back("alpha=" + fmt(a) + ",beta=" + fmt(b));
    }
  for (std::size_t g = 0; g < pairs.size(); ++g)
    for (double t : spec.times)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Cell c;
          c.group = g;
          c.params = {pairs[g].first, pairs[g].second, phi[i], phi[j]};
          c.t = t;
          plan.cells.push_back(c);
        }

  // G^{a,b}(x,y) = G^{a,b}(y,x) = G^{b,a}(-x,-y): evaluate each orbit once.
  // Work is ordered so that consecutive evaluations share y.
  using Key = std::tuple<double, double, double, int, int>;  // a, b, t, j (y), i (x)
  auto canonical = [n](double a, double b, double t, int i, int j) {
    Key best{a, b, t, j, i};
    best = std::min(best, Key{a, b, t, i, j});
    best = std::min(best, Key{b, a, t, n - 1 - j, n - 1 - i});
    best = std::min(best, Key{b, a, t, n - 1 - i, n - 1 - j});
    return best;
  };
  auto index = std::make_shared<std::map<Key, std::size_t>>();
  auto keys = std::make_shared<std::vector<Key>>();
  auto values = std::make_shared<std::vector<std::pair<double, std::string>>>();
  auto cell_key = std::make_shared<std::vector<std::size_t>>();
  auto grid_index = [n](double angle) {
    return static_cast<int>(std::lround(angle / kPi * (n - 1)));
  };
  std::vector<Key> cell_keys;
  for (const Cell& c : plan.cells)
    cell_keys.push_back(
        canonical(c.params[0], c.params[1], c.t, grid_index(c.params[2]), grid_index(c.params[3])));
  for (const Key& k : cell_keys) index->emplace(k, 0);
  for (auto& [k, slot] : *index) {
    slot = keys->size();
    keys->push_back(k);
  }
  for (const Key& k : cell_keys) cell_key->push_back(index->at(k));
  values->resize(keys->size());
  const double rel_tol = spec.rel_tol;
  plan.prepare = [keys, values, phi, rel_tol](int workers) {
    detail::parallel_for(keys->size(), workers, [&](std::size_t k) {
      const auto [a, b, t, j, i] = (*keys)[k];
      try {
        (*values)[k] = {
            log_heat_kernel(JacobiParams(a, b), std::cos(phi[i]), std::cos(phi[j]), t, rel_tol)
                .log_value,
            ""};
      } catch (const std::exception& e) {
        (*values)[k] = {kNaN, e.what()};
      }
    });
  };
  plan.eval = [values, cell_key](Cell& c) {
    const auto& [v, err] = (*values)[(*cell_key)[c.id]];
    if (!err.empty()) throw std::runtime_error(err);
    c.log_kernel = v;
    c.log_envelope = env_jac_gen(c.params[0], c.params[1], c.params[2], c.params[3], c.t).log_value;
    set_ratio(c);
  };
  return plan;
}

Plan plan_symmetric(const SweepSpec& spec) {
  Plan plan;
  plan.param_names = {"d", "d_tilde", "dist"};
  const auto dist = linear_grid(0.0, kPi, spec.angles);
  for (std::size_t g = 0; g < spec.spaces.size(); ++g) {
    const auto& s = spec.spaces[g];
    plan.group_labels.push_back(s.label());
    for (double t : spec.times)
      for (double r : dist) {
        Cell c;
        c.group = g;
        c.params = {double(s.d), double(s.d_tilde), r};
        c.t = t;
        plan.cells.push_back(c);
      }
  }
  plan.eval = [spaces = spec.spaces, rel_tol = spec.rel_tol](Cell& c) {
    const auto& s = spaces[c.group];
    c.log_kernel = log_symmetric_heat_kernel(s, c.params[2], c.t, rel_tol).log_value;
    c.log_envelope = env_symmetric(s.d, s.d_tilde, c.params[2], c.t).log_value;
    set_ratio(c);
  };
  return plan;
}

std::pair<std::vector<double>, std::vector<double>> ball_points(int d, double rx, double ry,
                                                                 double gamma) {
  std::vector<double> x(d, 0.0), y(d, 0.0);
  x[0] = rx;
  y[0] = ry * std::cos(gamma);
  if (d > 1) y[1] = ry * std::sin(gamma);
  return {x, y};
}

Plan plan_ball(const SweepSpec& spec) {
  Plan plan;
  plan.param_names = {"d", "mu", "r_x", "r_y", "gamma"};
  const auto radii = linear_grid(0.0, 1.0, spec.radii);
  const auto angles = linear_grid(0.0, kPi, spec.ball_angles);
  std::size_t g = 0;
  for (int d : spec.ball_dims)
    for (double mu : spec.mus) {
      plan.group_labels.push_back("d=" + std::to_string(d) + ",mu=" + fmt(mu));
      for (double t : spec.times)
        for (std::size_t a = 0; a < radii.size(); ++a)
          for (std::size_t b = a; b < radii.size(); ++b)
            for (double gm : angles) {
              Cell c;
              c.group = g;
              c.params = {double(d), mu, radii[a], radii[b], gm};
              c.t = t;
              plan.cells.push_back(c);
            }
      ++g;
    }
  ModelOptions opts;
  opts.rel_tol = spec.rel_tol;
  opts.points = spec.points;
  plan.eval = [opts](Cell& c) {
    const int d = static_cast<int>(c.params[0]);
    const auto [x, y] = ball_points(d, c.params[2], c.params[3], c.params[4]);
    c.log_kernel = log_ball_heat_kernel(c.params[1], x, y, c.t, opts);
    c.log_envelope = env_ball(c.params[1], x, y, c.t).log_value;
    set_ratio(c);
  };
  return plan;
}

void lattice(int d, int steps, std::vector<int>& cur, std::vector<std::vector<double>>& out) {
  const int used = [&] {
    int s = 0;
    for (int v : cur) s += v;
    return s;
  }();
  if (static_cast<int>(cur.size()) == d) {
    std::vector<double> p;
    for (int v : cur) p.push_back(double(v) / steps);
    out.push_back(p);
    return;
  }
  for (int v = 0; v + used <= steps; ++v) {
    cur.push_back(v);
    lattice(d, steps, cur, out);
    cur.pop_back();
  }
}

Plan plan_simplex(const SweepSpec& spec) {
  Plan plan;
  if (spec.kappas.empty()) throw DomainError("no kappa vectors given");
  const std::size_t k = spec.kappas.front().size();
  for (const auto& kap : spec.kappas)
    if (kap.size() != k || k < 2) throw DomainError("all kappa vectors need the same length >= 2");
  const int d = static_cast<int>(k) - 1;
  for (std::size_t j = 1; j <= k; ++j) plan.param_names.push_back("kappa_" + std::to_string(j));
  for (int j = 1; j <= d; ++j) plan.param_names.push_back("x_" + std::to_string(j));
  for (int j = 1; j <= d; ++j) plan.param_names.push_back("y_" + std::to_string(j));
  std::vector<std::vector<double>> pts;
  std::vector<int> cur;
  lattice(d, spec.simplex_steps, cur, pts);
  for (std::size_t g = 0; g < spec.kappas.size(); ++g) {
    plan.group_labels.push_back("kappa=" + list_label(spec.kappas[g]));
    for (double t : spec.times)
      for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a; b < pts.size(); ++b) {
          Cell c;
          c.group = g;
          c.params = spec.kappas[g];
          c.params.insert(c.params.end(), pts[a].begin(), pts[a].end());
          c.params.insert(c.params.end(), pts[b].begin(), pts[b].end());
          c.t = t;
          plan.cells.push_back(c);
        }
  }
  ModelOptions opts;
  opts.rel_tol = spec.rel_tol;
  opts.points = spec.points;
  plan.eval = [opts, k, d](Cell& c) {
    const std::span<const double> all(c.params);
    const auto kap = all.subspan(0, k);
    const auto x = all.subspan(k, d);
    const auto y = all.subspan(k + d, d);
    c.log_kernel = log_simplex_heat_kernel(kap, x, y, c.t, opts);
    c.log_envelope = env_simplex(kap, x, y, c.t).log_value;
    set_ratio(c);
  };
  return plan;
}

void set_lemma(Cell& c, const LemmaPair& p) {
  if (p.lhs == 0.0 && p.rhs == 0.0) {
    c.degenerate = true;
    c.log_kernel = c.log_envelope = -std::numeric_limits<double>::infinity();
    return;
  }
  c.log_kernel = std::log(p.lhs) + p.log_scale;
  c.log_envelope = std::log(p.rhs) + p.log_scale;
  c.ratio = p.lhs / p.rhs;
}

Plan plan_lemma21(const SweepSpec& spec) {
  Plan plan;
  plan.param_names = {"nu", "xi", "A", "B", "D"};
  const auto Bs = linear_grid(0.0, 1.0, spec.ab_points);
  for (std::size_t g = 0; g < spec.nus.size(); ++g) {
    plan.group_labels.push_back("nu=" + fmt(spec.nus[g]));
    for (double xi : spec.xis)
      for (double B : Bs)
        for (double A : linear_grid(-1.0, 1.0 - B, spec.ab_points))
          for (double D : spec.Ds) {
            Cell c;
            c.group = g;
            c.params = {spec.nus[g], xi, A, B, D};
            plan.cells.push_back(c);
          }
  }
  plan.eval = [](Cell& c) {
    set_lemma(c, lemma_fvii_pair(c.params[0], c.params[1], c.params[2], c.params[3], c.params[4]));
  };
  return plan;
}

Plan plan_lemma22(const SweepSpec& spec) {
  Plan plan;
  plan.param_names = {"gamma", "a", "b"};
  for (std::size_t g = 0; g < spec.gammas.size(); ++g) {
    plan.group_labels.push_back("gamma=" + fmt(spec.gammas[g]));
    for (double a : linear_grid(0.0, 5.0, spec.a_points))
      for (double u : linear_grid(0.0, 1.0, spec.b_points)) {
        Cell c;
        c.group = g;
        c.params = {spec.gammas[g], a, u == 1.0 ? 10.0 : a + (10.0 - a) * u};
        plan.cells.push_back(c);
      }
  }
  plan.eval = [](Cell& c) { set_lemma(c, lemma_f7_pair(c.params[0], c.params[1], c.params[2])); };
  return plan;
}

void check_spec(const SweepSpec& spec) {
  const bool kernel = spec.target == Target::Jacobi || spec.target == Target::Symmetric ||
                      spec.target == Target::Ball || spec.target == Target::Simplex;
  if (kernel) {
    if (spec.times.empty()) throw DomainError("empty time grid");
    for (double t : spec.times)
      if (!(t >= time_floor())) throw DomainError("time grid reaches below the time floor");
  }
  auto need = [](bool ok, const char* what) {
    if (!ok) throw DomainError(std::string("empty grid: ") + what);
  };
  switch (spec.target) {
    case Target::Jacobi:
      need(!spec.alphas.empty() && !spec.betas.empty() && spec.angles >= 2, "jacobi parameters");
      break;
    case Target::Symmetric: need(!spec.spaces.empty() && spec.angles >= 2, "spaces"); break;
    case Target::Ball:
      need(!spec.ball_dims.empty() && !spec.mus.empty() && spec.radii >= 1 && spec.ball_angles >= 1,
           "ball parameters");
      break;
    case Target::Simplex: need(!spec.kappas.empty() && spec.simplex_steps >= 1, "kappa"); break;
    case Target::Lemma21:
      need(!spec.nus.empty() && !spec.xis.empty() && !spec.Ds.empty() && spec.ab_points >= 1,
           "lemma21 parameters");
      break;
    case Target::Lemma22:
      need(!spec.gammas.empty() && spec.a_points >= 1 && spec.b_points >= 1, "lemma22 parameters");
      break;
  }
}

}  // namespace

void GroupSummary::add(const Cell& c) {
  ++cells;
  if (!c.error.empty()) {
    ++failures;
    return;
  }
  if (c.degenerate) {
    ++degenerate;
    return;
  }
  if (!(c.ratio > 0.0) || !std::isfinite(c.ratio)) {
    ++failures;
    return;
  }
  if (c.ratio < min_ratio) {
    min_ratio = c.ratio;
    argmin = c.id;
  }
  if (c.ratio > max_ratio) {
    max_ratio = c.ratio;
    argmax = c.id;
  }
}

bool RatioReport::ok(double ceiling) const {
  if (overall.failures > 0) return false;
  for (const auto& g : groups) {
    if (g.failures > 0) return false;
    if (g.cells == g.degenerate) continue;
    if (!(g.min_ratio > 0.0) || !std::isfinite(g.max_ratio) || !(g.spread() < ceiling)) return false;
  }
  return true;
}

RatioReport run_ratio_sweep(const SweepSpec& spec) {
  check_spec(spec);
  const auto start = std::chrono::steady_clock::now();
  Plan plan;
  switch (spec.target) {
    case Target::Jacobi: plan = plan_jacobi(spec); break;
    case Target::Symmetric: plan = plan_symmetric(spec); break;
    case Target::Ball: plan = plan_ball(spec); break;
    case Target::Simplex: plan = plan_simplex(spec); break;
    case Target::Lemma21: plan = plan_lemma21(spec); break;
    case Target::Lemma22: plan = plan_lemma22(spec); break;
  }
  for (std::size_t i = 0; i < plan.cells.size(); ++i) plan.cells[i].id = i;
  if (plan.prepare) plan.prepare(spec.workers);
  detail::parallel_for(plan.cells.size(), spec.workers, [&](std::size_t i) {
    Cell& c = plan.cells[i];
    try {
      plan.eval(c);
    } catch (const std::exception& e) {
      c.error = e.what();
      c.log_kernel = c.log_envelope = c.ratio = kNaN;
    }
  });

  RatioReport r;
  r.target = spec.target;
  r.param_names = plan.param_names;
  r.grid_size = plan.cells.size();
  r.overall.label = "all";
  for (const auto& label : plan.group_labels) {
    GroupSummary g;
    g.label = label;
    r.groups.push_back(g);
  }
  for (const Cell& c : plan.cells) {
    r.groups[c.group].add(c);
    r.overall.add(c);
  }
  r.cells = std::move(plan.cells);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string target_name(Target t) {
  switch (t) {
    case Target::Jacobi: return "jacobi";
    case Target::Symmetric: return "symmetric";
    case Target::Ball: return "ball";
    case Target::Simplex: return "simplex";
    case Target::Lemma21: return "lemma21";
    case Target::Lemma22: return "lemma22";
  }
  return "?";
}

Target parse_target(const std::string& name) {
  for (Target t : {Target::Jacobi, Target::Symmetric, Target::Ball, Target::Simplex,
                   Target::Lemma21, Target::Lemma22})
    if (target_name(t) == name) return t;
  throw DomainError("unknown target '" + name + "'");
}

SpaceDescriptor parse_space(const std::string& label) {
  for (const auto& s : space_catalog())
    if (s.label() == label) return s;
  // S^d or P^d(F) outside the catalog
  int d = 0;
  char field = 0;
  if (std::sscanf(label.c_str(), "S^%d", &d) == 1 && label == "S^" + std::to_string(d))
    return SpaceDescriptor::make(Family::Sphere, d);
  if (std::sscanf(label.c_str(), "P^%d(%c)", &d, &field) == 2 &&
      label == "P^" + std::to_string(d) + "(" + field + ")") {
    switch (field) {
      case 'R': return SpaceDescriptor::make(Family::RealProj, d);
      case 'C': return SpaceDescriptor::make(Family::ComplexProj, d);
      case 'H': return SpaceDescriptor::make(Family::QuatProj, d);
      case 'O': return SpaceDescriptor::make(Family::CayleyPlane, d);
    }
  }
  throw DomainError("unknown space '" + label + "' (expected S^d or P^d(R|C|H|O))");
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 1) throw DomainError("grid needs at least one point");
  std::vector<double> g(n, lo);
  for (int i = 1; i < n; ++i) g[i] = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
  return g;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw DomainError("log grid needs positive ends");
  auto g = linear_grid(std::log(lo), std::log(hi), n);
  for (double& v : g) v = std::exp(v);
  g.front() = lo;
  if (n > 1) g.back() = hi;
  return g;
}

std::vector<double> refine_grid(const std::vector<double>& g, bool geometric) {
  std::vector<double> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i > 0) out.push_back(geometric ? std::sqrt(g[i - 1] * g[i]) : 0.5 * (g[i - 1] + g[i]));
    out.push_back(g[i]);
  }
  return out;
}

SweepSpec default_sweep(Target target) {
  SweepSpec s;
  s.target = target;
  s.times = log_grid(1e-3, 1.0, 12);
  s.alphas = s.betas = {-0.5, 0.0, 0.5, 1.0, 2.5};
  s.spaces = space_catalog();
  s.ball_dims = {2, 3};
  s.mus = {0.0, 0.5, 2.0};
  s.kappas = {{0.0, 0.0, 0.0}, {0.5, 0.5, 0.5}, {1.0, 0.0, 2.0}};
  s.nus = {-0.5, 0.0, 0.5, 1.0, 2.5};
  s.xis = {0.0, 0.5, 1.0, 3.0};
  s.Ds = {1e-3, 1e-2, 0.1, 1.0};
  s.gammas = {-0.5, 0.0, 1.0, 3.0};
  return s;
}

SweepSpec refined(const SweepSpec& spec) {
  SweepSpec r = spec;
  r.times = refine_grid(spec.times, true);
  r.angles = 2 * spec.angles - 1;
  r.radii = 2 * spec.radii - 1;
  r.ball_angles = 2 * spec.ball_angles - 1;
  r.simplex_steps = 2 * spec.simplex_steps;
  r.ab_points = 2 * spec.ab_points - 1;
  r.a_points = 2 * spec.a_points - 1;
  r.b_points = 2 * spec.b_points - 1;
  return r;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw DomainError("config key '" + key + "': '" + v + "' is not a number");
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e6) throw DomainError("config key '" + key + "' needs an integer");
  return static_cast<int>(d);
}

// "a, b, c" or "log:lo:hi:n" / "lin:lo:hi:n"
std::vector<double> to_list(const std::string& key, const std::string& v) {
  if (v.rfind("log:", 0) == 0 || v.rfind("lin:", 0) == 0) {
    const auto parts = split(v.substr(4), ':');
    if (parts.size() != 3) throw DomainError("config key '" + key + "': expected kind:lo:hi:n");
    const double lo = to_double(key, parts[0]), hi = to_double(key, parts[1]);
    const int n = to_int(key, parts[2]);
    return v[1] == 'o' ? log_grid(lo, hi, n) : linear_grid(lo, hi, n);
  }
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(to_double(key, item));
  if (out.empty()) throw DomainError("config key '" + key + "' is empty");
  return out;
}

}  // namespace

std::map<std::string, std::string> read_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError("config line " + std::to_string(number) + ": expected key = value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_config(SweepSpec& spec, const std::map<std::string, std::string>& config) {
  for (const auto& [key, v] : config) {
    if (key == "target") spec.target = parse_target(v);
    else if (key == "times") spec.times = to_list(key, v);
    else if (key == "angles") spec.angles = to_int(key, v);
    else if (key == "alphas") spec.alphas = to_list(key, v);
    else if (key == "betas") spec.betas = to_list(key, v);
    else if (key == "spaces") {
      spec.spaces.clear();
      for (const auto& label : split(v, ',')) spec.spaces.push_back(parse_space(label));
    } else if (key == "ball_dims") {
      spec.ball_dims.clear();
      for (double d : to_list(key, v)) spec.ball_dims.push_back(to_int(key, format_double(d)));
    } else if (key == "mus") spec.mus = to_list(key, v);
    else if (key == "radii") spec.radii = to_int(key, v);
    else if (key == "ball_angles") spec.ball_angles = to_int(key, v);
    else if (key == "kappas") {
      spec.kappas.clear();
      for (const auto& item : split(v, ';')) spec.kappas.push_back(to_list(key, item));
    } else if (key == "simplex_steps") spec.simplex_steps = to_int(key, v);
    else if (key == "nus") spec.nus = to_list(key, v);
    else if (key == "xis") spec.xis = to_list(key, v);
    else if (key == "Ds") spec.Ds = to_list(key, v);
    else if (key == "ab_points") spec.ab_points = to_int(key, v);
    else if (key == "gammas") spec.gammas = to_list(key, v);
    else if (key == "a_points") spec.a_points = to_int(key, v);
    else if (key == "b_points") spec.b_points = to_int(key, v);
    else if (key == "rel_tol") spec.rel_tol = to_double(key, v);
    else if (key == "points") spec.points = to_int(key, v);
    else if (key == "workers") spec.workers = to_int(key, v);
    else throw DomainError("unknown config key '" + key + "'");
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_exp(double log_value) {
  if (std::isnan(log_value)) return "nan";
  if (log_value == -std::numeric_limits<double>::infinity()) return "0";
  if (log_value == std::numeric_limits<double>::infinity()) return "inf";
  if (std::abs(log_value) < 300.0 * std::numbers::ln10) return format_double(std::exp(log_value));
  // log_value = e ln 10 + r with ln 10 split in two doubles, so the
  // mantissa keeps full relative accuracy at large exponents.
  constexpr double ln10_hi = std::numbers::ln10;
  constexpr double ln10_lo = -2.1707562233822494e-16;
  double e = std::floor(log_value / std::numbers::ln10);
  double m = std::exp(std::fma(-e, ln10_hi, log_value) - e * ln10_lo);
  if (m >= 10.0) {
    m /= 10.0;
    e += 1.0;
  } else if (m < 1.0) {
    m *= 10.0;
    e -= 1.0;
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.16fe%+.0f", m, e);
  return buf;
}

void write_csv(std::ostream& out, const RatioReport& report) {
  out << "target,cell_id";
  for (const auto& name : report.param_names) out << ',' << name;
  out << ",t,kernel,envelope,ratio\n";
  const std::string target = target_name(report.target);
  for (const Cell& c : report.cells) {
    out << target << ',' << c.id;
    for (double p : c.params) out << ',' << format_double(p);
    out << ',' << format_double(c.t) << ',' << format_exp(c.log_kernel) << ','
        << format_exp(c.log_envelope) << ',' << format_double(c.ratio) << '\n';
  }
}

namespace {

nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json cell_json(const RatioReport& r, const Cell& c) {
  nlohmann::json j;
  j["cell_id"] = c.id;
  for (std::size_t i = 0; i < c.params.size() && i < r.param_names.size(); ++i)
    j["params"][r.param_names[i]] = c.params[i];
  j["t"] = number(c.t);
  j["kernel"] = format_exp(c.log_kernel);
  j["envelope"] = format_exp(c.log_envelope);
  j["ratio"] = number(c.ratio);
  if (c.degenerate) j["degenerate"] = true;
  if (!c.error.empty()) j["error"] = c.error;
  return j;
}

nlohmann::json summary_json(const RatioReport& r, const GroupSummary& g) {
  nlohmann::json j;
  j["label"] = g.label;
  j["cells"] = g.cells;
  j["failures"] = g.failures;
  j["degenerate"] = g.degenerate;
  const bool any = g.cells > g.failures + g.degenerate;
  j["min_ratio"] = any ? number(g.min_ratio) : nullptr;
  j["max_ratio"] = any ? number(g.max_ratio) : nullptr;
  j["spread"] = any ? number(g.spread()) : nullptr;
  if (any) {
    j["argmin"] = cell_json(r, r.cells.at(g.argmin));
    j["argmax"] = cell_json(r, r.cells.at(g.argmax));
  }
  return j;
}

}  // namespace

void write_json(std::ostream& out, const RatioReport& report, bool with_cells) {
  nlohmann::json j;
  j["target"] = target_name(report.target);
  j["grid_size"] = report.grid_size;
  j["param_names"] = report.param_names;
  j["ok"] = report.ok();
  j["overall"] = summary_json(report, report.overall);
  j["groups"] = nlohmann::json::array();
  for (const auto& g : report.groups) j["groups"].push_back(summary_json(report, g));
  nlohmann::json failed = nlohmann::json::array();
  for (const Cell& c : report.cells)
    if (!c.error.empty()) failed.push_back(cell_json(report, c));
  j["failed_cells"] = failed;
  if (with_cells) {
    j["cells"] = nlohmann::json::array();
    for (const Cell& c : report.cells) j["cells"].push_back(cell_json(report, c));
  }
  out << j.dump(2) << '\n';
}

}  // namespace heatk
