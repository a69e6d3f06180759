// heatk: kernel evaluation, ratio sweeps and exact-relation checks.

#include "heatk/harness.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

using namespace heatk;

struct Options {
  std::string target = "jacobi";
  double alpha = 0.0, beta = 0.0, mu = 0.0, dist = 0.0, tol = 1e-10;
  std::string kappa, space = "S^2", x, y, grid = "default", out, format = "csv", config, only;
  std::vector<double> t;
  int workers = 0;
  int points = 64;
};

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" ", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(what, "'" + s + "' is not a comma-separated list of numbers");
    }
  }
  return out;
}

int workers_of(const Options& o) {
  if (o.workers > 0) return o.workers;
  if (const char* env = std::getenv("HEATK_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 1;
}

// Writes to --out when given, else stdout.
template <class F>
void emit(const Options& o, F&& write) {
  if (o.out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw std::runtime_error("cannot open " + o.out);
  write(f);
}

KernelQuery make_query(const Options& o) {
  KernelQuery q;
  q.target = parse_target(o.target);
  q.rel_tol = o.tol;
  q.points = o.points;
  switch (q.target) {
    case Target::Jacobi: {
      q.alpha = o.alpha;
      q.beta = o.beta;
      const auto x = parse_list(o.x.empty() ? "1" : o.x, "--x");
      const auto y = parse_list(o.y.empty() ? "1" : o.y, "--y");
      if (x.size() != 1 || y.size() != 1 || std::abs(x[0]) > 1 || std::abs(y[0]) > 1)
        throw CLI::ValidationError("--x/--y", "jacobi points are single numbers in [-1, 1]");
      q.phi = std::acos(x[0]);
      q.psi = std::acos(y[0]);
      break;
    }
    case Target::Symmetric:
      q.space = parse_space(o.space);
      q.dist = o.dist;
      break;
    case Target::Ball:
    case Target::Simplex:
      q.mu = o.mu;
      q.x = parse_list(o.x, "--x");
      q.y = parse_list(o.y, "--y");
      if (q.target == Target::Simplex) q.kappa = parse_list(o.kappa, "--kappa");
      break;
    default:
      throw CLI::ValidationError("--target", "eval and varadhan take jacobi, symmetric, ball or simplex");
  }
  return q;
}

int cmd_eval(const Options& o) {
  const KernelQuery q = make_query(o);
  const double t = o.t.empty() ? 1.0 : o.t.front();
  if (o.t.size() > 1) throw CLI::ValidationError("--t", "eval takes a single time");
  const QueryResult r = evaluate_query(q, t);
  emit(o, [&](std::ostream& out) {
    const double ratio = std::exp(r.log_kernel - r.log_envelope);
    if (o.format == "json") {
      nlohmann::json j = {{"target", o.target},
                          {"t", t},
                          {"kernel", format_exp(r.log_kernel)},
                          {"log_kernel", r.log_kernel},
                          {"envelope", format_exp(r.log_envelope)},
                          {"log_envelope", r.log_envelope},
                          {"ratio", ratio}};
      out << j.dump(2) << '\n';
    } else {
      out << "target,t,kernel,envelope,ratio\n"
          << o.target << ',' << format_double(t) << ',' << format_exp(r.log_kernel) << ','
          << format_exp(r.log_envelope) << ',' << format_double(ratio) << '\n';
    }
  });
  return 0;
}

int cmd_sweep(const Options& o) {
  SweepSpec spec = default_sweep(parse_target(o.target));
  if (!o.config.empty()) {
    std::ifstream f(o.config);
    if (!f) throw std::runtime_error("cannot open " + o.config);
    apply_config(spec, read_config(f));
  }
  if (!o.t.empty()) spec.times = o.t;
  if (o.grid == "refined") spec = refined(spec);
  spec.workers = workers_of(o);
  const RatioReport r = run_ratio_sweep(spec);
  emit(o, [&](std::ostream& out) {
    if (o.format == "json") write_json(out, r);
    else write_csv(out, r);
  });
  for (const auto& g : r.groups)
    std::fprintf(stderr, "%-28s cells=%zu min=%.4g max=%.4g spread=%.4g failures=%zu\n",
                 g.label.c_str(), g.cells, g.min_ratio, g.max_ratio, g.spread(), g.failures);
  std::fprintf(stderr, "%s: %zu cells in %.1f s, %s\n", target_name(r.target).c_str(), r.grid_size,
               r.seconds, r.ok() ? "ok" : "FAILED");
  return r.ok() ? 0 : 1;
}

int cmd_verify(const Options& o) {
  std::vector<std::string> which;
  if (!o.only.empty()) {
    std::stringstream in(o.only);
    std::string item;
    while (std::getline(in, item, ',')) which.push_back(item);
  }
  const auto results = run_identity_checks(which, workers_of(o));
  bool ok = true;
  emit(o, [&](std::ostream& out) {
    if (o.format == "json") {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& r : results)
        j.push_back({{"name", r.name},
                     {"max_residual", r.max_residual},
                     {"threshold", r.threshold},
                     {"checks", r.checks},
                     {"passed", r.passed},
                     {"worst", r.worst},
                     {"note", r.note}});
      out << j.dump(2) << '\n';
    } else {
      out << "name,max_residual,threshold,checks,passed,worst\n";
      for (const auto& r : results)
        out << r.name << ',' << format_double(r.max_residual) << ',' << format_double(r.threshold)
            << ',' << r.checks << ',' << (r.passed ? "yes" : "no") << ",\"" << r.worst << "\"\n";
    }
  });
  for (const auto& r : results) {
    ok = ok && r.passed;
    std::fprintf(stderr, "%-22s %s  residual %.3g (threshold %.0e, %.1f s)\n", r.name.c_str(),
                 r.passed ? "pass" : "FAIL", r.max_residual, r.threshold, r.seconds);
  }
  return ok ? 0 : 1;
}

int cmd_varadhan(const Options& o) {
  const KernelQuery q = make_query(o);
  std::vector<double> times = o.t;
  if (times.empty()) times = log_grid(1e-2, 1e-3, 6);
  const VaradhanReport r = run_varadhan_check(q, times);
  emit(o, [&](std::ostream& out) {
    out << "t,estimate\n";
    for (std::size_t i = 0; i < r.times.size(); ++i)
      out << format_double(r.times[i]) << ',' << format_double(r.estimates[i]) << '\n';
  });
  std::fprintf(stderr, "dist=%.6g divisor=%g estimate=%.6f drift=%.3g\n", r.dist, r.divisor, r.last,
               r.drift);
  return 0;
}

int cmd_spaces(const Options& o) {
  emit(o, [&](std::ostream& out) {
    out << "space,family,d,d_tilde,alpha,beta\n";
    for (const auto& s : space_catalog()) {
      const JacobiParams p = alpha_beta(s);
      out << s.label() << ',' << family_name(s.family) << ',' << s.d << ',' << s.d_tilde << ','
          << p.alpha() << ',' << p.beta() << '\n';
    }
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat kernels on compact model spaces: evaluation, envelope sweeps, checks"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--target", o.target, "jacobi, symmetric, ball, simplex, lemma21, lemma22")
        ->check(CLI::IsMember({"jacobi", "symmetric", "ball", "simplex", "lemma21", "lemma22"}));
    c->add_option("--out", o.out, "output file (default stdout)");
    c->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--workers", o.workers, "threads (default $HEATK_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
  };
  auto kernel_flags = [&](CLI::App* c) {
    c->add_option("--alpha", o.alpha, "Jacobi alpha");
    c->add_option("--beta", o.beta, "Jacobi beta");
    c->add_option("--mu", o.mu, "ball weight parameter");
    c->add_option("--kappa", o.kappa, "simplex parameters, comma list of d+1 values");
    c->add_option("--space", o.space, "space label, e.g. S^2 or P^8(H)");
    c->add_option("--dist", o.dist, "scaled distance in [0, pi]");
    c->add_option("--x", o.x, "first point: cosine (jacobi) or comma list of coordinates");
    c->add_option("--y", o.y, "second point");
    c->add_option("--tol", o.tol, "relative tolerance")->check(CLI::PositiveNumber);
    c->add_option("--points", o.points, "quadrature nodes per averaged coordinate")
        ->check(CLI::PositiveNumber);
  };

  auto* eval = app.add_subcommand("eval", "kernel and envelope at one point pair");
  common(eval);
  kernel_flags(eval);
  eval->add_option("--t", o.t, "time")->expected(1);

  auto* sweep = app.add_subcommand("sweep", "kernel/envelope ratios over a parameter grid");
  common(sweep);
  sweep->add_option("--grid", o.grid, "default or refined")->check(CLI::IsMember({"default", "refined"}));
  sweep->add_option("--config", o.config, "key = value file overriding the default grid");
  sweep->add_option("--t", o.t, "time grid (overrides the default)")->delimiter(',');

  auto* verify = app.add_subcommand("verify", "exact relations: residuals against thresholds");
  common(verify);
  verify->add_option("--only", o.only, "comma list of checks (default all)");

  auto* varadhan = app.add_subcommand("varadhan", "Gaussian exponent estimate as t decreases");
  common(varadhan);
  kernel_flags(varadhan);
  varadhan->add_option("--t", o.t, "time sequence")->delimiter(',');

  auto* spaces = app.add_subcommand("spaces", "list the cataloged symmetric spaces");
  spaces->add_option("--out", o.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval) return cmd_eval(o);
    if (*sweep) return cmd_sweep(o);
    if (*verify) return cmd_verify(o);
    if (*varadhan) return cmd_varadhan(o);
    if (*spaces) return cmd_spaces(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n' << app.help();
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
