#include "heatk/harness.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

using namespace heatk;

namespace {

SweepSpec configured(Target t, const std::string& text) {
  SweepSpec spec = default_sweep(t);
  std::istringstream in(text);
  apply_config(spec, read_config(in));
  return spec;
}

std::string csv(const RatioReport& r) {
  std::ostringstream out;
  write_csv(out, r);
  return out.str();
}

}  // namespace

TEST_CASE("grids") {
  const auto lin = linear_grid(0.0, 1.0, 5);
  CHECK(lin == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  const auto lg = log_grid(1e-3, 1.0, 4);
  REQUIRE(lg.size() == 4);
  CHECK(lg.front() == 1e-3);
  CHECK(lg.back() == 1.0);
  CHECK(lg[1] == doctest::Approx(1e-2).epsilon(1e-14));
  CHECK(linear_grid(0.3, 0.7, 1) == std::vector<double>{0.3});

  // refinement keeps the old points and doubles the intervals
  for (bool geometric : {false, true}) {
    const auto r = refine_grid(lg, geometric);
    REQUIRE(r.size() == 7);
    for (double v : lg) CHECK(std::find(r.begin(), r.end(), v) != r.end());
    CHECK(std::is_sorted(r.begin(), r.end()));
  }
  CHECK(refine_grid(lg, true)[1] == doctest::Approx(std::sqrt(1e-3 * 1e-2)).epsilon(1e-14));

  const SweepSpec d = default_sweep(Target::Jacobi);
  const SweepSpec f = refined(d);
  CHECK(f.angles == 2 * d.angles - 1);
  CHECK(f.times.size() == 2 * d.times.size() - 1);
  CHECK(f.alphas == d.alphas);
  CHECK(d.times.front() == doctest::Approx(1e-3));
  CHECK(d.times.back() == doctest::Approx(1.0));
}

TEST_CASE("targets and space labels") {
  for (Target t : {Target::Jacobi, Target::Symmetric, Target::Ball, Target::Simplex, Target::Lemma21,
                   Target::Lemma22})
    CHECK(parse_target(target_name(t)) == t);
  CHECK_THROWS_AS(parse_target("torus"), DomainError);
  for (const auto& s : space_catalog()) CHECK(parse_space(s.label()).label() == s.label());
  CHECK(parse_space("S^7").d == 7);
  CHECK_THROWS_AS(parse_space("P^5(C)"), DomainError);
}

TEST_CASE("config files") {
  const SweepSpec s = configured(Target::Simplex,
                                 "# comment\n"
                                 "times = log:0.01:1:3\n"
                                 "kappas = 0,0,0; 1,2,3\n"
                                 "simplex_steps = 3\n"
                                 "points = 16\n");
  REQUIRE(s.times.size() == 3);
  CHECK(s.times[1] == doctest::Approx(0.1).epsilon(1e-14));
  REQUIRE(s.kappas.size() == 2);
  CHECK(s.kappas[1] == std::vector<double>{1, 2, 3});
  CHECK(s.simplex_steps == 3);
  CHECK(s.points == 16);
  CHECK(configured(Target::Jacobi, "alphas = lin:0:1:3").alphas == std::vector<double>{0, 0.5, 1});
  CHECK_THROWS_AS(configured(Target::Jacobi, "colour = blue"), DomainError);
  CHECK_THROWS_AS(configured(Target::Jacobi, "angles = many"), DomainError);
  // values that parse but cannot be swept are rejected when the sweep starts
  CHECK_THROWS_AS(run_ratio_sweep(configured(Target::Jacobi, "times = 1e-9")), DomainError);
  CHECK_THROWS_AS(run_ratio_sweep(configured(Target::Simplex, "kappas = 1,1; 1,1,1")), DomainError);
}

TEST_CASE("number formatting") {
  CHECK(format_exp(-INFINITY) == "0");
  CHECK(format_exp(NAN) == "nan");
  CHECK(format_exp(0.0) == "1");
  CHECK(format_double(0.1) == "0.10000000000000001");
  // below and above the binary64 range; mpmath: 2.5765358729611496522e-869, 1.9700711140170469939e+434
  const std::string tiny = format_exp(-2000.0);
  CHECK(tiny.substr(0, 14) == "2.576535872961");
  CHECK(tiny.substr(tiny.find('e')) == "e-869");
  const std::string huge = format_exp(1000.0);
  CHECK(huge.substr(0, 14) == "1.970071114017");
  CHECK(huge.substr(huge.find('e')) == "e+434");
}

TEST_CASE("small Jacobi sweep: report shape and determinism") {
  SweepSpec s = configured(Target::Jacobi, "times = 0.01,0.1\nalphas = 0,1\nbetas = 0.5\nangles = 4\n");
  const RatioReport r = run_ratio_sweep(s);
  CHECK(r.param_names == std::vector<std::string>{"alpha", "beta", "phi", "psi"});
  CHECK(r.grid_size == 2 * 1 * 4 * 4 * 2);
  CHECK(r.groups.size() == 2);
  CHECK(r.ok());
  for (const Cell& c : r.cells) {
    CHECK(c.ratio == doctest::Approx(std::exp(c.log_kernel - c.log_envelope)).epsilon(1e-12));
    CHECK(c.error.empty());
  }
  s.workers = 3;
  const std::string a = csv(r), b = csv(run_ratio_sweep(s));
  CHECK(a == b);
  CHECK(a.rfind("target,cell_id,alpha,beta,phi,psi,t,kernel,envelope,ratio\n", 0) == 0);
  std::ostringstream js;
  write_json(js, r, false);
  CHECK(js.str().find("\"grid_size\": 64") != std::string::npos);
}

TEST_CASE("report verdicts") {
  RatioReport r;
  r.groups.resize(1);
  r.groups[0].label = "g";
  Cell c;
  c.ratio = 1.0;
  r.groups[0].add(c);
  c.ratio = 50.0;
  r.groups[0].add(c);
  CHECK(r.groups[0].spread() == 50.0);
  CHECK(r.ok(100.0));
  CHECK_FALSE(r.ok(10.0));
  c.ratio = NAN;
  r.groups[0].add(c);
  CHECK(r.groups[0].failures == 1);
  CHECK_FALSE(r.ok(100.0));
}

TEST_CASE("lemma sweeps: exact slices") {
  const RatioReport a = run_ratio_sweep(configured(Target::Lemma21, "nus = -0.5,1\nab_points = 4\n"));
  CHECK(a.ok());
  for (const Cell& c : a.cells)
    if (c.params[0] == -0.5) CHECK(c.ratio == doctest::Approx(0.5).epsilon(1e-14));
  const RatioReport b = run_ratio_sweep(configured(Target::Lemma22, "a_points = 3\nb_points = 3\n"));
  std::size_t degenerate = 0;
  for (const Cell& c : b.cells)
    if (c.degenerate) {
      ++degenerate;
      CHECK(c.params[1] == c.params[2]);
    }
  CHECK(degenerate == 3 * b.groups.size());
}

TEST_CASE("exact-relation checks and single queries") {
  const IdentityResult r = run_identity_check("qiden1");
  CHECK(r.passed);
  CHECK(r.max_residual < r.threshold);
  CHECK_THROWS_AS(run_identity_check("nonsense"), DomainError);
  CHECK(identity_names().size() == 12);

  KernelQuery q;
  q.phi = 2.0;
  const VaradhanReport v = run_varadhan_check(q, {1e-2, 1e-3});
  CHECK(v.last == doctest::Approx(1.0).epsilon(0.05));
  CHECK(v.times.front() == 1e-3 * 10);
  q.phi = 0.0;
  CHECK_THROWS_AS(run_varadhan_check(q, {1e-2}), DomainError);
}
