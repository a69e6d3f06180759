#include "heatk/endpoint_table.hpp"

#include "heatk/jacobi_kernel.hpp"
#include "heatk/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace heatk {

namespace {

constexpr int kOrder = 16;
constexpr double kUniformWidth = 0.25;
constexpr double kGradedSpan = 0.5;

double cheb_node(int j) { return -std::cos(std::numbers::pi * j / kOrder); }

}  // namespace

EndpointTable::EndpointTable(double a, double b, double s, double theta_max, double rel_tol)
    : a_(a), b_(b), s_(s), theta_max_(std::clamp(theta_max, 1e-6, std::numbers::pi)) {
  JacobiParams params(a, b);
  if (!(s > 0.0)) throw DomainError("table time must be positive");
  const double pi = std::numbers::pi;

  std::vector<double> br{0.0};
  const double uniform_end = std::min(theta_max_, pi - kGradedSpan);
  const int n_uniform = std::max(1, static_cast<int>(std::ceil(uniform_end / kUniformWidth)));
  for (int i = 1; i <= n_uniform; ++i) br.push_back(uniform_end * i / n_uniform);
  if (theta_max_ > uniform_end) {
    // Panels halving toward pi, down to a fraction of the boundary-layer width.
    for (double w = kGradedSpan / 2; w > 0.25 * s; w /= 2) {
      if (pi - w >= theta_max_) break;
      if (pi - w > br.back()) br.push_back(pi - w);
    }
    if (theta_max_ > br.back()) br.push_back(theta_max_);
  }
  breaks_ = br;

  const std::size_t panels = breaks_.size() - 1;
  values_.resize(panels * (kOrder + 1));
  double shared = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = breaks_[p], hi = breaks_[p + 1];
    for (int j = 0; j <= kOrder; ++j) {
      double q;
      if (j == 0 && p > 0) {
        q = shared;
      } else {
        const double theta = 0.5 * (lo + hi) + 0.5 * (hi - lo) * cheb_node(j);
        const KernelValue v = log_heat_kernel(params, std::cos(theta), 1.0, s, rel_tol);
        q = v.log_value + theta * theta / (4.0 * s);
      }
      values_[p * (kOrder + 1) + j] = q;
      if (j == kOrder) shared = q;
    }
  }
}

double EndpointTable::log_value(double theta) const {
  const double gauss = theta * theta / (4.0 * s_);
  theta = std::max(theta, 0.0);
  if (theta > theta_max_) {
    // Beyond the table: continue with the Gaussian factor only.
    return log_value(theta_max_) - (gauss - theta_max_ * theta_max_ / (4.0 * s_));
  }
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), theta);
  std::size_t p = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
  p = std::min(p, breaks_.size() - 2);
  const double lo = breaks_[p], hi = breaks_[p + 1];
  const double x = (2.0 * theta - lo - hi) / (hi - lo);
  const double* f = &values_[p * (kOrder + 1)];
  double num = 0.0, den = 0.0;
  for (int j = 0; j <= kOrder; ++j) {
    const double d = x - cheb_node(j);
    if (d == 0.0) return f[j] - gauss;
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == kOrder) w *= 0.5;
    w /= d;
    num += w * f[j];
    den += w;
  }
  return num / den - gauss;
}

std::shared_ptr<const EndpointTable> EndpointTable::cached(double a, double b, double s,
                                                           double theta_max) {
  using Key = std::tuple<double, double, double>;
  using Entry = std::shared_future<std::shared_ptr<const EndpointTable>>;
  static std::mutex mutex;
  static std::map<Key, std::vector<std::pair<double, Entry>>> tables;

  theta_max = std::min(theta_max, std::numbers::pi);
  const Key key{a, b, s};
  std::promise<std::shared_ptr<const EndpointTable>> promise;
  Entry mine = promise.get_future().share();
  {
    std::unique_lock lock(mutex);
    for (const auto& [reach, entry] : tables[key])
      if (reach >= theta_max) {
        Entry e = entry;
        lock.unlock();
        return e.get();
      }
    tables[key].emplace_back(theta_max, mine);
  }
  try {
    promise.set_value(std::make_shared<const EndpointTable>(a, b, s, theta_max));
  } catch (...) {
    promise.set_exception(std::current_exception());
    std::lock_guard lock(mutex);
    std::erase_if(tables[key], [&](const auto& e) { return e.first == theta_max; });
    throw;
  }
  return mine.get();
}

}  // namespace heatk
