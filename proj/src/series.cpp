#include "series.hpp"

#include "heatk/specfun.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <tuple>

namespace heatk::detail {

double log_add(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity()) return y;
  if (y == -std::numeric_limits<double>::infinity()) return x;
  const double m = std::max(x, y);
  return m + std::log1p(std::exp(std::min(x, y) - m));
}

namespace {

class MpReal {
 public:
  explicit MpReal(long bits) { mpfr_init2(v_, bits); }
  MpReal(const MpReal&) = delete;
  MpReal& operator=(const MpReal&) = delete;
  MpReal(MpReal&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  ~MpReal() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

// a_n, b_{n+1}, 1/b_{n+1} of the orthonormal recurrence
//   b_{n+1} p_{n+1} = (x - a_n) p_n - b_n p_{n-1}
// and p_0 = h_0^{-1/2}.
struct Coefficients {
  long bits = 0;
  int size = 0;
  std::vector<MpReal> a, b_next, inv_b_next;
  std::unique_ptr<MpReal> p0;
};

std::shared_ptr<const Coefficients> build_coefficients(double a, double b, long bits, int size) {
  auto c = std::make_shared<Coefficients>();
  c->bits = bits;
  c->size = size;
  c->a.reserve(size + 1);
  c->b_next.reserve(size + 1);
  c->inv_b_next.reserve(size + 1);
  MpReal s(bits), num(bits), den(bits), tmp(bits);
  const auto R = MPFR_RNDN;
  for (int n = 0; n <= size; ++n) {
    MpReal an(bits), bn(bits), ibn(bits);
    // a_n
    if (n == 0) {
      mpfr_set_d(num.get(), b, R);
      mpfr_sub_d(num.get(), num.get(), a, R);
      mpfr_set_d(den.get(), a, R);
      mpfr_add_d(den.get(), den.get(), b, R);
      mpfr_add_ui(den.get(), den.get(), 2, R);
      mpfr_div(an.get(), num.get(), den.get(), R);
    } else {
      mpfr_set_d(s.get(), a, R);
      mpfr_add_d(s.get(), s.get(), b, R);
      mpfr_add_ui(s.get(), s.get(), 2 * n, R);  // s = 2n+a+b
      mpfr_set_d(num.get(), b, R);
      mpfr_mul_d(num.get(), num.get(), b, R);
      mpfr_set_d(tmp.get(), a, R);
      mpfr_mul_d(tmp.get(), tmp.get(), a, R);
      mpfr_sub(num.get(), num.get(), tmp.get(), R);
      mpfr_add_ui(den.get(), s.get(), 2, R);
      mpfr_mul(den.get(), den.get(), s.get(), R);
      mpfr_div(an.get(), num.get(), den.get(), R);
    }
    // b_{n+1}^2
    const unsigned long k = static_cast<unsigned long>(n) + 1;
    if (k == 1) {
      // 4(1+a)(1+b) / ((2+a+b)^2 (3+a+b))
      mpfr_set_d(num.get(), a, R);
      mpfr_add_ui(num.get(), num.get(), 1, R);
      mpfr_set_d(tmp.get(), b, R);
      mpfr_add_ui(tmp.get(), tmp.get(), 1, R);
      mpfr_mul(num.get(), num.get(), tmp.get(), R);
      mpfr_mul_ui(num.get(), num.get(), 4, R);
      mpfr_set_d(s.get(), a, R);
      mpfr_add_d(s.get(), s.get(), b, R);
      mpfr_add_ui(s.get(), s.get(), 2, R);
      mpfr_sqr(den.get(), s.get(), R);
      mpfr_add_ui(tmp.get(), s.get(), 1, R);
      mpfr_mul(den.get(), den.get(), tmp.get(), R);
    } else {
      // 4k(k+a)(k+b)(k+a+b) / (s^2 (s+1)(s-1)), s = 2k+a+b
      mpfr_set_d(num.get(), a, R);
      mpfr_add_ui(num.get(), num.get(), k, R);
      mpfr_set_d(tmp.get(), b, R);
      mpfr_add_ui(tmp.get(), tmp.get(), k, R);
      mpfr_mul(num.get(), num.get(), tmp.get(), R);
      mpfr_set_d(tmp.get(), a, R);
      mpfr_add_d(tmp.get(), tmp.get(), b, R);
      mpfr_add_ui(tmp.get(), tmp.get(), k, R);
      mpfr_mul(num.get(), num.get(), tmp.get(), R);
      mpfr_mul_ui(num.get(), num.get(), 4 * k, R);
      mpfr_set_d(s.get(), a, R);
      mpfr_add_d(s.get(), s.get(), b, R);
      mpfr_add_ui(s.get(), s.get(), 2 * k, R);
      mpfr_sqr(den.get(), s.get(), R);
      mpfr_add_ui(tmp.get(), s.get(), 1, R);
      mpfr_mul(den.get(), den.get(), tmp.get(), R);
      mpfr_sub_ui(tmp.get(), s.get(), 1, R);
      mpfr_mul(den.get(), den.get(), tmp.get(), R);
    }
    mpfr_div(bn.get(), num.get(), den.get(), R);
    mpfr_sqrt(bn.get(), bn.get(), R);
    mpfr_ui_div(ibn.get(), 1, bn.get(), R);
    c->a.push_back(std::move(an));
    c->b_next.push_back(std::move(bn));
    c->inv_b_next.push_back(std::move(ibn));
  }
  // h_0 = 2^{a+b+1} Gamma(a+1) Gamma(b+1) / Gamma(a+b+2)
  c->p0 = std::make_unique<MpReal>(bits);
  MpReal lg(bits);
  mpfr_set_d(tmp.get(), a + b + 1.0, R);
  mpfr_const_log2(lg.get(), R);
  mpfr_mul(lg.get(), lg.get(), tmp.get(), R);
  auto add_lgamma = [&](double z, int sign) {
    mpfr_set_d(tmp.get(), z, R);
    mpfr_lngamma(tmp.get(), tmp.get(), R);
    if (sign > 0)
      mpfr_add(lg.get(), lg.get(), tmp.get(), R);
    else
      mpfr_sub(lg.get(), lg.get(), tmp.get(), R);
  };
  // Rounding in a+1 etc. only rescales every term by the same factor.
  add_lgamma(a + 1.0, 1);
  add_lgamma(b + 1.0, 1);
  add_lgamma(a + b + 2.0, -1);
  mpfr_div_si(lg.get(), lg.get(), -2, R);
  mpfr_exp(c->p0->get(), lg.get(), R);
  return c;
}

class CoefficientCache {
 public:
  std::shared_ptr<const Coefficients> get(double a, double b, long bits, int size) {
    const auto key = std::make_tuple(a, b, bits);
    {
      std::shared_lock lock(mutex_);
      auto it = map_.find(key);
      if (it != map_.end() && it->second->size >= size) return it->second;
    }
    int want = size;
    {
      std::shared_lock lock(mutex_);
      auto it = map_.find(key);
      if (it != map_.end()) want = std::max(size, 2 * it->second->size);
    }
    want = std::max(want, 64);
    auto fresh = build_coefficients(a, b, bits, want);
    std::unique_lock lock(mutex_);
    auto& slot = map_[key];
    if (!slot || slot->size < fresh->size) slot = fresh;
    return slot;
  }

 private:
  std::shared_mutex mutex_;
  std::map<std::tuple<double, double, long>, std::shared_ptr<const Coefficients>> map_;
};

CoefficientCache& coefficient_cache() {
  static CoefficientCache c;
  return c;
}

}  // namespace

SeriesSum series_double(double a, double b, double x, double y, double t, int n_max) {
  const double ab = a + b;
  const double h0 = jacobi_norm_h(JacobiParams(a, b), 0);
  double px = 1.0 / std::sqrt(h0), py = px;
  double px_prev = 0.0, py_prev = 0.0;
  double b_cur = 0.0;
  double w = 1.0;
  const double q = std::exp(-2.0 * t);
  double r = std::exp(-t * (ab + 2.0));
  SeriesSum out;
  out.sum = px * py;
  out.abs_sum = std::abs(out.sum);
  for (int n = 0; n < n_max; ++n) {
    const double an = n == 0 ? (b - a) / (ab + 2.0)
                             : (b * b - a * a) / ((2.0 * n + ab) * (2.0 * n + ab + 2.0));
    const int k = n + 1;
    double b2;
    if (k == 1) {
      b2 = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double s = 2.0 * k + ab;
      b2 = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    const double b_next = std::sqrt(b2);
    const double px_next = ((x - an) * px - b_cur * px_prev) / b_next;
    const double py_next = ((y - an) * py - b_cur * py_prev) / b_next;
    px_prev = px;
    py_prev = py;
    px = px_next;
    py = py_next;
    b_cur = b_next;
    w *= r;
    r *= q;
    const double term = w * px * py;
    out.sum += term;
    out.abs_sum += std::abs(term);
    if (w == 0.0) break;
  }
  out.terms = n_max + 1;
  return out;
}

namespace {

// log sup |p_n| = max(log P_n^{a,b}(1), log P_n^{b,a}(1)) - log(h_n)/2 for
// n < size, per (a, b). Grown by doubling and shared between threads.
std::shared_ptr<const std::vector<double>> log_sup_table(double a, double b, std::size_t size) {
  static std::shared_mutex mutex;
  static std::map<std::pair<double, double>, std::shared_ptr<const std::vector<double>>> tables;
  const auto key = std::make_pair(a, b);
  {
    std::shared_lock lock(mutex);
    auto it = tables.find(key);
    if (it != tables.end() && it->second->size() >= size) return it->second;
  }
  const JacobiParams p(a, b);
  std::size_t want = std::max<std::size_t>(size, 256);
  {
    std::shared_lock lock(mutex);
    auto it = tables.find(key);
    if (it != tables.end()) want = std::max(want, 2 * it->second->size());
  }
  auto fresh = std::make_shared<std::vector<double>>(want);
  for (std::size_t n = 0; n < want; ++n)
    (*fresh)[n] = std::max(log_jacobi_at_one(p, int(n)), log_jacobi_at_one(p.swapped(), int(n))) -
                  0.5 * log_jacobi_norm_h(p, int(n));
  std::unique_lock lock(mutex);
  auto& slot = tables[key];
  if (!slot || slot->size() < fresh->size()) slot = fresh;
  return slot;
}

// Precision taper for one (a, b, t, bits). Term n of the series is at
// most T_n = exp(-t lambda_n) sup|p_n|^2 in size, so late terms need fewer
// bits: step n of both recurrences and the product c_n p_n(x) run at
// prec[n], non-increasing, which keeps every rounding error near
// 2^{-bits} times the largest T_n. The recurrence coefficients are kept
// rounded to the same schedule.
struct Taper {
  double a, b, t;
  long bits;
  std::vector<long> prec;
  std::vector<MpReal> a_r, b_r, inv_b_r;  // a_n, b_n, 1/b_{n+1} at prec[n+1]
  MpReal p0{64};
  double log_err = -std::numeric_limits<double>::infinity();

  int size() const { return static_cast<int>(prec.size()) - 1; }
};

constexpr long kTaperMargin = 24;

std::unique_ptr<Taper> make_taper(double a, double b, double t, long bits, int n_max) {
  const auto co = coefficient_cache().get(a, b, bits, n_max);
  const auto sup = log_sup_table(a, b, n_max + 1);
  const double safety = std::min(a, b) < -0.5 ? std::log(10.0) : 0.0;
  std::vector<double> log2_bound(n_max + 1);
  double top = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n_max; ++k) {
    log2_bound[k] = (-t * k * (k + a + b + 1.0) + 2.0 * (*sup)[k] + safety) / std::numbers::ln2;
    top = std::max(top, log2_bound[k]);
  }
  auto tp = std::make_unique<Taper>();
  tp->a = a;
  tp->b = b;
  tp->t = t;
  tp->bits = bits;
  tp->prec.assign(n_max + 1, bits);
  long floor_prec = 64;
  for (int k = n_max; k >= 0; --k) {
    const double want = static_cast<double>(bits) - (top - log2_bound[k]) + kTaperMargin;
    const long pk = std::clamp(static_cast<long>(std::ceil(want)), floor_prec, bits);
    tp->prec[k] = pk;
    floor_prec = pk;  // earlier steps never get fewer bits than later ones
  }
  const auto R = MPFR_RNDN;
  tp->a_r.reserve(n_max);
  tp->b_r.reserve(n_max);
  tp->inv_b_r.reserve(n_max);
  for (int k = 0; k < n_max; ++k) {
    const long pk = tp->prec[k + 1];
    tp->a_r.emplace_back(pk);
    tp->b_r.emplace_back(pk);
    tp->inv_b_r.emplace_back(pk);
    mpfr_set(tp->a_r.back().get(), co->a[k].get(), R);
    if (k > 0) mpfr_set(tp->b_r.back().get(), co->b_next[k - 1].get(), R);
    mpfr_set(tp->inv_b_r.back().get(), co->inv_b_next[k].get(), R);
  }
  mpfr_set_prec(tp->p0.get(), bits);
  mpfr_set(tp->p0.get(), co->p0->get(), R);
  // each term errs by at most about 2^{top - bits - margin} (a few roundings)
  tp->log_err = (top - static_cast<double>(bits) - kTaperMargin + 3.0) * std::numbers::ln2 +
                std::log(n_max + 1.0);
  return tp;
}

const Taper& taper(double a, double b, double t, long bits, int n_max) {
  thread_local std::vector<std::unique_ptr<Taper>> recent;
  for (std::size_t i = 0; i < recent.size(); ++i) {
    const Taper& tp = *recent[i];
    if (tp.a == a && tp.b == b && tp.t == t && tp.bits == bits && tp.size() >= n_max) {
      std::rotate(recent.begin(), recent.begin() + i, recent.begin() + i + 1);
      return *recent.front();
    }
  }
  if (recent.size() >= 16) recent.pop_back();
  recent.insert(recent.begin(), make_taper(a, b, t, bits, n_max + n_max / 4 + 8));
  return *recent.front();
}

// One step of b_{n+1} p_{n+1} = (x - a_n) p_n - b_n p_{n-1} at prec[n+1].
// `p` and `prev` hold p_n and p_{n-1} and are advanced; scratch values must
// have been allocated with tp.bits.
void recurrence_step(const Taper& tp, int n, double x, MpReal& p, MpReal& prev, MpReal& tmp,
                     MpReal& tmp2) {
  const auto R = MPFR_RNDN;
  const long pk = tp.prec[n + 1];
  mpfr_set_prec_raw(tmp.get(), pk);
  mpfr_set_prec_raw(tmp2.get(), pk);
  mpfr_d_sub(tmp.get(), x, tp.a_r[n].get(), R);
  mpfr_mul(tmp.get(), tmp.get(), p.get(), R);
  if (n > 0) {
    mpfr_mul(tmp2.get(), tp.b_r[n].get(), prev.get(), R);
    mpfr_sub(tmp.get(), tmp.get(), tmp2.get(), R);
  }
  mpfr_mul(tmp.get(), tmp.get(), tp.inv_b_r[n].get(), R);
  mpfr_prec_round(p.get(), pk, R);
  mpfr_swap(prev.get(), p.get());
  mpfr_swap(p.get(), tmp.get());
}

// c_n = exp(-t lambda_n) p_n(y), at the tapered precision. Sweeps walk
// along x with y fixed, so recent columns are kept per thread.
struct Column {
  double a, b, y, t;
  long bits;
  std::vector<MpReal> c;
};

const Column& column(const Taper& tp, double y, int n_max) {
  thread_local std::vector<std::unique_ptr<Column>> recent;
  for (std::size_t i = 0; i < recent.size(); ++i) {
    const Column& col = *recent[i];
    if (col.a == tp.a && col.b == tp.b && col.y == y && col.t == tp.t && col.bits == tp.bits &&
        static_cast<int>(col.c.size()) > n_max) {
      std::rotate(recent.begin(), recent.begin() + i, recent.begin() + i + 1);
      return *recent.front();
    }
  }
  // Cells along a column need similar orders; leave headroom for them.
  n_max = std::min(tp.size(), n_max + n_max / 4 + 8);
  const long bits = tp.bits;
  const auto R = MPFR_RNDN;
  auto col = std::make_unique<Column>(Column{tp.a, tp.b, y, tp.t, bits, {}});
  col->c.reserve(n_max + 1);
  MpReal py(bits), pyp(bits), tmp(bits), tmp2(bits), w(bits), r(bits), q(bits);
  mpfr_set(py.get(), tp.p0.get(), R);
  mpfr_set_zero(pyp.get(), 1);
  mpfr_set_ui(w.get(), 1, R);
  mpfr_set_d(q.get(), -2.0 * tp.t, R);
  mpfr_exp(q.get(), q.get(), R);
  mpfr_set_d(r.get(), tp.a, R);
  mpfr_add_d(r.get(), r.get(), tp.b, R);
  mpfr_add_ui(r.get(), r.get(), 2, R);
  mpfr_mul_d(r.get(), r.get(), -tp.t, R);
  mpfr_exp(r.get(), r.get(), R);
  for (int n = 0;; ++n) {
    MpReal cn(tp.prec[n]);
    mpfr_mul(cn.get(), w.get(), py.get(), R);
    col->c.push_back(std::move(cn));
    if (n == n_max) break;
    recurrence_step(tp, n, y, py, pyp, tmp, tmp2);
    mpfr_mul(w.get(), w.get(), r.get(), R);
    mpfr_mul(r.get(), r.get(), q.get(), R);
    mpfr_prec_round(w.get(), tp.prec[n + 1], R);
    mpfr_prec_round(r.get(), tp.prec[n + 1], R);
  }
  for (MpReal* v : {&py, &pyp, &tmp, &tmp2, &w, &r}) mpfr_set_prec_raw(v->get(), bits);
  if (recent.size() >= 16) recent.pop_back();
  recent.insert(recent.begin(), std::move(col));
  return *recent.front();
}

}  // namespace

MpSeriesSum series_mp(double a, double b, double x, double y, double t, int n_max, long bits) {
  const Taper& tp = taper(a, b, t, bits, n_max);
  const Column& col = column(tp, y, n_max);
  const auto R = MPFR_RNDN;
  MpReal px(bits), pxp(bits), tmp(bits), tmp2(bits), sum(bits), term(bits);
  mpfr_set(px.get(), tp.p0.get(), R);
  mpfr_set_zero(pxp.get(), 1);
  mpfr_mul(sum.get(), px.get(), col.c[0].get(), R);

  double log_abs = std::log(std::abs(mpfr_get_d(sum.get(), R)));
  for (int n = 0; n < n_max; ++n) {
    recurrence_step(tp, n, x, px, pxp, tmp, tmp2);
    mpfr_set_prec_raw(term.get(), tp.prec[n + 1]);
    mpfr_mul(term.get(), col.c[n + 1].get(), px.get(), R);
    mpfr_add(sum.get(), sum.get(), term.get(), R);
    if (!mpfr_zero_p(term.get())) {
      long e = 0;
      const double m = std::abs(mpfr_get_d_2exp(&e, term.get(), R));
      log_abs = log_add(log_abs, std::log(m) + static_cast<double>(e) * std::numbers::ln2);
    }
  }
  // Back to the allocated precision before the values are cleared.
  for (MpReal* v : {&px, &pxp, &tmp, &tmp2, &term}) mpfr_set_prec_raw(v->get(), bits);

  MpSeriesSum out;
  out.terms = n_max + 1;
  out.bits = bits;
  out.log_abs_sum = log_abs;
  out.log_taper_err = tp.log_err;
  out.positive = mpfr_sgn(sum.get()) > 0;
  out.value = mpfr_get_d(sum.get(), R);
  if (out.positive) {
    mpfr_log(tmp.get(), sum.get(), R);
    out.log_value = mpfr_get_d(tmp.get(), R);
  } else {
    out.log_value = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::vector<double> log_term_bounds(double a, double b, double t, double log_floor) {
  const double safety = std::min(a, b) < -0.5 ? std::log(10.0) : 0.0;
  auto sup = log_sup_table(a, b, 1024);
  std::vector<double> out;
  double prev = -std::numeric_limits<double>::infinity();
  bool descending = false;
  for (int n = 0;; ++n) {
    if (static_cast<std::size_t>(n) >= sup->size()) sup = log_sup_table(a, b, 2 * sup->size());
    const double lam = n * (n + a + b + 1.0);
    const double v = -t * lam + 2.0 * (*sup)[n] + safety;
    out.push_back(v);
    if (n > 0 && v < prev) descending = true;
    // Past the peak the ratio T_{n+1}/T_n only shrinks (the exponential
    // factor dominates the polynomial growth), so stopping is safe.
    if (descending && v < log_floor && v - prev < std::log(0.5)) break;
    prev = v;
    if (n > 50'000'000) throw DomainError("series truncation order out of range");
  }
  return out;
}

int order_from_bounds(const std::vector<double>& log_terms, double log_tol) {
  // tail(N) = sum_{N<k<=L} T_k + remainder, the remainder beyond the last
  // listed index L being at most T_L because later ratios stay below 1/2.
  int n = static_cast<int>(log_terms.size()) - 1;
  double tail = log_terms.back();
  while (n > 0) {
    const double next = log_add(tail, log_terms[n]);
    if (next >= log_tol) break;
    tail = next;
    --n;
  }
  return n;
}

double log_partial_bound(const std::vector<double>& log_terms, int n) {
  double s = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n && k < static_cast<int>(log_terms.size()); ++k) s = log_add(s, log_terms[k]);
  return s;
}

long precision_tier(double bits) {
  long tier = 128;
  while (tier < bits) tier = ((tier * 3 / 2) + 63) / 64 * 64;
  return tier;
}

}  // namespace heatk::detail
