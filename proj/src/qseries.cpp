#include "vvlift/qseries.hpp"

#include <algorithm>
#include <cmath>

#include "vvlift/kernels.hpp"

namespace vvlift {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Largest n with mu + n < bound.
long last_index_below(const Rational& mu, const Rational& bound) {
  Rational x = bound - mu;
  Integer f = floor_of(x);
  return to_int64(is_integer(x) ? Integer(f - 1) : f);
}

cplx unit_phase(const Rational& turns) { return std::polar(1.0, kTwoPi * frac_of(turns).get_d()); }

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

LogQSeries::LogQSeries(int dim_, Rational period_, Rational valid_through_)
    : period(std::move(period_)), dim(dim_), valid_through(std::move(valid_through_)) {
  if (dim < 1) throw InputError("series dimension must be positive");
  if (period <= 0) throw InputError("series period must be positive");
}

LogQSeries LogQSeries::constant(const CVec& v, const Rational& valid_through,
                                const Rational& period) {
  LogQSeries s(static_cast<int>(v.size()), period, valid_through);
  s.add_term(0, 0, v);
  return s;
}

void LogQSeries::add_term(const Rational& exponent, int logpow, const CVec& c) {
  if (exponent >= valid_through) return;
  if (c.size() != dim) throw InputError("coefficient dimension mismatch");
  if (logpow < 0) throw InputError("negative log power");
  ChannelKey key{frac_of(exponent), logpow};
  long n = to_int64(floor_of(exponent));
  Channel& ch = channels[key];
  if (ch.coeffs.empty()) {
    ch.nmin = n;
    ch.coeffs.assign(1, CVec::Zero(dim));
  }
  if (n < ch.nmin) {
    ch.coeffs.insert(ch.coeffs.begin(), ch.nmin - n, CVec::Zero(dim));
    ch.nmin = n;
  }
  if (n >= ch.nend()) ch.coeffs.resize(n - ch.nmin + 1, CVec::Zero(dim));
  ch.coeffs[n - ch.nmin] += c;
}

CVec LogQSeries::coefficient(const Rational& mu, int logpow, long n) const {
  if (mu + n >= valid_through)
    throw TruncationError("coefficient at exponent " + to_string(mu + n) +
                          " lies beyond the valid range " + to_string(valid_through));
  auto it = channels.find({mu, logpow});
  if (it == channels.end() || n < it->second.nmin || n >= it->second.nend()) return CVec::Zero(dim);
  return it->second.coeffs[n - it->second.nmin];
}

std::optional<Rational> LogQSeries::order(double zero_tol) const {
  std::optional<Rational> best;
  for (const auto& [key, ch] : channels) {
    for (std::size_t k = 0; k < ch.coeffs.size(); ++k) {
      if (ch.coeffs[k].cwiseAbs().maxCoeff() > zero_tol) {
        Rational x = key.mu + Rational(ch.nmin + static_cast<long>(k));
        if (!best || x < *best) best = x;
        break;
      }
    }
  }
  return best;
}

int LogQSeries::max_logpow() const {
  int m = 0;
  for (const auto& [key, ch] : channels) {
    (void)ch;
    m = std::max(m, key.logpow);
  }
  return m;
}

std::vector<ChannelKey> LogQSeries::channel_keys(double zero_tol) const {
  std::vector<ChannelKey> out;
  for (const auto& [key, ch] : channels)
    for (const auto& c : ch.coeffs)
      if (c.cwiseAbs().maxCoeff() > zero_tol) {
        out.push_back(key);
        break;
      }
  return out;
}

LogQSeries LogQSeries::truncated(const Rational& bound) const {
  LogQSeries out(dim, period, std::min(bound, valid_through));
  for (const auto& [key, ch] : channels)
    for (std::size_t k = 0; k < ch.coeffs.size(); ++k)
      out.add_term(key.mu + Rational(ch.nmin + static_cast<long>(k)), key.logpow, ch.coeffs[k]);
  return out;
}

void LogQSeries::compact() {
  for (auto it = channels.begin(); it != channels.end();) {
    auto& c = it->second.coeffs;
    while (!c.empty() && c.back().isZero(0)) c.pop_back();
    std::size_t lead = 0;
    while (lead < c.size() && c[lead].isZero(0)) ++lead;
    c.erase(c.begin(), c.begin() + static_cast<long>(lead));
    it->second.nmin += static_cast<long>(lead);
    if (c.empty()) {
      it = channels.erase(it);
    } else {
      ++it;
    }
  }
}

double LogQSeries::max_difference(const LogQSeries& o) const {
  if (period != o.period || dim != o.dim)
    throw InputError("series comparison needs equal period and dimension");
  Rational bound = std::min(valid_through, o.valid_through);
  double worst = 0;
  auto scan = [&](const LogQSeries& a, const LogQSeries& b) {
    for (const auto& [key, ch] : a.channels)
      for (std::size_t k = 0; k < ch.coeffs.size(); ++k) {
        long n = ch.nmin + static_cast<long>(k);
        if (key.mu + n >= bound) break;
        worst = std::max(worst, (ch.coeffs[k] - b.coefficient(key.mu, key.logpow, n)).norm());
      }
  };
  scan(*this, o);
  scan(o, *this);
  return worst;
}

LogQSeries series_add(const LogQSeries& a, const LogQSeries& b_in) {
  LogQSeries b = b_in.period == a.period ? b_in : relabel_period(b_in, a.period);
  if (a.dim != b.dim) throw InputError("series_add needs equal dimensions");
  LogQSeries out(a.dim, a.period, std::min(a.valid_through, b.valid_through));
  for (const LogQSeries* s : {&a, static_cast<const LogQSeries*>(&b)})
    for (const auto& [key, ch] : s->channels)
      for (std::size_t k = 0; k < ch.coeffs.size(); ++k)
        out.add_term(key.mu + Rational(ch.nmin + static_cast<long>(k)), key.logpow, ch.coeffs[k]);
  return out;
}

LogQSeries series_scale(const LogQSeries& a, cplx s) {
  LogQSeries out = a;
  for (auto& [key, ch] : out.channels) {
    (void)key;
    for (auto& c : ch.coeffs) c *= s;
  }
  return out;
}

LogQSeries apply_matrix(const CMat& M, const LogQSeries& a) {
  if (M.cols() != a.dim) throw InputError("apply_matrix dimension mismatch");
  LogQSeries out(static_cast<int>(M.rows()), a.period, a.valid_through);
  for (const auto& [key, ch] : a.channels) {
    Channel nc;
    nc.nmin = ch.nmin;
    for (const auto& c : ch.coeffs) nc.coeffs.push_back(M * c);
    out.channels[key] = std::move(nc);
  }
  return out;
}

LogQSeries series_multiply(const LogQSeries& a, const LogQSeries& b_in, bool parallel) {
  LogQSeries b = b_in.period == a.period ? b_in : relabel_period(b_in, a.period);
  if (a.dim != 1 && b.dim != 1) throw InputError("series_multiply needs a scalar factor");
  const LogQSeries& sc = a.dim == 1 ? a : b;  // scalar factor
  const LogQSeries& vc = a.dim == 1 ? b : a;
  auto oa = a.order(), ob = b.order();
  Rational ord_a = oa ? *oa : a.valid_through, ord_b = ob ? *ob : b.valid_through;
  Rational bound = std::min(a.valid_through + ord_b, b.valid_through + ord_a);
  if (bound <= ord_a + ord_b)
    throw TruncationError("product has no valid terms: factors are known only below their order");
  LogQSeries out(vc.dim, a.period, bound);
  for (const auto& [ks, cs] : sc.channels) {
    std::vector<cplx> av;
    av.reserve(cs.coeffs.size());
    for (const auto& c : cs.coeffs) av.push_back(c(0));
    for (const auto& [kv, cv] : vc.channels) {
      Rational mu = ks.mu + kv.mu;
      long carry = to_int64(floor_of(mu));
      mu -= carry;
      long nmin = cs.nmin + cv.nmin + carry;
      long nlast = last_index_below(mu, bound);
      if (nlast < nmin) continue;
      std::vector<CVec> buf(static_cast<std::size_t>(nlast - nmin + 1), CVec::Zero(vc.dim));
      if (parallel) {
        convolve_parallel(av, cv.coeffs, buf);
      } else {
        convolve_serial(av, cv.coeffs, buf);
      }
      ChannelKey key{mu, ks.logpow + kv.logpow};
      Channel& dst = out.channels[key];
      if (dst.coeffs.empty()) {
        dst.nmin = nmin;
        dst.coeffs = std::move(buf);
      } else {
        long lo = std::min(dst.nmin, nmin), hi = std::max(dst.nend(), nmin + (long)buf.size());
        std::vector<CVec> merged(static_cast<std::size_t>(hi - lo), CVec::Zero(vc.dim));
        for (std::size_t k = 0; k < dst.coeffs.size(); ++k) merged[dst.nmin - lo + k] += dst.coeffs[k];
        for (std::size_t k = 0; k < buf.size(); ++k) merged[nmin - lo + k] += buf[k];
        dst.nmin = lo;
        dst.coeffs = std::move(merged);
      }
    }
  }
  return out;
}

LogQSeries relabel_period(const LogQSeries& a, const Rational& new_period) {
  if (new_period <= 0) throw InputError("period must be positive");
  const Rational s = new_period / a.period;
  LogQSeries out(a.dim, new_period, a.valid_through * s);
  const double sd = s.get_d();
  for (const auto& [key, ch] : a.channels) {
    const double f = std::pow(sd, key.logpow);
    for (std::size_t k = 0; k < ch.coeffs.size(); ++k) {
      if (ch.coeffs[k].isZero(0)) continue;
      Rational x = (key.mu + Rational(ch.nmin + static_cast<long>(k))) * s;
      out.add_term(x, key.logpow, f * ch.coeffs[k]);
    }
  }
  return out;
}

LogQSeries shift_argument(const LogQSeries& a, const Rational& s) {
  if (s == 0) return a;
  const Rational ratio = s / a.period;
  const cplx shift = cplx(0, kTwoPi * ratio.get_d());  // log q~(tau - s) = log q~ - shift
  LogQSeries out(a.dim, a.period, a.valid_through);
  for (const auto& [key, ch] : a.channels) {
    for (std::size_t k = 0; k < ch.coeffs.size(); ++k) {
      const long n = ch.nmin + static_cast<long>(k);
      const cplx phase = unit_phase(-(key.mu + n) * ratio);
      const CVec c = phase * ch.coeffs[k];
      for (int j = 0; j <= key.logpow; ++j) {
        const cplx f = binom(key.logpow, j) * std::pow(-shift, key.logpow - j);
        out.add_term(key.mu + n, j, f * c);
      }
    }
  }
  return out;
}

SeriesValue evaluate_at(const LogQSeries& a, cplx tau) {
  SeriesValue out;
  out.value = CVec::Zero(a.dim);
  const cplx L = cplx(0, kTwoPi) * tau / a.period.get_d();
  double last = 0;
  for (const auto& [key, ch] : a.channels) {
    const cplx logf = std::pow(L, key.logpow);
    for (std::size_t k = 0; k < ch.coeffs.size(); ++k) {
      const double x = key.mu.get_d() + double(ch.nmin + static_cast<long>(k));
      const CVec term = logf * std::exp(L * x) * ch.coeffs[k];
      out.value += term;
      if (k + 1 == ch.coeffs.size()) last = std::max(last, term.norm());
    }
  }
  out.tail_ratio = last / std::max(1e-300, out.value.norm());
  out.tail_warning = out.tail_ratio > 1e-15 && last > 0;
  return out;
}

std::vector<Integer> euler_product_coeffs(long N) {
  // sum over k in Z of (-1)^k q^(k(3k-1)/2)
  std::vector<Integer> c(N + 1, 0);
  c[0] = 1;
  for (long k = 1; k * (3 * k - 1) / 2 <= N; ++k) {
    const int sign = k % 2 == 0 ? 1 : -1;
    c[k * (3 * k - 1) / 2] += sign;
    if (k * (3 * k + 1) / 2 <= N) c[k * (3 * k + 1) / 2] += sign;
  }
  return c;
}

std::vector<Integer> power_series_pow(const std::vector<Integer>& f, long e, long N) {
  if (f.empty() || f[0] != 1) throw InputError("power_series_pow needs f[0] = 1");
  std::vector<Integer> g(N + 1, 0);
  g[0] = 1;
  for (long n = 1; n <= N; ++n) {
    Rational acc = 0;
    for (long k = 1; k <= n && k < static_cast<long>(f.size()); ++k)
      acc += Rational(Integer((e + 1) * k - n) * f[k] * g[n - k]);
    acc /= n;
    if (!is_integer(acc)) throw ConsistencyError("non-integral coefficient in integer power");
    g[n] = acc.get_num();
  }
  return g;
}

ScalarForm eta_power_series(long e, long N) {
  if (e % 2 != 0) throw InputError("eta power must be even");
  if (N < 1) throw InputError("truncation must be positive");
  ScalarForm sf;
  sf.weight2 = static_cast<int>(e);
  sf.leading = ratio(e, 24);
  sf.integer_coeffs = power_series_pow(euler_product_coeffs(N), e, N);
  sf.series = LogQSeries(1, 1, sf.leading + N + 1);
  CVec c(1);
  for (long n = 0; n <= N; ++n) {
    c(0) = sf.integer_coeffs[n].get_d();
    sf.series.add_term(sf.leading + n, 0, c);
  }
  sf.multiplier_T = std::polar(1.0, kTwoPi * double(e) / 24.0);
  sf.multiplier_S = std::pow(cplx(0, -1), double(e / 2));
  return sf;
}

}  // namespace vvlift
