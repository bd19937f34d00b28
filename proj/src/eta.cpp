#include <cmath>

#include "vvlift/qseries.hpp"

namespace vvlift {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Solves a x + b y = g = gcd(a, b) > 0.
Integer ext_gcd(const Integer& a, const Integer& b, Integer& x, Integer& y) {
  Integer g;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

}  // namespace

cplx eta_direct(cplx tau, int factors) {
  if (!(tau.imag() > 0)) throw InputError("eta needs Im tau > 0");
  const cplx q = std::exp(cplx(0, kTwoPi) * tau);
  const int need = static_cast<int>(std::ceil(40.0 / (kTwoPi * tau.imag()))) + 8;
  const int n_max = std::max(factors, need);
  cplx prod = 1, qn = 1;
  for (int n = 1; n <= n_max; ++n) {
    qn *= q;
    prod *= 1.0 - qn;
  }
  return std::exp(cplx(0, kTwoPi / 24.0) * tau) * prod;
}

cplx eta_quotient_direct(const std::map<long, long>& r, cplx tau) {
  cplx out = 1;
  for (const auto& [delta, e] : r) out *= std::pow(eta_direct(double(delta) * tau), 2.0 * double(e));
  return out;
}

LogQSeries eta_quotient_at(const std::map<long, long>& r, const ExactMatrix2& A, long N) {
  if (!A.is_integral()) throw InputError("eta_quotient_at needs an integral matrix");
  if (N < 1) throw InputError("truncation must be positive");
  const Integer a = A.a().get_num(), b = A.b().get_num(), c = A.c().get_num(), d = A.d().get_num();
  CVec one(1);
  one(0) = 1;
  LogQSeries out = LogQSeries::constant(one, Rational(N + 1));
  cplx constant = 1;
  bool first = true;
  for (const auto& [delta, e] : r) {
    if (e == 0) continue;
    // D A = M U with D = diag(delta, 1), M in SL2(Z), U = [[a', b'], [0, d']].
    const Integer da = a * delta;
    Integer x, y;
    const Integer ap = ext_gcd(da, c, y, x);  // da y + c x = ap
    const Integer m11 = da / ap, m21 = c / ap;
    // M = [[m11, -x], [m21, y]] has det m11 y + m21 x = 1.
    Integer m12 = -x, m22 = y;
    const Integer dp = Integer(delta) / ap;
    Integer bp = y * b * delta - m12 * d;
    Integer k;
    mpz_fdiv_q(k.get_mpz_t(), bp.get_mpz_t(), dp.get_mpz_t());
    bp -= k * dp;
    m12 += m11 * k;
    m22 += m21 * k;
    const ExactMatrix2 M{Rational(m11), Rational(m12), Rational(m21), Rational(m22)};
    const int nu = nu_exponent(M);
    constant *= std::polar(1.0, kTwoPi * double((nu * (e % 12)) % 12) / 12.0) *
                std::pow(dp.get_d(), -double(e));

    // eta^(2e)(z) with z = (a' tau + b') / d': q_z^x -> exp(2 pi i b' x / d') q^(a' x / d').
    const Rational scale = ratio(ap, dp);
    const long terms = to_int64(floor_of(Rational(N + 1) / scale)) + 2;
    ScalarForm f = eta_power_series(2 * e, terms);
    LogQSeries g(1, 1, f.series.valid_through * scale);
    for (const auto& [key, ch] : f.series.channels) {
      for (std::size_t i = 0; i < ch.coeffs.size(); ++i) {
        const Rational x = key.mu + Rational(ch.nmin + static_cast<long>(i));
        const cplx phase = std::polar(1.0, kTwoPi * frac_of(x * ratio(bp, dp)).get_d());
        g.add_term(x * scale, 0, phase * ch.coeffs[i]);
      }
    }
    if (first) {
      out = g;
      first = false;
    } else {
      out = series_multiply(out, g, false);
    }
  }
  return series_scale(out, constant);
}

}  // namespace vvlift
