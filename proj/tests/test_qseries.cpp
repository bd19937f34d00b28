#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "vvlift/forms.hpp"
#include "vvlift/qseries.hpp"

using namespace vvlift;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

CVec vec1(cplx z) {
  CVec v(1);
  v(0) = z;
  return v;
}

}  // namespace

TEST_CASE("Delta coefficients match the product oracle exactly") {
  const long N = 50;
  const ScalarForm d = eta_power_series(24, N);
  const auto expect = oracle::delta_by_products(N);
  REQUIRE(d.integer_coeffs.size() >= static_cast<std::size_t>(N + 1));
  for (long n = 0; n <= N; ++n) CHECK(d.integer_coeffs[n] == expect[n]);
  CHECK(d.integer_coeffs[0] == 1);
  CHECK(d.integer_coeffs[1] == -24);
  CHECK(d.integer_coeffs[2] == 252);
  CHECK(d.integer_coeffs[3] == -1472);
  CHECK(d.leading == 1);
  CHECK(std::abs(d.series.coefficient(Rational(0), 0, 1)(0) - 1.0) == 0);
  CHECK(std::abs(d.series.coefficient(Rational(0), 0, 3)(0) - 252.0) == 0);
}

TEST_CASE("eta powers") {
  const ScalarForm one = eta_power_series(0, 10);
  CHECK(one.series.order() == Rational(0));
  CHECK(std::abs(one.series.coefficient(Rational(0), 0, 0)(0) - 1.0) == 0);
  CHECK(one.series.channels.size() == 1);
  const ScalarForm e2 = eta_power_series(2, 10);
  CHECK(std::abs(e2.multiplier_T - std::polar(1.0, kTwoPi / 12)) < 1e-15);
  const cplx ratio = oracle::eta_theta(cplx(1, 2)) / oracle::eta_theta(cplx(0, 2));
  CHECK(std::abs(ratio * ratio - e2.multiplier_T) < 1e-12);
  CHECK_THROWS_AS(eta_power_series(3, 10), InputError);
  for (long e : {-48L, -2L, 4L, 10L}) {
    const ScalarForm f = eta_power_series(e, 40);
    const cplx tau(0.17, 0.9);
    const cplx direct = std::pow(oracle::eta_theta(tau), double(e));
    CHECK(std::abs(evaluate_at(f.series, tau).value(0) - direct) <= 1e-10 * std::abs(direct));
  }
}

TEST_CASE("series products") {
  const LogQSeries d = eta_power_series(24, 30).series;
  CVec one = vec1(1.0);
  const LogQSeries unit = LogQSeries::constant(one, Rational(100));
  CHECK(series_multiply(d, unit).max_difference(d) == 0);

  LogQSeries h(1, 1, Rational(10));
  h.add_term(Rational(1, 2), 0, one);
  const LogQSeries hh = series_multiply(h, h);
  CHECK(hh.order() == Rational(1));
  CHECK(std::abs(hh.coefficient(Rational(0), 0, 1)(0) - 1.0) == 0);

  const LogQSeries a = eta_power_series(2, 40).series, b = eta_power_series(-2, 40).series;
  const LogQSeries ab = series_multiply(a, b);
  CHECK(ab.max_difference(LogQSeries::constant(one, ab.valid_through)) < 1e-9);
  CHECK(ab.valid_through >= 40);

  // Parallel and serial convolutions agree exactly.
  const LogQSeries big = eta_power_series(-24, 200).series;
  CHECK(series_multiply(big, d, true).max_difference(series_multiply(big, d, false)) == 0);
}

TEST_CASE("truncation is enforced") {
  const LogQSeries d = eta_power_series(24, 10).series;
  CHECK_THROWS_AS(d.coefficient(Rational(0), 0, 20), TruncationError);
  LogQSeries pole(1, 1, Rational(2));
  pole.add_term(Rational(-5), 0, vec1(1.0));
  const LogQSeries pp = series_multiply(pole, pole);
  CHECK(pp.valid_through == -3);
  CHECK(pp.order() == Rational(-10));
  // A factor with no known terms leaves nothing.
  CHECK_THROWS_AS(series_multiply(LogQSeries(1, 1, Rational(0)), d), TruncationError);
}

TEST_CASE("argument shifts") {
  const LogQSeries d = eta_power_series(2, 20).series;
  CHECK(shift_argument(d, Rational(0)).max_difference(d) == 0);

  LogQSeries half(1, 2, Rational(10));
  half.add_term(Rational(1, 2), 0, vec1(1.0));
  half.add_term(Rational(3, 2), 0, vec1(1.0));
  const LogQSeries s = shift_argument(half, Rational(1));  // offset h / 2
  for (long n : {0L, 1L}) {
    const cplx expect = std::exp(cplx(0, -kTwoPi * 0.5 * (0.5 + n)));
    CHECK(std::abs(s.coefficient(Rational(1, 2), 0, n)(0) - expect) < 1e-14);
  }

  LogQSeries lg(1, 3, Rational(10));
  lg.add_term(Rational(1), 1, vec1(2.0));
  const Rational off(1, 2);
  const LogQSeries t = shift_argument(lg, off);
  const cplx phase = std::exp(cplx(0, -kTwoPi * 1.0 * off.get_d() / 3.0));
  CHECK(std::abs(t.coefficient(Rational(0), 1, 1)(0) - phase * 2.0) < 1e-14);
  CHECK(std::abs(t.coefficient(Rational(0), 0, 1)(0) - phase * cplx(0, -kTwoPi * off.get_d() / 3.0) * 2.0) < 1e-14);

  // Against direct evaluation, log channels included.
  const VVAF tau1 = tau_one(0, 30);
  const LogQSeries& x = tau1.cusps.front().series;
  for (const Rational sh : {Rational(1), Rational(-3, 2), Rational(5, 7)}) {
    const cplx z(0.1, 1.3);
    const CVec lhs = evaluate_at(shift_argument(x, sh), z).value;
    const CVec rhs = evaluate_at(x, z - sh.get_d()).value;
    CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
  }
}

TEST_CASE("period relabelling leaves values unchanged") {
  const VVAF tau1 = tau_one(0, 30);
  const LogQSeries& x = tau1.cusps.front().series;
  const cplx z(-0.2, 1.1);
  for (const Rational p : {Rational(2), Rational(6), Rational(1, 3)}) {
    const LogQSeries y = relabel_period(x, p);
    CHECK(y.period == p);
    CHECK((evaluate_at(y, z).value - evaluate_at(x, z).value).norm() < 1e-13);
  }
}

TEST_CASE("evaluation") {
  CVec c(2);
  c << cplx(1, 2), 3.0;
  CHECK((evaluate_at(LogQSeries::constant(c, Rational(5)), cplx(0.3, 0.2)).value - c).norm() == 0);
  const LogQSeries d = eta_power_series(24, 60).series;
  const cplx tau(0, 2);
  const cplx direct = std::pow(eta_direct(tau, 200), 24.0);
  CHECK(std::abs(evaluate_at(d, tau).value(0) - direct) <= 1e-10 * std::abs(direct));
  CHECK(std::abs(std::pow(oracle::eta_theta(tau), 24.0) - direct) <= 1e-12 * std::abs(direct));
  // (tau, 1) of weight -1.
  const VVAF x = tau_one(-1, 20);
  for (const cplx z : {cplx(0.3, 0.8), cplx(-1.7, 2.5)}) {
    const CVec v = evaluate_at(x.cusps.front().series, z).value;
    CHECK(std::abs(v(0) - z) < 1e-13);
    CHECK(std::abs(v(1) - 1.0) < 1e-13);
  }
}

TEST_CASE("eta quotients at cusps agree with direct evaluation") {
  std::mt19937 gen(19);
  std::uniform_int_distribution<int> e(-3, 4);
  for (long N : {2L, 4L, 6L, 9L}) {
    std::map<long, long> r;
    long k = 0;
    for (long dlt = 1; dlt <= N; ++dlt)
      if (N % dlt == 0) k += (r[dlt] = e(gen));
    for (int trial = 0; trial < 6; ++trial) {
      const ExactMatrix2 A = oracle::random_word(gen, 10);
      const LogQSeries s = eta_quotient_at(r, A, 60);
      const cplx tau(0.05 * trial, 1.2);
      cplx direct = 1;
      const cplx at = mobius_apply(A, tau);
      for (const auto& [dlt, ed] : r) direct *= std::pow(oracle::eta_theta(double(dlt) * at), 2.0 * ed);
      direct *= automorphy_factor(A, tau, static_cast<int>(-k));
      CAPTURE(N);
      CAPTURE(to_string(A));
      CHECK(std::abs(evaluate_at(s, tau).value(0) - direct) <= 1e-9 * std::abs(direct));
    }
  }
}

TEST_CASE("weight reduction roundtrip") {
  const VVAF x = eta_quotient_form(2, {{1, 3}, {2, 1}}, 40);
  const VVAF x0 = reduce_weight(x);
  CHECK(x0.weight == 0);
  const VVAF back = raise_weight(x0, x.weight);
  for (std::size_t c = 0; c < x.cusps.size(); ++c)
    CHECK(back.cusps[c].series.max_difference(x.cusps[c].series) <= 1e-12);
  const VVAF same = reduce_weight(tau_one(0, 20));
  CHECK(same.weight == 0);
  // tau_one(-1) reduced is (tau, 1) eta^2 under the identity twisted by nu.
  const VVAF t = reduce_weight(tau_one(-1, 30));
  const cplx z(0.2, 1.1);
  const CVec v = evaluate_at(t.cusps.front().series, z).value;
  const cplx e2 = std::pow(oracle::eta_theta(z), 2);
  CHECK(std::abs(v(0) - z * e2) < 1e-12);
  CHECK(std::abs(v(1) - e2) < 1e-12);
}
