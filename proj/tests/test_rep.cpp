#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "vvlift/rep.hpp"

using namespace vvlift;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

CMat random_invertible(std::mt19937& gen, int n) {
  std::normal_distribution<double> g(0, 1);
  CMat P(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) P(r, c) = cplx(g(gen), g(gen)) * 0.3;
  return P + CMat::Identity(n, n);
}

CMat jordan_matrix(const std::vector<std::pair<cplx, int>>& blocks) {
  int n = 0;
  for (const auto& b : blocks) n += b.second;
  CMat J = CMat::Zero(n, n);
  int at = 0;
  for (const auto& [lambda, size] : blocks) {
    for (int t = 0; t < size; ++t) {
      J(at + t, at + t) = lambda;
      if (t > 0) J(at + t - 1, at + t) = 1.0;
    }
    at += size;
  }
  return J;
}

}  // namespace

TEST_CASE("identity representation") {
  const RepPtr I0 = identity_rep();
  CHECK((I0->evaluate(ExactMatrix2()) - CMat::Identity(2, 2)).norm() == 0);
  for (long n : {1L, 7L, 1000L}) {
    const CMat M = I0->evaluate(ExactMatrix2::T(n));
    CMat expect(2, 2);
    expect << 1, double(n), 0, 1;
    CHECK((M - expect).norm() < 1e-9 * n);
    CHECK(std::abs(op_norm(M) - double(n)) < 1.0);
  }
  CHECK((trivial_rep(3)->evaluate(ExactMatrix2::S()) - CMat::Identity(3, 3)).norm() == 0);
}

TEST_CASE("ambient representations are homomorphisms") {
  std::mt19937 gen(9);
  const RepPtr sum = std::make_shared<DirectSumRep>(identity_rep(), nu_power(3));
  const RepPtr ten = std::make_shared<TensorRep>(identity_rep(), nu_power(-1));
  for (const RepPtr& rho : {identity_rep(), nu_power(5), sum, ten}) {
    for (int trial = 0; trial < 30; ++trial) {
      const ExactMatrix2 a = oracle::random_word(gen, 10), b = oracle::random_word(gen, 10);
      const CMat lhs = rho->evaluate(a * b), rhs = rho->evaluate(a) * rho->evaluate(b);
      CHECK((lhs - rhs).norm() <= 1e-10 * std::max(1.0, rhs.norm()));
    }
  }
  CHECK_THROWS_AS(AmbientRep(CMat::Identity(1, 1) * 2.0, CMat::Identity(1, 1)), InputError);
}

TEST_CASE("characters on words are products over letters") {
  std::mt19937 gen(21);
  const RepPtr nu = nu_power(1);
  const cplx nS = nu->evaluate(ExactMatrix2::S())(0, 0), nT = nu->evaluate(ExactMatrix2::T())(0, 0);
  CHECK(std::abs(nS - cplx(0, -1)) < 1e-15);
  CHECK(std::abs(nT - std::polar(1.0, kTwoPi / 12)) < 1e-15);
  std::uniform_int_distribution<int> l(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    ExactMatrix2 g;
    cplx prod = 1;
    for (int t = 0; t < 30; ++t) {
      const int x = l(gen);
      g = g * oracle::letter(x);
      prod *= x == 0 ? nS : x == 1 ? nT : 1.0 / nT;
    }
    CHECK(std::abs(nu->evaluate(g)(0, 0) - prod) < 1e-12);
  }
}

TEST_CASE("minus identity acts by the weight sign") {
  for (long k : {-3L, 0L, 1L, 2L, 5L}) {
    const cplx v = nu_power(k)->evaluate(-ExactMatrix2())(0, 0);
    CHECK(std::abs(v - std::polar(1.0, kTwoPi * 0.5 * double(k))) < 1e-12);
  }
  EtaCharacter chi(4, {{1, -2}, {2, 5}, {4, -2}});
  CHECK(chi.weight() == 1);
  CHECK(std::abs(chi.evaluate(-ExactMatrix2())(0, 0) + 1.0) < 1e-12);
}

TEST_CASE("eta characters follow the transformation law") {
  std::mt19937 gen(31);
  std::uniform_int_distribution<int> e(-3, 4);
  for (long N : {2L, 3L, 4L, 6L}) {
    std::map<long, long> r;
    for (long d = 1; d <= N; ++d)
      if (N % d == 0) r[d] = e(gen);
    EtaCharacter chi(N, r);
    const Subgroup& H = *chi.group();
    int tested = 0;
    while (tested < 8) {
      const ExactMatrix2 h = oracle::random_word(gen, 12);
      if (!H.contains(h)) continue;
      ++tested;
      const cplx tau(0.21, 0.9);
      auto X = [&](cplx z) {
        cplx v = 1;
        for (const auto& [d, ed] : r) v *= std::pow(oracle::eta_theta(double(d) * z), 2.0 * double(ed));
        return v;
      };
      const cplx lhs = X(mobius_apply(h, tau));
      const cplx rhs = chi.evaluate(h)(0, 0) * automorphy_factor(h, tau, static_cast<int>(chi.weight())) * X(tau);
      CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(rhs));
    }
  }
  CHECK_THROWS_AS(EtaCharacter(2, {{3, 1}}).evaluate(ExactMatrix2()), InputError);
}

TEST_CASE("coset-table representations") {
  const Subgroup G02 = Subgroup::gamma0(2);
  auto K = std::make_shared<const Subgroup>(Subgroup::from_table(oracle::coset_table_of(G02), "g02"));
  const CosetTable& t = *K->table();
  const Transversal tr = schreier_transversal(t);
  // The restriction of nu^3 (x) identity, given on Schreier generators.
  const RepPtr base = std::make_shared<TensorRep>(nu_power(3), identity_rep());
  std::map<std::pair<int, char>, CMat> images;
  for (int c = 0; c < static_cast<int>(t.sigma_S.size()); ++c)
    for (char x : {'S', 'T'}) images[{c, x}] = base->evaluate(schreier_generator(t, tr, c, x));
  CosetTableRep rho(K, 2, images);
  std::mt19937 gen(8);
  int tested = 0;
  while (tested < 30) {
    const ExactMatrix2 h = oracle::random_word(gen, 16);
    if (!K->contains(h)) continue;
    ++tested;
    CHECK((rho.evaluate(h) - base->evaluate(h)).norm() < 1e-9 * std::max(1.0, base->evaluate(h).norm()));
  }
  CHECK(rho.evaluate(ExactMatrix2::T(1000)).isApprox(base->evaluate(ExactMatrix2::T(1000)), 1e-9));
  // Images that violate the relators are rejected.
  auto broken = images;
  broken.begin()->second = 2.0 * broken.begin()->second + CMat::Identity(2, 2);
  CHECK_THROWS(CosetTableRep(K, 2, broken));
}

TEST_CASE("jordan_analyze examples") {
  CMat U(2, 2);
  U << 1, 1, 0, 1;
  const JordanSpec a = jordan_analyze(U);
  REQUIRE(a.eigen.size() == 1);
  CHECK(*a.eigen[0].mu.exact == 0);
  CHECK(a.eigen[0].sizes == std::vector<int>{2});

  CMat D = CMat::Zero(2, 2);
  D(0, 0) = cplx(0, 1);
  D(1, 1) = cplx(0, -1);
  const JordanSpec b = jordan_analyze(D);
  REQUIRE(b.eigen.size() == 2);
  CHECK(*b.eigen[0].mu.exact == Rational(1, 4));
  CHECK(*b.eigen[1].mu.exact == Rational(3, 4));
  CHECK(b.diagonalizable());

  const JordanSpec c = jordan_analyze(U * U * U);
  REQUIRE(c.eigen.size() == 1);
  CHECK(c.eigen[0].sizes == std::vector<int>{2});

  CMat big = CMat::Identity(2, 2) * 2.0;
  CHECK_THROWS_AS(jordan_analyze(big), NonUnitaryEigenvalue);
}

TEST_CASE("jordan_analyze on random similarity transforms") {
  std::mt19937 gen(77);
  std::uniform_int_distribution<int> den(1, 12), size(1, 3), count(1, 3);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<std::pair<cplx, int>> blocks;
    const int nb = count(gen);
    for (int b = 0; b < nb; ++b) {
      const int q = den(gen);
      std::uniform_int_distribution<int> num(0, q - 1);
      blocks.push_back({std::polar(1.0, kTwoPi * num(gen) / q), size(gen)});
    }
    const CMat J = jordan_matrix(blocks);
    const CMat P = random_invertible(gen, static_cast<int>(J.rows()));
    const CMat M = P * J * P.inverse();
    const JordanSpec js = jordan_analyze(M);
    CHECK((js.P * js.J * js.P.inverse() - M).norm() <= 1e-9 * M.norm());
    int total = 0;
    for (const auto& e : js.eigen) {
      CHECK(std::abs(std::abs(e.lambda) - 1.0) <= 1e-9);
      CHECK(e.sizes == oracle::jordan_sizes_by_rank(M, e.lambda));
      for (int s : e.sizes) total += s;
    }
    CHECK(total == M.rows());
  }
}

TEST_CASE("classify") {
  const std::vector<ExactMatrix2> gens{ExactMatrix2::T()};
  CHECK(classify(*nu_power(1), gens) == RepClass::Admissible);
  CHECK(classify(*identity_rep(), gens) == RepClass::Logarithmic);
  DirectSumRep mixed(nu_power(2), identity_rep());
  CHECK(classify(mixed, gens) == RepClass::Logarithmic);
}

TEST_CASE("norm growth probe") {
  std::mt19937 gen(13);
  std::vector<double> en, in_unitary, in_identity;
  for (int s = 0; s < 100; ++s) {
    const ExactMatrix2 g = oracle::random_word(gen, 20);
    en.push_back(g.norm());
    in_unitary.push_back(op_norm(nu_power(1)->evaluate(g)));
    in_identity.push_back(op_norm(identity_rep()->evaluate(g)));
  }
  CHECK(norm_growth_probe(en, in_unitary) == 0);
  CHECK(std::abs(norm_growth_probe(en, in_identity) - 1.0) < 1e-9);
}

TEST_CASE("exponent snapping") {
  CHECK(*snap_rational(0.25) == Rational(1, 4));
  CHECK(*snap_rational(-0.25) == Rational(3, 4));
  CHECK_FALSE(snap_rational(0.123456789123).has_value());
  const UnitaryExponent u = exponent_of(std::polar(1.0, kTwoPi * 5.0 / 7.0));
  CHECK(*u.exact == Rational(5, 7));
}
