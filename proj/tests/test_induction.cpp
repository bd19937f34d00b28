#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "vvlift/induction.hpp"

using namespace vvlift;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::shared_ptr<const Subgroup> sub(const std::string& label) {
  return std::make_shared<const Subgroup>(Subgroup::parse(label));
}

RepPtr trivial_on(const std::string& label) {
  return std::make_shared<RestrictedRep>(trivial_rep(1), sub(label));
}

std::vector<Rational> exponents(const SpectrumPrediction& p) {
  std::vector<Rational> out;
  for (const auto& it : p.items)
    for (std::size_t b = 0; b < it.sizes.size(); ++b) out.push_back(*it.exponent.exact);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("index one induction is the identity") {
  const LiftPlan plan = cusp_orbits(Subgroup::full(), ExtendedPoint::infinity());
  InducedRep ind(identity_rep(), plan);
  std::mt19937 gen(1);
  for (int trial = 0; trial < 20; ++trial) {
    const ExactMatrix2 g = oracle::random_word(gen, 12);
    CHECK((ind.evaluate(g) - identity_rep()->evaluate(g)).norm() < 1e-12);
  }
}

TEST_CASE("induced matrices agree with the dense definition") {
  std::mt19937 gen(2);
  for (const std::string label : {"Gamma0(2)", "Gamma(2)", "Gamma0(6)", "Gamma1(4)"}) {
    CAPTURE(label);
    auto H = sub(label);
    const RepPtr rho = std::make_shared<RestrictedRep>(
        std::make_shared<DirectSumRep>(identity_rep(), nu_power(5)), H);
    for (const auto& c : {ExtendedPoint::infinity(), ExtendedPoint::cusp(Rational(1, 3))}) {
      const LiftPlan plan = cusp_orbits(*H, c);
      InducedRep ind(rho, plan);
      for (int trial = 0; trial < 15; ++trial) {
        const ExactMatrix2 a = oracle::random_word(gen, 12), b = oracle::random_word(gen, 12);
        const BlockMonomial bm = ind.evaluate_blocks(a);
        const CMat dense = bm.dense();
        CHECK((dense - oracle::induced_dense(*rho, plan, a)).norm() <= 1e-9 * std::max(1.0, dense.norm()));
        CHECK(std::abs(bm.norm() - op_norm(dense)) <= 1e-9 * std::max(1.0, bm.norm()));
        // One nonzero block per block row and column.
        std::vector<int> rows(plan.d, 0);
        for (long r : bm.row_of) rows[r]++;
        for (int k : rows) CHECK(k == 1);
        const CMat ab = ind.evaluate(a * b);
        CHECK((ab - dense * ind.evaluate(b)).norm() <= 1e-10 * std::max(1.0, ab.norm()));
      }
      CHECK((companion_block_at_cusp(*rho, plan) - ind.evaluate(plan.ambient.stabilizer)).norm() < 1e-12);
    }
  }
}

TEST_CASE("companion blocks for Gamma0(2)") {
  const LiftPlan plan = cusp_orbits(Subgroup::gamma0(2), ExtendedPoint::infinity());
  const CMat C = companion_block_at_cusp(*trivial_on("Gamma0(2)"), plan);
  CMat expect = CMat::Zero(3, 3);
  expect(0, 0) = 1;
  expect(1, 2) = 1;
  expect(2, 1) = 1;
  CHECK((C - expect).norm() == 0);
  InducedRep ind(trivial_on("Gamma0(2)"), plan);
  CHECK((ind.evaluate(ExactMatrix2::T()) - expect).norm() == 0);
  // h = 1 blocks are rho(t_i) itself.
  const LiftPlan full = cusp_orbits(Subgroup::full(), ExtendedPoint::infinity());
  CHECK((companion_block_at_cusp(*identity_rep(), full) - identity_rep()->evaluate(ExactMatrix2::T())).norm() == 0);
}

TEST_CASE("predicted spectra") {
  const LiftPlan plan = cusp_orbits(Subgroup::gamma0(2), ExtendedPoint::infinity());
  const SpectrumPrediction triv = predict_spectrum(*trivial_on("Gamma0(2)"), plan);
  CHECK(triv.count() == 3);
  CHECK(exponents(triv) == std::vector<Rational>{0, 0, Rational(1, 2)});

  // The identity representation has a size-2 block at each cusp generator.
  const RepPtr I0 = std::make_shared<RestrictedRep>(identity_rep(), sub("Gamma0(2)"));
  const SpectrumPrediction log = predict_spectrum(*I0, plan);
  CHECK(log.count() == 6);
  for (const auto& it : log.items) CHECK(it.sizes == std::vector<int>{2});
  const SpectrumReport rep = verify_spectrum(log, companion_block_at_cusp(*I0, plan));
  CHECK(rep.pass);
  CHECK_FALSE(rep.observed_diagonalizable);

  // lambda = i at a width-2 cusp: exponents 1/8 and 5/8.
  auto H = sub("Gamma0(2)");
  CMat one = CMat::Identity(1, 1), li = CMat::Identity(1, 1) * cplx(0, 1);
  oracle::CuspImageRep r(H, 1, {{plan.entries[0].t, one}, {plan.entries[1].t, li}});
  const SpectrumPrediction p = predict_spectrum(r, plan);
  CHECK(exponents(p) == std::vector<Rational>{0, Rational(1, 8), Rational(5, 8)});
  for (const auto& it : p.items)
    CHECK(std::abs(it.value - std::polar(1.0, kTwoPi * it.exponent.exact->get_d())) < 1e-12);
  CHECK(verify_spectrum(p, companion_block_at_cusp(r, plan)).pass);
}

TEST_CASE("admissible input gives a diagonalizable companion") {
  const LiftPlan plan = cusp_orbits(Subgroup::gamma0(6), ExtendedPoint::infinity());
  const RepPtr chi = std::make_shared<EtaCharacter>(6, std::map<long, long>{{1, 1}, {2, -3}, {3, 2}, {6, 4}});
  const SpectrumReport rep = verify_spectrum(predict_spectrum(*chi, plan), companion_block_at_cusp(*chi, plan));
  CHECK(rep.pass);
  CHECK(rep.observed_diagonalizable);
  CHECK(rep.max_eigenvector_residual <= 1e-9);
}

TEST_CASE("identity plan reproduces the base Jordan data") {
  const LiftPlan plan = cusp_orbits(Subgroup::full(), ExtendedPoint::infinity());
  const SpectrumPrediction p = predict_spectrum(*identity_rep(), plan);
  const JordanSpec base = jordan_analyze(identity_rep()->evaluate(ExactMatrix2::T()));
  REQUIRE(p.items.size() == base.eigen.size());
  for (std::size_t k = 0; k < base.eigen.size(); ++k) {
    CHECK(p.items[k].sizes == base.eigen[k].sizes);
    CHECK(*p.items[k].exponent.exact == *base.eigen[k].mu.exact);
  }
}

TEST_CASE("predicted eigenvectors satisfy their eigen-equation") {
  std::mt19937 gen(6);
  std::normal_distribution<double> nd(0, 1);
  for (const std::string label : {"Gamma0(4)", "Gamma(2)", "Gamma0(3)"}) {
    auto H = sub(label);
    const LiftPlan plan = cusp_orbits(*H, ExtendedPoint::infinity());
    std::vector<std::pair<ExactMatrix2, CMat>> images;
    for (const auto& e : plan.entries) {
      CMat J(2, 2);
      J << std::polar(1.0, kTwoPi / 3), 1, 0, std::polar(1.0, kTwoPi / 3);
      CMat P = CMat::Identity(2, 2);
      P(0, 1) = nd(gen);
      images.push_back({e.t, P * J * P.inverse()});
    }
    oracle::CuspImageRep r(H, 2, images);
    const SpectrumPrediction p = predict_spectrum(r, plan);
    const CMat C = companion_block_at_cusp(r, plan);
    for (const auto& it : p.items)
      for (const auto& v : it.vectors) CHECK((C * v - it.value * v).norm() <= 1e-9 * v.norm());
  }
}
