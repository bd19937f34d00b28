#include "doctest.h"
#include "vvlift/io.hpp"

using namespace vvlift;

TEST_CASE("scalar schemas round-trip") {
  for (const Rational r : {Rational(0), Rational(-7, 3), parse_rational("123456789012345678901/7")}) CHECK(rational_from_json(to_json(r)) == r);
  CHECK(to_json(Rational(1, 2)) == "1/2");
  const cplx z(0.1, -1.0 / 3.0);
  CHECK(complex_from_json(to_json(z)) == z);
  CHECK(to_json(cplx(0.5, 2))[0] == "0.5");
  const ExactMatrix2 g(Rational(2), Rational(1, 3), Rational(3), Rational(1));
  CHECK(matrix2_from_json(to_json(g)) == g);
  CHECK(to_json(ExtendedPoint::infinity()) == "oo");
  CHECK(cusp_from_json(to_json(ExtendedPoint::cusp(Rational(-2, 5)))) == ExtendedPoint::cusp(Rational(-2, 5)));
  CMat M(2, 3);
  M << cplx(1, 2), 3, cplx(0, -1e-300), 4, 5, cplx(6, 7);
  CHECK(cmat_from_json(to_json(M)) == M);
}

TEST_CASE("malformed inputs raise input errors") {
  CHECK_THROWS_AS(matrix2_from_json(json::array({"1", "0", "0"})), InputError);
  CHECK_THROWS_AS(matrix2_from_json(json::array({"2", "0", "0", "1"})), InputError);
  CHECK_THROWS_AS(rational_from_json(json(1.5)), InputError);
  CHECK_THROWS_AS(complex_from_json(json::array({"1", "x"})), InputError);
  CHECK_THROWS_AS(parse_document("{"), InputError);
  CHECK_THROWS_AS(rep_from_json(json{{"kind", "mystery"}}), InputError);
  CHECK_THROWS_AS(subgroup_from_json(json("Gamma9(2)")), InputError);
}

TEST_CASE("series and forms round-trip") {
  const VVAF x = tau_one(0, 20);
  const LogQSeries& s = x.cusps.front().series;
  const LogQSeries back = series_from_json(to_json(s));
  CHECK(back.max_difference(s) == 0);
  CHECK(back.valid_through == s.valid_through);
  CHECK(emit(to_json(back)) == emit(to_json(s)));

  const VVAF e = eta_quotient_form(4, {{1, -2}, {2, 5}, {4, -2}}, 20);
  const VVAF e2 = form_from_json(to_json(e));
  CHECK(emit(to_json(e2)) == emit(to_json(e)));
  CHECK(e2.weight == 1);
  const VVAF built = form_from_json(json{{"kind", "eta_quotient"}, {"level", 4}, {"r", {{"1", -2}, {"2", 5}, {"4", -2}}}, {"trunc", 20}});
  CHECK(emit(to_json(built)) == emit(to_json(e)));
}

TEST_CASE("representations round-trip") {
  auto H = std::make_shared<const Subgroup>(Subgroup::gamma0(3));
  const RepPtr r = std::make_shared<TensorRep>(std::make_shared<RestrictedRep>(identity_rep(), H),
                                               std::make_shared<EtaCharacter>(3, std::map<long, long>{{1, 2}, {3, -1}}));
  const RepPtr back = rep_from_json(to_json(*r));
  CHECK(emit(to_json(*back)) == emit(to_json(*r)));
  const ExactMatrix2 h(Rational(1), Rational(0), Rational(3), Rational(1));
  CHECK((back->evaluate(h) - r->evaluate(h)).norm() == 0);
  InducedRep ind(r, cusp_orbits(*H, ExtendedPoint::infinity()));
  const RepPtr ib = rep_from_json(to_json(ind));
  CHECK((ib->evaluate(ExactMatrix2::S()) - ind.evaluate(ExactMatrix2::S())).norm() == 0);
}

TEST_CASE("plans round-trip through recomputation") {
  for (const std::string label : {"SL2Z", "Gamma0(2)", "Gamma(2)"}) {
    const LiftPlan p = cusp_orbits(Subgroup::parse(label), ExtendedPoint::infinity());
    const json j = to_json(p);
    CHECK(emit(to_json(plan_from_json(j))) == emit(j));
    CHECK(j["sum_h"] == p.d);
  }
  json j = to_json(cusp_orbits(Subgroup::gamma0(2), ExtendedPoint::infinity()));
  j["entries"][1]["h"] = 1;
  CHECK_THROWS_AS(plan_from_json(j), ConsistencyError);
}

TEST_CASE("reports are deterministic and round-trip") {
  VerdictReport v;
  v.seed = 4;
  v.truncation = 50;
  v.input_hashes["form"] = sha256_hex("abc");
  v.checks.push_back({"vanishing", true, 1e-17, 1e-9, 12, {"note"}});
  v.checks.push_back({"oracle", false, 0.25, 1e-8, 3, {}});
  CHECK_FALSE(v.pass());
  const std::string text = emit(to_json(v));
  CHECK(text == emit(to_json(v)));
  const VerdictReport back = verdict_from_json(parse_document(text));
  CHECK(emit(to_json(back)) == text);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
