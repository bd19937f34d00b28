#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "vvlift/induction.hpp"
#include "vvlift/kernels.hpp"

using namespace vvlift;

TEST_CASE("convolution kernels agree") {
  std::mt19937 gen(1);
  std::normal_distribution<double> nd(0, 1);
  std::vector<cplx> a(300);
  for (auto& x : a) x = cplx(nd(gen), nd(gen));
  std::vector<Eigen::VectorXcd> b(250, Eigen::VectorXcd::Zero(3));
  for (auto& v : b) v = Eigen::VectorXcd::Random(3);
  std::vector<Eigen::VectorXcd> s(400, Eigen::VectorXcd::Zero(3)), p = s, naive = s;
  convolve_serial(a, b, s);
  convolve_parallel(a, b, p);
  for (std::size_t n = 0; n < naive.size(); ++n)
    for (std::size_t k = 0; k < a.size(); ++k)
      if (n >= k && n - k < b.size()) naive[n] += a[k] * b[n - k];
  for (std::size_t n = 0; n < s.size(); ++n) {
    CHECK((s[n] - p[n]).norm() == 0);
    CHECK((s[n] - naive[n]).norm() <= 1e-12 * std::max(1.0, naive[n].norm()));
  }
}

TEST_CASE("batched induced evaluation agrees") {
  auto H = std::make_shared<const Subgroup>(Subgroup::gamma0(6));
  InducedRep ind(std::make_shared<RestrictedRep>(identity_rep(), H), cusp_orbits(*H, ExtendedPoint::infinity()));
  std::mt19937 gen(2);
  std::vector<ExactMatrix2> gs;
  for (int t = 0; t < 40; ++t) gs.push_back(oracle::random_word(gen, 20));
  const auto s = induced_batch_serial(ind, gs), p = induced_batch_parallel(ind, gs);
  for (std::size_t t = 0; t < gs.size(); ++t) CHECK((s[t].dense() - p[t].dense()).norm() == 0);
}

TEST_CASE("parallel loops rethrow") {
  CHECK_THROWS_AS(run_indexed(10, [](std::size_t i) { if (i == 7) throw InputError("seven"); }, true), InputError);
  const auto v = map_parallel(100, [](std::size_t i) { return double(i * i); });
  CHECK(v == map_serial(100, [](std::size_t i) { return double(i * i); }));
}
