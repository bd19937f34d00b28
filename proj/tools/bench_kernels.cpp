// Serial against OpenMP kernels. Arg(0) is the serial reference, Arg(1) the
// parallel version.
#include <benchmark/benchmark.h>

#include <random>

#include "vvlift/forms.hpp"
#include "vvlift/induction.hpp"
#include "vvlift/kernels.hpp"
#include "vvlift/lift.hpp"

using namespace vvlift;

namespace {

void BM_Convolve(benchmark::State& state) {
  const long n = state.range(1);
  std::mt19937 gen(3);
  std::normal_distribution<double> nd;
  std::vector<cplx> a(n);
  std::vector<Eigen::VectorXcd> b(n, Eigen::VectorXcd::Zero(6));
  for (long i = 0; i < n; ++i) {
    a[i] = {nd(gen), nd(gen)};
    for (int t = 0; t < 6; ++t) b[i](t) = {nd(gen), nd(gen)};
  }
  for (auto _ : state) {
    std::vector<Eigen::VectorXcd> out(n, Eigen::VectorXcd::Zero(6));
    if (state.range(0)) convolve_parallel(a, b, out);
    else convolve_serial(a, b, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Convolve)->ArgsProduct({{0, 1}, {200, 1000}});

void BM_InducedBatch(benchmark::State& state) {
  auto H = std::make_shared<const Subgroup>(Subgroup::parse("Gamma0(6)"));
  InducedRep ind(std::make_shared<RestrictedRep>(identity_rep(), H), cusp_orbits(*H, ExtendedPoint::infinity()));
  std::mt19937 gen(5);
  std::uniform_int_distribution<int> letter(0, 2);
  std::vector<ExactMatrix2> gs(512);
  for (auto& g : gs)
    for (int t = 0; t < 20; ++t) {
      const int l = letter(gen);
      g = g * (l == 0 ? ExactMatrix2::S() : ExactMatrix2::T(l == 1 ? 1 : -1));
    }
  for (auto _ : state) {
    auto out = state.range(0) ? induced_batch_parallel(ind, gs) : induced_batch_serial(ind, gs);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_InducedBatch)->Arg(0)->Arg(1);

void BM_AssembleLift(benchmark::State& state) {
  VVAF base = tau_one(0, 100);
  auto X = std::make_shared<const VVAF>(restrict_ambient(0, base.rho, base.cusps.front().series,
                                                         std::make_shared<const Subgroup>(Subgroup::parse("Gamma0(6)")),
                                                         base.closed_form, base.label));
  for (auto _ : state) {
    LiftedVVAF L = assemble_lift(X, ExtendedPoint::infinity(), state.range(0) != 0);
    benchmark::DoNotOptimize(L.components.data());
  }
}
BENCHMARK(BM_AssembleLift)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
