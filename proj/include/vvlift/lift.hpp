#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vvlift/forms.hpp"
#include "vvlift/induction.hpp"

namespace vvlift {

struct LiftComponent {
  std::size_t i = 0;
  long j = 0;
  // X^(i,j) = nu(A_i)^-k nu(T)^(jk) (X|_k B_i)(tau - j), period h_i.
  LogQSeries conjugate;
  // The same function over the ambient cusp, period 1.
  LogQSeries lifted;
};

// X~ = X0(g^-1 tau) eta^(2k)(tau), expanded at the ambient cusp of the plan
// (that is, X~|_k A_c). It transforms under Ind(rho (x) nu^-k) (x) nu^k,
// which is conjugate to Ind rho by the block scalars nu^k(g_r).
struct LiftedVVAF {
  std::shared_ptr<const LiftPlan> plan;
  std::shared_ptr<const VVAF> source;
  int weight = 0;
  RepPtr rho0;                          // rho (x) nu^-k on H'
  std::shared_ptr<const InducedRep> induced0;  // Ind rho0
  RepPtr lifted_rep;                    // Ind rho0 (x) nu^k
  std::vector<LiftComponent> components;  // plan.reps order
  LogQSeries series;                    // all components stacked, dim d m

  int m() const { return source->dim(); }
  // Conjugate A_c^-1 gamma A_c -> lifted_rep(gamma) of the representation;
  // for the cusp at infinity this is lifted_rep itself.
  CMat rep_at_cusp(const ExactMatrix2& gamma) const;
};

LiftedVVAF assemble_lift(std::shared_ptr<const VVAF> X, const ExtendedPoint& ambient_cusp,
                         bool parallel = true);

// h_i^-j' X^(i,j)[mu, j', n h_i + r] with mu + r = h_i mu_lift, by index
// arithmetic on the conjugate-form expansion.
CVec lifted_coefficient(const LiftedVVAF& L, std::size_t i, long j, const Rational& mu_lift,
                        int logpow, long n);

// Direct evaluation of component (i, j) from the source: X0(g^-1 A_c tau) eta^(2k)(A_c tau)
// j(A_c, tau)^-k, using the closed form when present and the cusp charts otherwise.
CVec lift_component_direct(const LiftedVVAF& L, std::size_t i, long j, cplx tau);

// Recovers the source form from the lifted expansion alone: the chart at
// B_i is row block 0 of lifted_rep(B_i) applied to X~.
VVAF roundtrip_unlift(const LiftedVVAF& L);

struct CheckReport {
  std::string name;
  bool pass = false;
  double residual = 0;
  double tolerance = 0;
  long samples = 0;
  std::vector<std::string> notes;
};

CheckReport vanishing_check(const LiftedVVAF& L, double tol = 1e-9);
CheckReport cuspidal_check(const LiftedVVAF& L, double zero_tol = 1e-12);
CheckReport roundtrip_check(const LiftedVVAF& L, double tol = 1e-10);
CheckReport interleaving_check(const LiftedVVAF& L, long n_max = 20, double tol = 1e-12);
CheckReport oracle_check(const LiftedVVAF& L, const std::vector<cplx>& points, double tol = 1e-8);
CheckReport exponent_lattice_check(const LiftedVVAF& L);

struct FESample {
  ExactMatrix2 gamma;
  cplx tau;
};
// gamma from words of length <= 12 with |c| <= 1 and tau = -d/c + x + i y,
// x in [-0.3, 0.3], y in [1, 1.4]; for c = 0, tau = x + i y.
std::vector<FESample> functional_equation_samples(unsigned seed, int count);
CheckReport verify_functional_equation(const LiftedVVAF& L, const std::vector<FESample>& samples,
                                       double tol = 1e-7, bool parallel = true);
// Source-form version; gamma must be in H'. Uses the cusp charts.
CheckReport verify_functional_equation(const VVAF& X, const std::vector<FESample>& samples,
                                       double tol = 1e-7, bool parallel = true);

// Linear independence of the component functions over C: rank of the
// evaluation matrix at dim sample points.
struct IndependenceReport {
  long rank = 0;
  long size = 0;
  double min_singular_ratio = 0;
};
IndependenceReport component_independence(const LiftedVVAF& L);

// Lift of (tau, 1) eta^(2(k+1)) restricted to Gamma0(N) and multiplied by
// a power of the Gamma0(N)-invariant eta quotient (eta(tau)/eta(N tau))^r,
// the smallest power that makes the components independent.
struct InducedTauOne {
  LiftedVVAF lift;
  IndependenceReport independence;
  long f_power = 0;
  long r = 0;
};
InducedTauOne induced_tau_one(long N, int k, long trunc);

}  // namespace vvlift
