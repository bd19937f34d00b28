#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vvlift/qseries.hpp"
#include "vvlift/rep.hpp"
#include "vvlift/subgroup.hpp"

namespace vvlift {

struct CuspExpansion {
  ExtendedPoint cusp;
  ExactMatrix2 scaling;  // integral B with B(oo) = cusp
  LogQSeries series;     // (X|_k B)(tau); period = width of the cusp
};

// Vector-valued form of weight k for rho on H'. Expansions are stored in the
// standard basis of C^m, one per H-class of cusps, at the cusps and scalings
// of cusp_orbits(H, oo).
struct VVAF {
  int weight = 0;
  RepPtr rho;
  std::shared_ptr<const Subgroup> H;
  std::shared_ptr<const LiftPlan> charts;  // plan at oo, used for evaluation
  std::vector<CuspExpansion> cusps;
  // Optional closed form X(tau), used as an independent oracle.
  std::function<CVec(cplx)> closed_form;
  std::string label;

  int dim() const { return rho->dim(); }
  long truncation() const;  // smallest number of valid terms over the cusps
};

struct FormFlags {
  bool weakly_holomorphic = true;
  bool holomorphic = false;
  bool cusp_form = false;
  // Per cusp, minus the least exponent with a nonzero coefficient.
  std::vector<Rational> pole_order;
};
FormFlags form_flags(const VVAF& X, double zero_tol = 1e-12);

// Builds `charts` and checks that the expansions sit at its cusps.
void attach_charts(VVAF& X);

// (X|_k B) for any integral B, from the stored cusp of the same class.
LogQSeries expansion_at(const VVAF& X, const ExactMatrix2& B);

// X(tau) from the cusp charts after reducing tau to the standard fundamental
// domain.
CVec evaluate_global(const VVAF& X, cplx tau);

// Restriction to H of an SL2(Z) form known by its expansion at oo.
VVAF restrict_ambient(int weight, RepPtr rho, const LogQSeries& at_infinity,
                      std::shared_ptr<const Subgroup> H, std::function<CVec(cplx)> closed_form = {},
                      std::string label = {});

// prod eta(delta tau)^(2 r_delta) on Gamma0(N) with its eta character.
VVAF eta_quotient_form(long N, const std::map<long, long>& r, long trunc);

// (tau, 1) eta^(2(k+1)): weight k under identity (x) nu^(k+1) on SL2(Z).
VVAF tau_one(int k, long trunc);

// Product with a scalar weight-0 function f invariant under H'. f_at(B)
// returns the series of f(B tau) with period 1.
VVAF multiply_by_function(const VVAF& X, const std::function<LogQSeries(const ExactMatrix2&)>& f_at,
                          std::function<cplx(cplx)> f_closed = {});

// eta^(-2k) X, weight 0 under rho (x) nu^(-k).
VVAF reduce_weight(const VVAF& X);
// eta^(2k) X0 under rho0 (x) nu^k.
VVAF raise_weight(const VVAF& X0, int k);

}  // namespace vvlift
