#include "vvlift/lift.hpp"

#include <cmath>
#include <numeric>

#include "vvlift/kernels.hpp"

namespace vvlift {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

cplx nu_value(const ExactMatrix2& g, long k) {
  long e = (static_cast<long>(nu_exponent(g)) * (((k % 12) + 12) % 12)) % 12;
  return std::polar(1.0, kTwoPi * double(e) / 12.0);
}

// Places the m-dim series s into rows [off, off + m) of out.
void stack_into(LogQSeries& out, const LogQSeries& s, long off) {
  for (const auto& [key, ch] : s.channels) {
    for (std::size_t n = 0; n < ch.coeffs.size(); ++n) {
      CVec v = CVec::Zero(out.dim);
      v.segment(off, s.dim) = ch.coeffs[n];
      out.add_term(key.mu + Rational(ch.nmin + static_cast<long>(n)), key.logpow, v);
    }
  }
}

}  // namespace

CMat LiftedVVAF::rep_at_cusp(const ExactMatrix2& gamma) const {
  const ExactMatrix2& Ac = plan->ambient.scaling;
  return lifted_rep->evaluate(Ac * gamma * Ac.inverse());
}

LiftedVVAF assemble_lift(std::shared_ptr<const VVAF> X, const ExtendedPoint& ambient_cusp,
                         bool parallel) {
  if (!X || !X->H) throw InputError("lift needs a form with its subgroup");
  LiftedVVAF L;
  L.plan = std::make_shared<const LiftPlan>(cusp_orbits(*X->H, ambient_cusp));
  L.source = X;
  L.weight = X->weight;
  const int k = X->weight;
  L.rho0 = k == 0 ? X->rho : std::make_shared<TensorRep>(X->rho, nu_power(-k));
  L.induced0 = std::make_shared<InducedRep>(L.rho0, *L.plan);
  L.lifted_rep = k == 0 ? RepPtr(L.induced0) : std::make_shared<TensorRep>(L.induced0, nu_power(k));

  const LiftPlan& plan = *L.plan;
  L.components.resize(plan.d);
  for (std::size_t i = 0; i < plan.entries.size(); ++i)
    for (long j = 0; j < plan.entries[i].h; ++j) {
      auto& c = L.components[plan.offsets[i] + j];
      c.i = i;
      c.j = j;
    }
  std::vector<LogQSeries> charts(plan.entries.size());
  run_indexed(
      plan.entries.size(),
      [&](std::size_t i) {
        const auto& e = plan.entries[i];
        charts[i] = relabel_period(expansion_at(*X, e.B), Rational(e.h));
      },
      parallel);
  run_indexed(
      L.components.size(),
      [&](std::size_t r) {
        auto& c = L.components[r];
        const auto& e = plan.entries[c.i];
        const cplx factor = nu_value(e.A, -k) * nu_value(ExactMatrix2::T(), c.j * k);
        c.conjugate = series_scale(shift_argument(charts[c.i], Rational(c.j)), factor);
        c.lifted = relabel_period(c.conjugate, Rational(1));
      },
      parallel);

  Rational valid = L.components.front().lifted.valid_through;
  for (const auto& c : L.components) valid = std::min(valid, c.lifted.valid_through);
  const int m = X->dim();
  L.series = LogQSeries(static_cast<int>(plan.d) * m, 1, valid);
  for (std::size_t r = 0; r < L.components.size(); ++r)
    stack_into(L.series, L.components[r].lifted, static_cast<long>(r) * m);
  return L;
}

CVec lifted_coefficient(const LiftedVVAF& L, std::size_t i, long j, const Rational& mu_lift,
                        int logpow, long n) {
  const auto& e = L.plan->entries.at(i);
  if (j < 0 || j >= e.h) throw InputError("component index out of range");
  const Rational x = Rational(e.h) * mu_lift;
  const Rational mu = frac_of(x);
  const long r = to_int64(x - mu);
  const auto& c = L.components[L.plan->offsets[i] + j];
  return std::pow(double(e.h), -double(logpow)) * c.conjugate.coefficient(mu, logpow, n * e.h + r);
}

CVec lift_component_direct(const LiftedVVAF& L, std::size_t i, long j, cplx tau) {
  const LiftPlan& plan = *L.plan;
  const ExactMatrix2& Ac = plan.ambient.scaling;
  const ExactMatrix2& g = plan.reps.at(plan.offsets.at(i) + j);
  const int k = L.weight;
  const cplx w = mobius_apply(g.inverse() * Ac, tau);
  const cplx at = mobius_apply(Ac, tau);
  const VVAF& X = *L.source;
  const CVec Xw = X.closed_form ? X.closed_form(w) : evaluate_global(X, w);
  if (k == 0) return Xw;
  const cplx scale = std::pow(eta_direct(at) / eta_direct(w), 2.0 * k) *
                     automorphy_factor(Ac, tau, -k);
  return scale * Xw;
}

VVAF roundtrip_unlift(const LiftedVVAF& L) {
  const VVAF& src = *L.source;
  const int m = src.dim();
  const int k = L.weight;
  const ExactMatrix2& Ac = L.plan->ambient.scaling;
  const ExactMatrix2& g = L.plan->reps.front();
  auto charts = src.charts ? src.charts
                           : std::make_shared<const LiftPlan>(
                                 cusp_orbits(*src.H, ExtendedPoint::infinity()));
  VVAF out;
  out.weight = k;
  out.rho = src.rho;
  out.H = src.H;
  out.label = src.label + "/unlift";
  for (const auto& e : charts->entries) {
    // X|_k B = nu(g^-1)^k (X~_g |_k g B) and X~ = lifted_rep(A_c)^-1 (X~|_k A_c).
    const CMat R = L.lifted_rep->evaluate(g * e.B * Ac.inverse()).topRows(m) *
                   nu_value(g.inverse(), k);
    out.cusps.push_back({e.cusp.cusp, e.B, relabel_period(apply_matrix(R, L.series), Rational(e.h))});
  }
  attach_charts(out);
  return out;
}

namespace {

IndependenceReport rank_report(const CMat& E) {
  IndependenceReport rep;
  rep.size = E.rows();
  Eigen::JacobiSVD<CMat> svd(E);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0) return rep;
  for (Eigen::Index t = 0; t < s.size(); ++t)
    if (s(t) > 1e-10 * s(0)) ++rep.rank;
  rep.min_singular_ratio = s(s.size() - 1) / s(0);
  return rep;
}

}  // namespace

IndependenceReport component_independence(const LiftedVVAF& L) {
  const long n = L.series.dim;
  CMat E(n, n);
  for (long p = 0; p < n; ++p) {
    const double t = n > 1 ? double(p) / double(n - 1) : 0.5;
    const cplx tau(-0.45 + 0.9 * t, 1.0 + 0.4 * std::sin(3.0 * t + 0.3));
    E.col(p) = evaluate_at(L.series, tau).value;
  }
  return rank_report(E);
}

InducedTauOne induced_tau_one(long N, int k, long trunc) {
  if (N < 2) throw InputError("induced_tau_one needs N >= 2");
  const long r = std::lcm(2L, 24L / std::gcd(N - 1, 24L));
  auto H = std::make_shared<const Subgroup>(Subgroup::gamma0(N));
  // f = (eta(tau) / eta(N tau))^r has trivial character on Gamma0(N).
  const std::map<long, long> rf{{1, r / 2}, {N, -r / 2}};
  EtaCharacter chi(N, rf);
  for (const auto& g : enumerate_cosets(*H))
    for (const ExactMatrix2& x : {ExactMatrix2::S(), ExactMatrix2::T()}) {
      const ExactMatrix2 xg = x * g;
      for (const auto& g2 : enumerate_cosets(*H)) {
        const ExactMatrix2 h = g2.inverse() * xg;
        if (H->contains(h) && chi.exponent12(h) != 0)
          throw ConsistencyError("eta quotient multiplier is not trivial on Gamma0(N)");
      }
    }

  VVAF base = tau_one(k, trunc);
  const LogQSeries& at_inf = base.cusps.front().series;
  VVAF X = restrict_ambient(k, base.rho, at_inf, H, base.closed_form, base.label);

  InducedTauOne out;
  out.r = r;
  for (long n = 1; n <= 6; ++n) {
    std::map<long, long> rn;
    for (const auto& [delta, e] : rf) rn[delta] = e * n;
    // The pole of f^n at oo costs n (N - 1) r / 24 terms of the product.
    const long extra = n * (N - 1) * r / 24 + 2;
    auto f_at = [&](const ExactMatrix2& B) { return eta_quotient_at(rn, B, trunc + extra); };
    auto f_closed = [rn](cplx tau) { return eta_quotient_direct(rn, tau); };
    auto Y = std::make_shared<VVAF>(multiply_by_function(X, f_at, f_closed));
    Y->label = X.label + "*f^" + std::to_string(n);
    out.lift = assemble_lift(Y, ExtendedPoint::infinity());
    out.independence = component_independence(out.lift);
    out.f_power = n;
    if (out.independence.rank == out.independence.size) break;
  }
  return out;
}

}  // namespace vvlift
