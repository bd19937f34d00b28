#include "vvlift/forms.hpp"

#include <cmath>

namespace vvlift {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

cplx nu_power_value(const ExactMatrix2& g, long k) {
  long e = (static_cast<long>(nu_exponent(g)) * (k % 12)) % 12;
  return std::polar(1.0, kTwoPi * double(e) / 12.0);
}

// X|_k B from any stored chart of the same H-class: B = h B' T^b with h in H'.
LogQSeries align(const std::vector<CuspExpansion>& stored, const Subgroup& H,
                 const Representation& rho, const ExactMatrix2& B) {
  for (const auto& ce : stored) {
    // Widths never exceed the index.
    for (long b = 0; b <= H.index(); ++b) {
      ExactMatrix2 h = B * ExactMatrix2::T(-b) * ce.scaling.inverse();
      if (!H.contains(h)) continue;
      return apply_matrix(rho.evaluate(h), shift_argument(ce.series, Rational(-b)));
    }
  }
  throw ConsistencyError("no stored cusp chart is equivalent to " + to_string(B));
}

LogQSeries eta_series(long e, const Rational& valid_through_q) {
  long terms = to_int64(floor_of(valid_through_q)) + 2 + std::labs(e) / 24;
  return eta_power_series(e, std::max(1L, terms)).series;
}

}  // namespace

long VVAF::truncation() const {
  long best = -1;
  for (const auto& c : cusps) {
    auto o = c.series.order();
    Rational lo = o ? *o : Rational(0);
    long t = to_int64(floor_of(c.series.valid_through - lo));
    best = best < 0 ? t : std::min(best, t);
  }
  return best;
}

FormFlags form_flags(const VVAF& X, double zero_tol) {
  FormFlags f;
  f.holomorphic = f.cusp_form = true;
  for (const auto& c : X.cusps) {
    auto o = c.series.order(zero_tol);
    Rational pole = o ? Rational(-*o) : Rational(-c.series.valid_through);
    f.pole_order.push_back(pole);
    f.holomorphic = f.holomorphic && pole <= 0;
    f.cusp_form = f.cusp_form && pole < 0;
  }
  return f;
}

void attach_charts(VVAF& X) {
  if (!X.H) X.H = std::make_shared<const Subgroup>(Subgroup::full());
  auto plan = std::make_shared<const LiftPlan>(cusp_orbits(*X.H, ExtendedPoint::infinity()));
  std::vector<CuspExpansion> aligned;
  for (const auto& e : plan->entries) {
    bool direct = false;
    for (const auto& c : X.cusps) {
      if (c.scaling == e.B && c.series.period == Rational(e.h)) {
        aligned.push_back(c);
        direct = true;
        break;
      }
    }
    if (direct) continue;
    aligned.push_back({e.cusp.cusp, e.B, relabel_period(align(X.cusps, *X.H, *X.rho, e.B), e.h)});
  }
  X.cusps = std::move(aligned);
  X.charts = std::move(plan);
}

LogQSeries expansion_at(const VVAF& X, const ExactMatrix2& B) {
  return align(X.cusps, *X.H, *X.rho, B);
}

CVec evaluate_global(const VVAF& X, cplx tau) {
  if (!X.charts) throw InputError("form has no cusp charts attached");
  if (!(tau.imag() > 0)) throw InputError("evaluation point must have Im > 0");
  ExactMatrix2 M;
  cplx t = tau;
  for (int iter = 0; iter < 10000; ++iter) {
    long n = std::lround(t.real());
    t -= double(n);
    M = ExactMatrix2::T(-n) * M;
    if (std::norm(t) < 1.0 - 1e-14) {
      t = -1.0 / t;
      M = ExactMatrix2::S() * M;
    } else {
      break;
    }
  }
  const ExactMatrix2 gamma = M.inverse();  // tau = gamma t
  const LiftPlan& plan = *X.charts;
  const long r = plan.coset_of(gamma.inverse());
  std::size_t i = 0;
  while (i + 1 < plan.entries.size() && plan.offsets[i + 1] <= r) ++i;
  const long j = r - plan.offsets[i];
  const ExactMatrix2 h = gamma * plan.reps[r];
  const cplx z = t - double(j);
  const CVec F = evaluate_at(X.cusps[i].series, z).value;
  return automorphy_factor(gamma * ExactMatrix2::T(j), z, X.weight) * (X.rho->evaluate(h) * F);
}

VVAF restrict_ambient(int weight, RepPtr rho, const LogQSeries& at_infinity,
                      std::shared_ptr<const Subgroup> H, std::function<CVec(cplx)> closed_form,
                      std::string label) {
  if (rho->group()) throw InputError("restrict_ambient needs a representation of SL2(Z)");
  if (at_infinity.period != 1) throw InputError("ambient expansion must have period 1");
  VVAF X;
  X.weight = weight;
  X.H = H ? H : std::make_shared<const Subgroup>(Subgroup::full());
  X.rho = X.H->index() == 1 && X.H->family() == Subgroup::Family::Full
              ? rho
              : std::make_shared<RestrictedRep>(rho, X.H);
  X.closed_form = std::move(closed_form);
  X.label = std::move(label);
  auto plan = std::make_shared<const LiftPlan>(cusp_orbits(*X.H, ExtendedPoint::infinity()));
  for (const auto& e : plan->entries)
    X.cusps.push_back({e.cusp.cusp, e.B,
                       relabel_period(apply_matrix(rho->evaluate(e.B), at_infinity), e.h)});
  X.charts = std::move(plan);
  return X;
}

VVAF eta_quotient_form(long N, const std::map<long, long>& r, long trunc) {
  VVAF X;
  auto chi = std::make_shared<EtaCharacter>(N, r);
  X.weight = static_cast<int>(chi->weight());
  X.rho = chi;
  X.H = std::make_shared<const Subgroup>(Subgroup::gamma0(N));
  X.closed_form = [r](cplx tau) {
    CVec v(1);
    v(0) = eta_quotient_direct(r, tau);
    return v;
  };
  std::string lbl = "eta";
  for (const auto& [d, e] : r) lbl += "_" + std::to_string(d) + "^" + std::to_string(2 * e);
  X.label = lbl;
  auto plan = std::make_shared<const LiftPlan>(cusp_orbits(*X.H, ExtendedPoint::infinity()));
  for (const auto& e : plan->entries)
    X.cusps.push_back({e.cusp.cusp, e.B, relabel_period(eta_quotient_at(r, e.B, trunc), e.h)});
  X.charts = std::move(plan);
  return X;
}

VVAF tau_one(int k, long trunc) {
  RepPtr rho = std::make_shared<TensorRep>(identity_rep(), nu_power(k + 1));
  ScalarForm f = eta_power_series(2L * (k + 1), trunc);
  LogQSeries s(2, 1, f.series.valid_through);
  const cplx inv2pii = 1.0 / cplx(0, kTwoPi);
  for (const auto& [key, ch] : f.series.channels) {
    for (std::size_t i = 0; i < ch.coeffs.size(); ++i) {
      const Rational x = key.mu + Rational(ch.nmin + static_cast<long>(i));
      CVec a(2), b(2);
      a << inv2pii * ch.coeffs[i](0), 0;
      b << 0, ch.coeffs[i](0);
      s.add_term(x, 1, a);
      s.add_term(x, 0, b);
    }
  }
  auto closed = [k](cplx tau) {
    cplx e = std::pow(eta_direct(tau), 2.0 * (k + 1));
    CVec v(2);
    v << tau * e, e;
    return v;
  };
  return restrict_ambient(k, rho, s, nullptr, closed, "tau_one(" + std::to_string(k) + ")");
}

VVAF multiply_by_function(const VVAF& X,
                          const std::function<LogQSeries(const ExactMatrix2&)>& f_at,
                          std::function<cplx(cplx)> f_closed) {
  VVAF Y = X;
  for (auto& c : Y.cusps) c.series = series_multiply(c.series, f_at(c.scaling));
  if (X.closed_form && f_closed) {
    auto xc = X.closed_form;
    Y.closed_form = [xc, f_closed](cplx tau) { return CVec(f_closed(tau) * xc(tau)); };
  } else {
    Y.closed_form = nullptr;
  }
  Y.label = X.label + "*F";
  return Y;
}

namespace {

VVAF twist_weight(const VVAF& X, int k_change, RepPtr rho) {
  // Multiplies by eta^(2 k_change): its chart at B is nu(B)^k_change eta^(2 k_change).
  VVAF Y = X;
  Y.weight = X.weight + k_change;
  Y.rho = std::move(rho);
  for (auto& c : Y.cusps) {
    Rational need = c.series.valid_through / c.series.period + 1;
    LogQSeries e = eta_series(2L * k_change, need);
    c.series = series_scale(series_multiply(c.series, e), nu_power_value(c.scaling, k_change));
  }
  if (X.closed_form) {
    auto xc = X.closed_form;
    Y.closed_form = [xc, k_change](cplx tau) {
      return CVec(std::pow(eta_direct(tau), 2.0 * k_change) * xc(tau));
    };
  }
  return Y;
}

}  // namespace

VVAF reduce_weight(const VVAF& X) {
  if (X.weight == 0) return X;
  VVAF Y = twist_weight(X, -X.weight, std::make_shared<TensorRep>(X.rho, nu_power(-X.weight)));
  Y.label = X.label + "/eta^" + std::to_string(2 * X.weight);
  return Y;
}

VVAF raise_weight(const VVAF& X0, int k) {
  if (k == 0) return X0;
  VVAF Y = twist_weight(X0, k, std::make_shared<TensorRep>(X0.rho, nu_power(k)));
  Y.label = X0.label + "*eta^" + std::to_string(2 * k);
  return Y;
}

}  // namespace vvlift
