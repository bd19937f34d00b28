#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "vvlift/kernels.hpp"
#include "vvlift/lift.hpp"

namespace vvlift {

namespace {

double max_abs(const LogQSeries& s) {
  double best = 0;
  for (const auto& [key, ch] : s.channels)
    for (const auto& v : ch.coeffs) best = std::max(best, v.cwiseAbs().maxCoeff());
  return best;
}

// Coefficient difference relative to the larger coefficient scale.
double relative_difference(const LogQSeries& a, const LogQSeries& b) {
  const double scale = std::max({1.0, max_abs(a), max_abs(b)});
  return a.max_difference(b) / scale;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

}  // namespace

CheckReport vanishing_check(const LiftedVVAF& L, double tol) {
  CheckReport rep;
  rep.name = "vanishing";
  rep.tolerance = tol;
  const LiftPlan& plan = *L.plan;
  const int m = L.m();
  const CMat M = L.rep_at_cusp(ExactMatrix2::T());
  double worst = 0;
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    const long off = plan.offsets[i] * m;
    const long n = plan.entries[i].h * m;
    const JordanSpec js = jordan_analyze(M.block(off, off, n, n));
    // Row r of P^-1 Y may only carry the exponent of its own Jordan column.
    std::vector<UnitaryExponent> row_mu;
    for (const auto& ev : js.eigen)
      for (int s : ev.sizes)
        for (int t = 0; t < s; ++t) row_mu.push_back(ev.mu);
    CMat sel = CMat::Zero(n, L.series.dim);
    sel.block(0, off, n, n) = js.P.inverse();
    const LogQSeries Z = apply_matrix(sel, L.series);
    const double scale = std::max(1.0, max_abs(Z));
    double block_worst = 0;
    for (const auto& [key, ch] : Z.channels)
      for (const auto& v : ch.coeffs)
        for (long r = 0; r < n; ++r) {
          const UnitaryExponent& ue = row_mu[r];
          bool same;
          if (ue.exact) {
            same = *ue.exact == key.mu;
          } else {
            double dd = std::abs(ue.value - key.mu.get_d());
            same = std::min(dd, 1.0 - dd) < 1e-9;
          }
          if (!same) block_worst = std::max(block_worst, std::abs(v(r)) / scale);
          ++rep.samples;
        }
    rep.notes.push_back("cusp " + to_string(plan.entries[i].cusp.cusp) +
                        ": off-exponent mass " + fmt(block_worst));
    worst = std::max(worst, block_worst);
  }
  rep.residual = worst;
  rep.pass = worst <= tol;
  return rep;
}

CheckReport cuspidal_check(const LiftedVVAF& L, double zero_tol) {
  CheckReport rep;
  rep.name = "cuspidal";
  rep.tolerance = 0;
  const VVAF& src = *L.source;
  const LiftPlan& plan = *L.plan;
  long violations = 0;
  bool src_hol = true, src_cusp = true, lift_hol = true, lift_cusp = true;
  for (const auto& c : L.components) {
    const auto& e = plan.entries[c.i];
    const auto o_src = expansion_at(src, e.B).order(zero_tol);
    const auto o_conj = c.conjugate.order(zero_tol);
    const auto o_lift = c.lifted.order(zero_tol);
    ++rep.samples;
    // Order in q~_{c_i} is h_i times the order in q over the ambient cusp.
    if (o_src.has_value() != o_lift.has_value() || o_conj.has_value() != o_lift.has_value() ||
        (o_src && (*o_src != Rational(e.h) * *o_lift || *o_conj != *o_src))) {
      ++violations;
      rep.notes.push_back("order mismatch at component (" + std::to_string(c.i) + ", " +
                          std::to_string(c.j) + ")");
    }
    if (o_src) {
      src_hol = src_hol && *o_src >= 0;
      src_cusp = src_cusp && *o_src > 0;
    }
    if (o_lift) {
      lift_hol = lift_hol && *o_lift >= 0;
      lift_cusp = lift_cusp && *o_lift > 0;
    }
  }
  if (src_hol != lift_hol) {
    ++violations;
    rep.notes.push_back("holomorphy differs between source and lift");
  }
  if (src_cusp != lift_cusp) {
    ++violations;
    rep.notes.push_back("cuspidality differs between source and lift");
  }
  rep.notes.push_back(std::string("source ") + (src_cusp ? "cusp form" : src_hol ? "holomorphic" : "weakly holomorphic"));
  if (L.weight != 0) rep.notes.push_back("weight " + std::to_string(L.weight));
  rep.residual = double(violations);
  rep.pass = violations == 0;
  return rep;
}

CheckReport roundtrip_check(const LiftedVVAF& L, double tol) {
  CheckReport rep;
  rep.name = "roundtrip";
  rep.tolerance = tol;
  const VVAF back = roundtrip_unlift(L);
  double worst = 0;
  for (const auto& c : back.cusps) {
    const LogQSeries orig = expansion_at(*L.source, c.scaling);
    const double d = relative_difference(relabel_period(orig, c.series.period), c.series);
    worst = std::max(worst, d);
    rep.notes.push_back("unlift at " + to_string(c.cusp) + ": " + fmt(d));
    ++rep.samples;
  }
  const LiftedVVAF again =
      assemble_lift(std::make_shared<const VVAF>(back), L.plan->ambient.cusp, false);
  const double d = relative_difference(L.series, again.series);
  rep.notes.push_back("relift: " + fmt(d));
  worst = std::max(worst, d);
  rep.residual = worst;
  rep.pass = worst <= tol;
  return rep;
}

CheckReport interleaving_check(const LiftedVVAF& L, long n_max, double tol) {
  CheckReport rep;
  rep.name = "interleaving";
  rep.tolerance = tol;
  double worst = 0;
  for (const auto& c : L.components) {
    const long h = L.plan->entries[c.i].h;
    std::set<ChannelKey> keys;
    for (const auto& [key, ch] : c.conjugate.channels)
      for (long r = 0; r < h; ++r) keys.insert({frac_of((key.mu + Rational(r)) / Rational(h)), key.logpow});
    for (const auto& key : keys) {
      for (long n = -n_max; n <= n_max; ++n) {
        if (key.mu + Rational(n) >= c.lifted.valid_through) break;
        const CVec a = c.lifted.coefficient(key.mu, key.logpow, n);
        const CVec b = lifted_coefficient(L, c.i, c.j, key.mu, key.logpow, n);
        const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
        worst = std::max(worst, (a - b).cwiseAbs().maxCoeff() / scale);
        ++rep.samples;
      }
    }
  }
  rep.residual = worst;
  rep.pass = worst <= tol;
  return rep;
}

CheckReport oracle_check(const LiftedVVAF& L, const std::vector<cplx>& points, double tol) {
  CheckReport rep;
  rep.name = "oracle";
  rep.tolerance = tol;
  const int m = L.m();
  double worst = 0;
  for (const cplx& tau : points) {
    const SeriesValue sv = evaluate_at(L.series, tau);
    if (sv.tail_warning) rep.notes.push_back("tail warning at tau = " + fmt(tau.real()) + "+" + fmt(tau.imag()) + "i");
    for (std::size_t r = 0; r < L.components.size(); ++r) {
      const auto& c = L.components[r];
      const CVec direct = lift_component_direct(L, c.i, c.j, tau);
      const CVec approx = sv.value.segment(static_cast<long>(r) * m, m);
      const double denom = std::max(direct.norm(), 1e-300);
      worst = std::max(worst, (approx - direct).norm() / denom);
      ++rep.samples;
    }
  }
  rep.residual = worst;
  rep.pass = worst <= tol;
  return rep;
}

CheckReport exponent_lattice_check(const LiftedVVAF& L) {
  CheckReport rep;
  rep.name = "exponent_lattice";
  const SpectrumPrediction pred = predict_spectrum(*L.rho0, *L.plan);
  const Rational shift = ratio(L.weight, 12);
  std::set<Rational> predicted;
  std::vector<double> inexact;
  for (const auto& it : pred.items) {
    if (it.exponent.exact) {
      predicted.insert(frac_of(*it.exponent.exact + shift));
    } else {
      double v = it.exponent.value + shift.get_d();
      inexact.push_back(v - std::floor(v));
    }
  }
  std::set<Rational> seen;
  for (const auto& key : L.series.channel_keys(1e-12)) seen.insert(key.mu);
  long missing = 0;
  for (const auto& mu : seen) {
    ++rep.samples;
    if (predicted.count(mu)) continue;
    bool near = std::any_of(inexact.begin(), inexact.end(), [&](double v) {
      double dd = std::abs(v - mu.get_d());
      return std::min(dd, 1.0 - dd) < 1e-9;
    });
    if (!near) {
      ++missing;
      rep.notes.push_back("unpredicted exponent " + to_string(mu));
    }
  }
  for (const auto& mu : predicted)
    if (!seen.count(mu)) rep.notes.push_back("predicted exponent " + to_string(mu) + " carries no coefficient");
  rep.residual = double(missing);
  rep.pass = missing == 0;
  return rep;
}

std::vector<FESample> functional_equation_samples(unsigned seed, int count) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<int> len(1, 12), letter(0, 2);
  std::uniform_real_distribution<double> ux(-0.3, 0.3), uy(1.0, 1.4);
  std::vector<FESample> out;
  while (static_cast<int>(out.size()) < count) {
    ExactMatrix2 g;
    const int n = len(gen);
    for (int t = 0; t < n; ++t) {
      const int l = letter(gen);
      g = g * (l == 0 ? ExactMatrix2::S() : ExactMatrix2::T(l == 1 ? 1 : -1));
    }
    const double x = ux(gen), y = uy(gen);
    const double c = g.c().get_d(), d = g.d().get_d();
    if (std::abs(c) > 1) continue;
    const cplx tau = c == 0 ? cplx(x, y) : cplx(-d / c + x, y);
    out.push_back({g, tau});
  }
  return out;
}

CheckReport verify_functional_equation(const LiftedVVAF& L, const std::vector<FESample>& samples,
                                       double tol, bool parallel) {
  CheckReport rep;
  rep.name = "functional_equation";
  rep.tolerance = tol;
  auto residual = [&](std::size_t s) {
    const auto& smp = samples[s];
    const cplx gt = mobius_apply(smp.gamma, smp.tau);
    const CVec lhs = automorphy_factor(smp.gamma, smp.tau, -L.weight) * evaluate_at(L.series, gt).value;
    const CVec rhs = L.rep_at_cusp(smp.gamma) * evaluate_at(L.series, smp.tau).value;
    return (lhs - rhs).norm() / std::max({lhs.norm(), rhs.norm(), 1e-300});
  };
  const auto res = parallel ? map_parallel(samples.size(), residual) : map_serial(samples.size(), residual);
  rep.samples = static_cast<long>(samples.size());
  rep.residual = res.empty() ? 0 : *std::max_element(res.begin(), res.end());
  rep.pass = rep.residual <= tol;
  return rep;
}

CheckReport verify_functional_equation(const VVAF& X, const std::vector<FESample>& samples,
                                       double tol, bool parallel) {
  CheckReport rep;
  rep.name = "functional_equation_source";
  rep.tolerance = tol;
  if (!X.charts) throw InputError("form has no cusp charts attached");
  const LiftPlan& plan = *X.charts;
  // gamma is moved into H' by its coset representative: h = g_r^-1 gamma.
  auto residual = [&](std::size_t s) {
    const auto& smp = samples[s];
    const long r = plan.coset_of(smp.gamma);
    const ExactMatrix2 h = plan.reps[r].inverse() * smp.gamma;
    const cplx ht = mobius_apply(h, smp.tau);
    const CVec lhs = automorphy_factor(h, smp.tau, -X.weight) * evaluate_global(X, ht);
    const CVec rhs = X.rho->evaluate(h) * evaluate_global(X, smp.tau);
    return (lhs - rhs).norm() / std::max({lhs.norm(), rhs.norm(), 1e-300});
  };
  const auto res = parallel ? map_parallel(samples.size(), residual) : map_serial(samples.size(), residual);
  rep.samples = static_cast<long>(samples.size());
  rep.residual = res.empty() ? 0 : *std::max_element(res.begin(), res.end());
  rep.pass = rep.residual <= tol;
  return rep;
}

}  // namespace vvlift
