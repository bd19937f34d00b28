#include "vvlift/induction.hpp"

#include <algorithm>
#include <cmath>

namespace vvlift {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool same_exponent(const UnitaryExponent& a, const UnitaryExponent& b, double tol) {
  if (a.exact && b.exact) return *a.exact == *b.exact;
  double d = std::abs(a.value - b.value);
  return std::min(d, 1.0 - d) <= tol;
}

}  // namespace

CMat BlockMonomial::dense() const {
  const long d = static_cast<long>(row_of.size());
  CMat out = CMat::Zero(d * m, d * m);
  for (long s = 0; s < d; ++s) out.block(row_of[s] * m, s * m, m, m) = blocks[s];
  return out;
}

double BlockMonomial::norm() const {
  double n = 0;
  for (const auto& b : blocks) n = std::max(n, op_norm(b));
  return n;
}

InducedRep::InducedRep(RepPtr rho, LiftPlan plan) : rho_(std::move(rho)), plan_(std::move(plan)) {
  auto H = rho_->group();
  if ((H ? H->label() : std::string("SL2Z")) != plan_.H->label())
    throw InputError("representation and plan use different subgroups");
}

BlockMonomial InducedRep::evaluate_blocks(const ExactMatrix2& g) const {
  if (!g.is_integral()) throw InputError("induced representation needs an integral element");
  BlockMonomial out;
  out.m = rho_->dim();
  const long d = plan_.d;
  out.row_of.resize(d);
  out.blocks.resize(d);
  for (long s = 0; s < d; ++s) {
    ExactMatrix2 x = g * plan_.reps[s];
    long r = plan_.coset_of(x);
    out.row_of[s] = r;
    out.blocks[s] = rho_->evaluate(plan_.reps[r].inverse() * x);
  }
  return out;
}

CMat InducedRep::evaluate(const ExactMatrix2& g) const { return evaluate_blocks(g).dense(); }

CMat companion_block_at_cusp(const Representation& rho, const LiftPlan& plan) {
  const int m = rho.dim();
  CMat out = CMat::Zero(plan.d * m, plan.d * m);
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    const auto& e = plan.entries[i];
    const long off = plan.offsets[i] * m;
    for (long j = 0; j + 1 < e.h; ++j)
      out.block(off + (j + 1) * m, off + j * m, m, m) = CMat::Identity(m, m);
    out.block(off, off + (e.h - 1) * m, m, m) = rho.evaluate(e.t);
  }
  return out;
}

long SpectrumPrediction::count() const {
  long n = 0;
  for (const auto& it : items)
    for (int s : it.sizes) n += s;
  return n;
}

SpectrumPrediction predict_spectrum(const Representation& rho, const LiftPlan& plan) {
  SpectrumPrediction pred;
  const int m = rho.dim();
  pred.dim = plan.d * m;
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    const auto& e = plan.entries[i];
    pred.base.push_back(jordan_analyze(rho.evaluate(e.t)));
    const JordanSpec& js = pred.base.back();
    // Eigenvectors of rho(t_i): first column of every Jordan chain.
    long col = 0;
    for (std::size_t k = 0; k < js.eigen.size(); ++k) {
      const auto& je = js.eigen[k];
      std::vector<CVec> heads;
      for (int s : je.sizes) {
        heads.push_back(js.P.col(col));
        col += s;
      }
      for (long r = 0; r < e.h; ++r) {
        PredictedEigen pe;
        pe.cusp = i;
        pe.base = k;
        pe.root = r;
        if (je.mu.exact) {
          Rational x = (*je.mu.exact + r) / Rational(e.h);
          pe.exponent.exact = x;
          pe.exponent.value = x.get_d();
        } else {
          pe.exponent.value = (je.mu.value + double(r)) / double(e.h);
        }
        pe.value = std::polar(1.0, kTwoPi * pe.exponent.value);
        pe.sizes = je.sizes;
        // Block j is omega^(h-1-j) v, so the last block is v itself.
        for (const auto& v : heads) {
          CVec full = CVec::Zero(pred.dim);
          for (long j = 0; j < e.h; ++j)
            full.segment((plan.offsets[i] + j) * m, m) = std::pow(pe.value, double(e.h - 1 - j)) * v;
          pe.vectors.push_back(std::move(full));
        }
        pred.items.push_back(std::move(pe));
      }
    }
  }
  return pred;
}

SpectrumReport verify_spectrum(const SpectrumPrediction& prediction, const CMat& companion,
                               const JordanTolerances& tol) {
  SpectrumReport rep;
  for (const auto& it : prediction.items) {
    for (const auto& v : it.vectors) {
      double res = (companion * v - it.value * v).norm() / std::max(1e-300, v.norm());
      rep.max_eigenvector_residual = std::max(rep.max_eigenvector_residual, res);
    }
    auto row = std::find_if(rep.rows.begin(), rep.rows.end(), [&](const SpectrumRow& r) {
      return same_exponent(r.exponent, it.exponent, 1e-10);
    });
    if (row == rep.rows.end()) {
      rep.rows.push_back({});
      row = rep.rows.end() - 1;
      row->exponent = it.exponent;
    }
    row->predicted_sizes.insert(row->predicted_sizes.end(), it.sizes.begin(), it.sizes.end());
  }
  rep.observed = jordan_analyze(companion, tol);
  rep.observed_diagonalizable = rep.observed.diagonalizable();
  std::vector<bool> used(rep.observed.eigen.size(), false);
  bool all = true;
  for (auto& row : rep.rows) {
    std::sort(row.predicted_sizes.rbegin(), row.predicted_sizes.rend());
    cplx lam = std::polar(1.0, kTwoPi * row.exponent.value);
    double best = 1e300;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < rep.observed.eigen.size(); ++k) {
      double gap = std::abs(rep.observed.eigen[k].lambda - lam);
      if (!used[k] && gap < best) {
        best = gap;
        arg = k;
      }
    }
    row.eigenvalue_gap = best;
    if (best <= 1e-8) {
      used[arg] = true;
      row.observed_sizes = rep.observed.eigen[arg].sizes;
      std::sort(row.observed_sizes.rbegin(), row.observed_sizes.rend());
      row.match = row.observed_sizes == row.predicted_sizes;
    }
    all = all && row.match;
  }
  for (bool u : used) all = all && u;
  rep.pass = all && prediction.count() == companion.rows();
  return rep;
}

}  // namespace vvlift
