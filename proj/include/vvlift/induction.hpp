#pragma once

#include <vector>

#include "vvlift/rep.hpp"
#include "vvlift/subgroup.hpp"

namespace vvlift {

// Block-monomial matrix: column block s has its only nonzero block in row
// block row_of[s].
struct BlockMonomial {
  int m = 0;
  std::vector<long> row_of;
  std::vector<CMat> blocks;

  CMat dense() const;
  // Equals the operator norm of the dense matrix.
  double norm() const;
};

// Ind from H' to SL2(Z), blocks ordered as plan.reps.
class InducedRep : public Representation {
 public:
  InducedRep(RepPtr rho, LiftPlan plan);
  int dim() const override { return static_cast<int>(plan_.d) * rho_->dim(); }
  CMat evaluate(const ExactMatrix2& g) const override;
  std::string kind() const override { return "induced"; }

  BlockMonomial evaluate_blocks(const ExactMatrix2& g) const;
  const RepPtr& base() const { return rho_; }
  const LiftPlan& plan() const { return plan_; }

 private:
  RepPtr rho_;
  LiftPlan plan_;
};

// Block-diagonal companion form of the induced image of t_c.
CMat companion_block_at_cusp(const Representation& rho, const LiftPlan& plan);

struct PredictedEigen {
  std::size_t cusp = 0;   // i
  std::size_t base = 0;   // k, index into the Jordan data of rho(t_i)
  long root = 0;          // r in (mu + r) / h_i
  UnitaryExponent exponent;
  cplx value;
  std::vector<int> sizes;       // equal to the base block sizes
  std::vector<CVec> vectors;    // one eigenvector per block, length d m
};

struct SpectrumPrediction {
  std::vector<JordanSpec> base;  // per cusp, of rho(t_i)
  std::vector<PredictedEigen> items;
  long dim = 0;

  long count() const;  // with multiplicity
};

SpectrumPrediction predict_spectrum(const Representation& rho, const LiftPlan& plan);

struct SpectrumRow {
  UnitaryExponent exponent;
  std::vector<int> predicted_sizes, observed_sizes;
  double eigenvalue_gap = 0;
  bool match = false;
};

struct SpectrumReport {
  bool pass = false;
  std::vector<SpectrumRow> rows;
  double max_eigenvector_residual = 0;
  bool observed_diagonalizable = true;
  JordanSpec observed;
};

SpectrumReport verify_spectrum(const SpectrumPrediction& prediction, const CMat& companion,
                               const JordanTolerances& tol = {});

}  // namespace vvlift
