#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vvlift/sl2.hpp"
#include "vvlift/subgroup.hpp"

namespace vvlift {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

class NonUnitaryEigenvalue : public InputError {
 public:
  using InputError::InputError;
};

class IllConditioned : public ConsistencyError {
 public:
  using ConsistencyError::ConsistencyError;
};

class Representation {
 public:
  virtual ~Representation() = default;
  virtual int dim() const = 0;
  // Null for SL2(Z).
  virtual std::shared_ptr<const Subgroup> group() const { return nullptr; }
  // Throws InputError when g is outside group().
  virtual CMat evaluate(const ExactMatrix2& g) const = 0;
  virtual std::string kind() const = 0;

  bool in_group(const ExactMatrix2& g) const;
};

using RepPtr = std::shared_ptr<const Representation>;

// Given on S and T; checks S^4 = 1 and (ST)^3 = S^2 to 1e-10.
class AmbientRep : public Representation {
 public:
  AmbientRep(CMat rho_S, CMat rho_T);
  int dim() const override { return static_cast<int>(S_.rows()); }
  CMat evaluate(const ExactMatrix2& g) const override;
  std::string kind() const override { return "ambient"; }
  const CMat& image_S() const { return S_; }
  const CMat& image_T() const { return T_; }

 private:
  CMat S_, T_, Tinv_;
};

// prod_delta nu(D h D^-1)^{r_delta} with D = diag(delta, 1) on Gamma0(N),
// the character of prod_delta eta(delta tau)^{2 r_delta}. The value is exactly
// exp(2 pi i e / 12) for an integer e.
class EtaCharacter : public Representation {
 public:
  EtaCharacter(long N, std::map<long, long> r);
  int dim() const override { return 1; }
  std::shared_ptr<const Subgroup> group() const override { return H_; }
  CMat evaluate(const ExactMatrix2& g) const override;
  std::string kind() const override { return "eta_character"; }
  int exponent12(const ExactMatrix2& g) const;
  long level() const { return N_; }
  const std::map<long, long>& exponents() const { return r_; }
  // Sum of r_delta.
  long weight() const;

 private:
  long N_;
  std::map<long, long> r_;
  std::shared_ptr<const Subgroup> H_;
};

class TensorRep : public Representation {
 public:
  TensorRep(RepPtr a, RepPtr b);
  int dim() const override { return a_->dim() * b_->dim(); }
  std::shared_ptr<const Subgroup> group() const override;
  CMat evaluate(const ExactMatrix2& g) const override;
  std::string kind() const override { return "tensor"; }
  const RepPtr& left() const { return a_; }
  const RepPtr& right() const { return b_; }

 private:
  RepPtr a_, b_;
};

class DirectSumRep : public Representation {
 public:
  DirectSumRep(RepPtr a, RepPtr b);
  int dim() const override { return a_->dim() + b_->dim(); }
  std::shared_ptr<const Subgroup> group() const override;
  CMat evaluate(const ExactMatrix2& g) const override;
  std::string kind() const override { return "direct_sum"; }
  const RepPtr& left() const { return a_; }
  const RepPtr& right() const { return b_; }

 private:
  RepPtr a_, b_;
};

// An ambient representation restricted to a subgroup.
class RestrictedRep : public Representation {
 public:
  RestrictedRep(RepPtr base, std::shared_ptr<const Subgroup> H);
  int dim() const override { return base_->dim(); }
  std::shared_ptr<const Subgroup> group() const override { return H_; }
  CMat evaluate(const ExactMatrix2& g) const override;
  std::string kind() const override { return "restriction"; }
  const RepPtr& base() const { return base_; }

 private:
  RepPtr base_;
  std::shared_ptr<const Subgroup> H_;
};

// Representation of a coset-table subgroup given on its Schreier generators
// s(c, x) = rep(x c)^-1 x rep(c), x in {S, T}, where rep(c) are the
// breadth-first words of schreier_transversal. Tree edges are the identity.
// Construction checks the rewritten relators S^4 and (ST)^3 S^2 from every
// coset.
class CosetTableRep : public Representation {
 public:
  CosetTableRep(std::shared_ptr<const Subgroup> H, int dim,
                std::map<std::pair<int, char>, CMat> generator_images);
  int dim() const override { return dim_; }
  std::shared_ptr<const Subgroup> group() const override { return H_; }
  CMat evaluate(const ExactMatrix2& g) const override;
  std::string kind() const override { return "coset_table_rep"; }
  const std::map<std::pair<int, char>, CMat>& generator_images() const { return images_; }

 private:
  // rho(rep(c_out)^-1 w rep(c)) for the word w, returning c_out as well.
  CMat walk(const GeneratorWord& w, int& coset) const;
  std::shared_ptr<const Subgroup> H_;
  int dim_;
  std::map<std::pair<int, char>, CMat> images_;
};

struct Transversal {
  std::vector<ExactMatrix2> reps;
  // tree[c] = true when s(c, x) is a tree edge; indexed [coset][0 = S, 1 = T].
  std::vector<std::array<bool, 2>> tree;
};

Transversal schreier_transversal(const CosetTable& t);
ExactMatrix2 schreier_generator(const CosetTable& t, const Transversal& tr, int coset, char gen);

RepPtr identity_rep();          // gamma -> gamma on SL2(Z)
RepPtr nu_power(long k);        // nu^k, nu the eta^2 multiplier
RepPtr trivial_rep(int m = 1);

struct UnitaryExponent {
  std::optional<Rational> exact;  // set when the exponent is recognised as p/q
  double value = 0;               // in [0, 1)
};

// Best rational with denominator <= max_den within tol of x, mod 1.
std::optional<Rational> snap_rational(double x, long max_den = 1000, double tol = 1e-9);
UnitaryExponent exponent_of(cplx lambda);

struct JordanEigen {
  cplx lambda;
  UnitaryExponent mu;
  std::vector<int> sizes;  // descending
};

struct JordanSpec {
  std::vector<JordanEigen> eigen;  // ascending mu
  CMat P, J;                       // M = P J P^-1, J upper Jordan form

  int multiplicity(std::size_t k) const;
  bool diagonalizable() const;
};

struct JordanTolerances {
  double unit_circle = 1e-6;
  double cluster_radius = 1e-3;
  double rank_cutoff = 1e-9;
  double reconstruct = 1e-9;
};

JordanSpec jordan_analyze(const CMat& M, const JordanTolerances& tol = {});

enum class RepClass { Admissible, Logarithmic };
RepClass classify(const Representation& rho, const std::vector<ExactMatrix2>& parabolic_gens);

// Least alpha on the grid with ||rho(g)|| <= C ||g||^alpha for all samples,
// C fitted as the largest ratio over the smallest fifth of the samples.
double norm_growth_probe(const std::vector<double>& element_norms,
                         const std::vector<double>& image_norms, double alpha_step = 0.01,
                         double alpha_max = 4.0);

// Operator 2-norm.
double op_norm(const CMat& M);

}  // namespace vvlift
