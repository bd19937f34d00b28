#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vvlift/sl2.hpp"

namespace vvlift {

// Action of S and T on the left cosets g H', coset 0 being H' itself:
// sigma_S[i] is the index of S g_i H'.
struct CosetTable {
  std::vector<int> sigma_S;
  std::vector<int> sigma_T;
};

// Finite-index subgroup H' of SL2(Z). Membership is closed under -I, so H'
// is the full preimage of its image in PSL2(Z) and index() counts cosets of
// that image.
class Subgroup {
 public:
  enum class Family { Full, Gamma0, Gamma1, Gamma, Table };
  using Key = std::vector<long>;

  static Subgroup full();
  static Subgroup gamma0(long N);
  static Subgroup gamma1(long N);
  static Subgroup gamma(long N);
  // Validates S^2 = 1, (ST)^3 = 1 and transitivity.
  static Subgroup from_table(CosetTable table, std::string label = "table");
  // "SL2Z", "Gamma0(N)", "Gamma1(N)", "Gamma(N)" with 1 <= N <= 64.
  static Subgroup parse(const std::string& label);

  Family family() const { return family_; }
  long level() const { return N_; }
  long index() const { return index_; }
  const std::string& label() const { return label_; }
  const std::optional<CosetTable>& table() const { return table_; }

  bool contains(const ExactMatrix2& g) const;
  // key(g1) == key(g2) iff g1^-1 g2 lies in H'.
  Key coset_key(const ExactMatrix2& g) const;

 private:
  Subgroup() = default;
  Family family_ = Family::Full;
  long N_ = 1;
  long index_ = 1;
  std::string label_ = "SL2Z";
  std::optional<CosetTable> table_;
};

// Breadth-first closure under left multiplication by S, T, T^-1. The identity
// coset comes first. Throws ConsistencyError when more than `bound` cosets
// appear or the count differs from the declared index.
std::vector<ExactMatrix2> enumerate_cosets(const Subgroup& H, long bound = 0);

struct CuspData {
  ExtendedPoint cusp;
  Rational width;          // for the integral scaling below
  ExactMatrix2 scaling;    // canonical integral scaling, maps oo to the cusp
  ExactMatrix2 stabilizer; // scaling * T^width * scaling^-1
  Rational standard_width; // width measured with [[c, -1], [1, 0]]
};

CuspData ambient_cusp_data(const ExtendedPoint& cusp);

struct PlanEntry {
  CuspData cusp;         // c_i as a cusp of H
  long h = 1;            // relative width h_i
  ExactMatrix2 A;        // A_i, maps the ambient cusp to c_i
  ExactMatrix2 B;        // A_i * A_c, the integral scaling at c_i
  ExactMatrix2 t;        // t_i = A_i t_c^h A_i^-1, generates the stabilizer in H'
  Rational a2, alpha_a;  // affine constants against standard_scaling(c_i)
  std::vector<ExactMatrix2> g;  // g_{i,j} = t_c^j A_i^-1
};

struct LiftPlan {
  std::shared_ptr<const Subgroup> H;
  CuspData ambient;
  long d = 1;
  std::vector<PlanEntry> entries;
  // Flattened (i, j) order; offsets[i] is the position of g_{i,0}.
  std::vector<ExactMatrix2> reps;
  std::vector<long> offsets;

  // Position r with g_r^-1 x in H'.
  long coset_of(const ExactMatrix2& x) const;

 private:
  friend LiftPlan cusp_orbits(const Subgroup&, const ExtendedPoint&);
  std::map<Subgroup::Key, long> lookup_;
};

// Decomposes the G-orbit of the ambient cusp into H-classes and builds the
// coset representatives. All structural identities are asserted exactly;
// failures raise ConsistencyError.
LiftPlan cusp_orbits(const Subgroup& H, const ExtendedPoint& ambient_cusp);

struct AffineConstants {
  Rational a2;
  Rational alpha_a;
};

// U = A^-1 A_ci = [[a, alpha], [0, 1/a]] gives (a^2, alpha a), so that
// A^-1 tau = a^2 A_ci^-1 tau + alpha a. Rejects non-upper-triangular U.
AffineConstants affine_constants(const ExactMatrix2& A, const ExactMatrix2& A_ci);

// Least n with g^-1 t_c^n g in H' for every representative. Gives up past d^d
// (capped at 10^7).
long lcm_power_into_subgroup(const LiftPlan& plan);

}  // namespace vvlift
