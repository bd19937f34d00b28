// Independent reference computations for the tests. None of these call the
// routine they are used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "vvlift/induction.hpp"
#include "vvlift/rational.hpp"
#include "vvlift/sl2.hpp"
#include "vvlift/subgroup.hpp"

namespace oracle {

using vvlift::cplx;
using vvlift::ExactMatrix2;
using vvlift::Integer;
using vvlift::Rational;
using CMat = Eigen::MatrixXcd;

inline ExactMatrix2 letter(int l) {
  switch (l) {
    case 0: return ExactMatrix2::S();
    case 1: return ExactMatrix2::T(1);
    default: return ExactMatrix2::T(-1);
  }
}

inline ExactMatrix2 random_word(std::mt19937& gen, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len), l(0, 2);
  ExactMatrix2 g;
  const int n = len(gen);
  for (int t = 0; t < n; ++t) g = g * letter(l(gen));
  return g;
}

// Coset representatives by closure over words of length <= max_len, with
// two words identified iff g1^-1 g2 is a member.
inline std::vector<ExactMatrix2> closure_cosets(const vvlift::Subgroup& H, int max_len = 12) {
  std::vector<ExactMatrix2> reps{ExactMatrix2()};
  std::vector<ExactMatrix2> frontier{ExactMatrix2()};
  for (int len = 0; len < max_len && !frontier.empty(); ++len) {
    std::vector<ExactMatrix2> next;
    for (const auto& g : frontier)
      for (int l = 0; l < 3; ++l) {
        ExactMatrix2 x = letter(l) * g;
        bool seen = false;
        for (const auto& r : reps)
          if (H.contains(r.inverse() * x)) {
            seen = true;
            break;
          }
        if (!seen) {
          reps.push_back(x);
          next.push_back(x);
        }
      }
    frontier = std::move(next);
  }
  return reps;
}

// Least h > 0 with A T^h A^-1 in H, by direct search.
inline long minimal_width(const vvlift::Subgroup& H, const ExactMatrix2& A, long bound = 1000) {
  for (long h = 1; h <= bound; ++h)
    if (H.contains(A * ExactMatrix2::T(h) * A.inverse())) return h;
  return -1;
}

// prod_{n>=1} (1 - q^n)^24 through q^N by repeated multiplication of
// polynomials; Delta = q * this.
inline std::vector<Integer> delta_by_products(long N) {
  std::vector<Integer> p(N + 1, 0);
  p[0] = 1;
  for (long n = 1; n <= N; ++n)
    for (int rep = 0; rep < 24; ++rep)
      for (long k = N; k >= n; --k) p[k] -= p[k - n];
  return p;
}

// eta(tau) by its theta-series sum_k (-1)^k q^((6k - 1)^2 / 24).
inline cplx eta_theta(cplx tau) {
  const double two_pi = 6.283185307179586476925286766559;
  cplx sum = 0;
  for (long k = -60; k <= 60; ++k) {
    const double e = double((6 * k - 1) * (6 * k - 1)) / 24.0;
    const cplx term = std::exp(cplx(0, two_pi * e) * tau);
    sum += (k % 2 == 0) ? term : -term;
  }
  return sum;
}

// Dense induced matrix straight from the definition: block (r, s) is
// rho(g_r^-1 gamma g_s) when that lies in H'.
inline CMat induced_dense(const vvlift::Representation& rho, const vvlift::LiftPlan& plan,
                          const ExactMatrix2& gamma) {
  const int m = rho.dim();
  const long d = static_cast<long>(plan.reps.size());
  CMat out = CMat::Zero(d * m, d * m);
  for (long r = 0; r < d; ++r)
    for (long s = 0; s < d; ++s) {
      const ExactMatrix2 h = plan.reps[r].inverse() * gamma * plan.reps[s];
      if (plan.H->contains(h)) out.block(r * m, s * m, m, m) = rho.evaluate(h);
    }
  return out;
}

inline long numerical_rank(const CMat& A, double rel = 1e-7) {
  Eigen::JacobiSVD<CMat> svd(A);
  const auto& s = svd.singularValues();
  const double top = std::max(1.0, s.size() ? s(0) : 0.0);
  long r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel * top) ++r;
  return r;
}

// Jordan block sizes at lambda from ranks of (M - lambda)^p: the number of
// blocks of size >= p is rank_{p-1} - rank_p.
inline std::vector<int> jordan_sizes_by_rank(const CMat& M, cplx lambda, double rel = 1e-7) {
  const long n = M.rows();
  const CMat A = M - lambda * CMat::Identity(n, n);
  std::vector<long> rank{n};
  CMat P = CMat::Identity(n, n);
  for (long p = 1; p <= n; ++p) {
    P = P * A;
    rank.push_back(numerical_rank(P, rel));
    if (rank[p] == rank[p - 1]) break;
  }
  std::vector<int> sizes;
  for (std::size_t p = 1; p < rank.size(); ++p) {
    const long at_least_p = rank[p - 1] - rank[p];
    const long at_least_next = p + 1 < rank.size() ? rank[p] - rank[p + 1] : 0;
    for (long t = 0; t < at_least_p - at_least_next; ++t) sizes.push_back(static_cast<int>(p));
  }
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

// Permutation action of S and T on the cosets of H, by membership tests.
inline vvlift::CosetTable coset_table_of(const vvlift::Subgroup& H) {
  const auto cosets = closure_cosets(H);
  vvlift::CosetTable t;
  for (const auto& g : cosets)
    for (int which = 0; which < 2; ++which) {
      const ExactMatrix2 x = (which == 0 ? ExactMatrix2::S() : ExactMatrix2::T()) * g;
      for (std::size_t r = 0; r < cosets.size(); ++r)
        if (H.contains(cosets[r].inverse() * x)) {
          (which == 0 ? t.sigma_S : t.sigma_T).push_back(static_cast<int>(r));
          break;
        }
    }
  return t;
}

// Prescribed images at the cusp generators t_i only. The spectrum of the
// induced t_c depends on nothing else, which is what makes arbitrary Jordan
// data testable.
class CuspImageRep : public vvlift::Representation {
 public:
  CuspImageRep(std::shared_ptr<const vvlift::Subgroup> H, int m,
               std::vector<std::pair<ExactMatrix2, CMat>> images)
      : H_(std::move(H)), m_(m), images_(std::move(images)) {}
  int dim() const override { return m_; }
  std::shared_ptr<const vvlift::Subgroup> group() const override { return H_; }
  CMat evaluate(const ExactMatrix2& g) const override {
    for (const auto& [t, M] : images_)
      if (t == g) return M;
    throw vvlift::InputError("no image prescribed for " + vvlift::to_string(g));
  }
  std::string kind() const override { return "cusp_images"; }

 private:
  std::shared_ptr<const vvlift::Subgroup> H_;
  int m_;
  std::vector<std::pair<ExactMatrix2, CMat>> images_;
};

}  // namespace oracle
