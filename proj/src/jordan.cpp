#include <algorithm>
#include <cmath>
#include <numeric>

#include "vvlift/rep.hpp"

namespace vvlift {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Orthonormal basis of the numerical null space of A.
CMat null_space(const CMat& A, double cutoff) {
  Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff * scale) ++rank;
  return svd.matrixV().rightCols(A.cols() - rank);
}

// Orthonormal basis for the columns of W (numerical rank).
CMat orth(const CMat& W) {
  if (W.cols() == 0) return W;
  Eigen::JacobiSVD<CMat> svd(W, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > 1e-10 * std::max(1.0, s(0))) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace

std::optional<Rational> snap_rational(double x, long max_den, double tol) {
  x -= std::floor(x);
  for (long q = 1; q <= max_den; ++q) {
    double p = std::round(x * q);
    if (std::abs(x - p / q) < tol) {
      Rational r(static_cast<long>(p), q);
      r.canonicalize();
      return frac_of(r);
    }
  }
  return std::nullopt;
}

UnitaryExponent exponent_of(cplx lambda) {
  UnitaryExponent u;
  double t = std::arg(lambda) / kTwoPi;
  t -= std::floor(t);
  if (t >= 1.0) t = 0;
  u.exact = snap_rational(t);
  u.value = u.exact ? u.exact->get_d() : t;
  return u;
}

int JordanSpec::multiplicity(std::size_t k) const {
  return std::accumulate(eigen[k].sizes.begin(), eigen[k].sizes.end(), 0);
}

bool JordanSpec::diagonalizable() const {
  for (const auto& e : eigen)
    for (int s : e.sizes)
      if (s > 1) return false;
  return true;
}

JordanSpec jordan_analyze(const CMat& M, const JordanTolerances& tol) {
  const Eigen::Index n = M.rows();
  if (n == 0 || M.cols() != n) throw InputError("jordan_analyze needs a nonempty square matrix");
  Eigen::ComplexEigenSolver<CMat> es(M, false);
  if (es.info() != Eigen::Success) throw IllConditioned("eigenvalue iteration did not converge");
  const CVec ev = es.eigenvalues();

  // Single-linkage clustering. Defective eigenvalues split by roughly
  // eps^(1/s), far more than the rank tolerance, hence the loose radius.
  std::vector<Eigen::Index> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(ev(i) - ev(j)) < tol.cluster_radius) parent[find(i)] = find(j);
  std::map<Eigen::Index, std::vector<Eigen::Index>> clusters;
  for (Eigen::Index i = 0; i < n; ++i) clusters[find(i)].push_back(i);

  struct Cluster {
    cplx center;
    UnitaryExponent mu;
    int mult;
  };
  std::vector<Cluster> cl;
  for (const auto& [root, members] : clusters) {
    (void)root;
    cplx mean = 0;
    for (auto i : members) mean += ev(i);
    mean /= double(members.size());
    // The cluster mean is accurate even when the members of a defective
    // eigenvalue are not.
    if (std::abs(std::abs(mean) - 1.0) > tol.unit_circle)
      throw NonUnitaryEigenvalue("eigenvalue of modulus " + std::to_string(std::abs(mean)) +
                                 " is off the unit circle");
    Cluster c;
    c.mu = exponent_of(mean / std::abs(mean));
    c.center = c.mu.exact ? std::polar(1.0, kTwoPi * c.mu.exact->get_d()) : mean / std::abs(mean);
    c.mult = static_cast<int>(members.size());
    cl.push_back(c);
  }
  std::sort(cl.begin(), cl.end(),
            [](const Cluster& a, const Cluster& b) { return a.mu.value < b.mu.value; });

  JordanSpec spec;
  spec.P = CMat::Zero(n, n);
  spec.J = CMat::Zero(n, n);
  Eigen::Index col = 0;
  const CMat I = CMat::Identity(n, n);
  for (const auto& c : cl) {
    const CMat K = M - c.center * I;
    // Nullities of K^p until they reach the algebraic multiplicity.
    std::vector<CMat> kernels{CMat(n, 0)};
    CMat Kp = I;
    while (kernels.back().cols() < c.mult) {
      if (static_cast<int>(kernels.size()) > c.mult)
        throw IllConditioned("kernel dimensions never reach the multiplicity " +
                             std::to_string(c.mult));
      Kp = Kp * K;
      kernels.push_back(null_space(Kp, tol.rank_cutoff));
    }
    if (kernels.back().cols() != c.mult)
      throw IllConditioned("kernel dimension overshoots the multiplicity");
    const int smax = static_cast<int>(kernels.size()) - 1;
    std::vector<int> atleast(smax + 2, 0);
    for (int p = 1; p <= smax; ++p)
      atleast[p] = static_cast<int>(kernels[p].cols() - kernels[p - 1].cols());
    for (int p = 1; p < smax; ++p)
      if (atleast[p] < atleast[p + 1]) throw IllConditioned("inconsistent rank sequence");

    JordanEigen je;
    je.lambda = c.center;
    je.mu = c.mu;
    // Chains [K^{s-1} y, ..., K y, y], longest first.
    std::vector<CVec> tops;
    std::vector<int> top_len;
    for (int s = smax; s >= 1; --s) {
      const int count = atleast[s] - atleast[s + 1];
      if (count == 0) continue;
      CMat W = kernels[s - 1];
      for (std::size_t k = 0; k < tops.size(); ++k) {
        CVec v = tops[k];
        for (int e = 0; e < top_len[k] - s; ++e) v = K * v;
        W.conservativeResize(n, W.cols() + 1);
        W.col(W.cols() - 1) = v;
      }
      CMat Q = orth(W);
      CMat cand = kernels[s];
      if (Q.cols()) cand -= Q * (Q.adjoint() * cand);
      Eigen::JacobiSVD<CMat> svd(cand, Eigen::ComputeThinU);
      if (svd.singularValues().size() < count ||
          svd.singularValues()(count - 1) < 1e-8 * std::max(1.0, svd.singularValues()(0)))
        throw IllConditioned("cannot extend Jordan chains of length " + std::to_string(s));
      for (int k = 0; k < count; ++k) {
        CVec y = svd.matrixU().col(k);
        tops.push_back(y);
        top_len.push_back(s);
        je.sizes.push_back(s);
        std::vector<CVec> chain(s);
        chain[s - 1] = y;
        for (int e = s - 2; e >= 0; --e) chain[e] = K * chain[e + 1];
        for (int e = 0; e < s; ++e) {
          spec.P.col(col + e) = chain[e];
          spec.J(col + e, col + e) = c.center;
          if (e > 0) spec.J(col + e - 1, col + e) = 1.0;
        }
        col += s;
      }
    }
    if (std::accumulate(je.sizes.begin(), je.sizes.end(), 0) != c.mult)
      throw IllConditioned("block sizes do not add up to the multiplicity");
    spec.eigen.push_back(std::move(je));
  }
  if (col != n) throw IllConditioned("Jordan basis is incomplete");
  Eigen::FullPivLU<CMat> lu(spec.P);
  if (!lu.isInvertible()) throw IllConditioned("Jordan basis is singular");
  const CMat R = spec.P * spec.J * lu.inverse();
  if ((R - M).norm() > tol.reconstruct * std::max(1.0, M.norm()))
    throw IllConditioned("P J P^-1 misses M by " + std::to_string((R - M).norm()));
  return spec;
}

}  // namespace vvlift
