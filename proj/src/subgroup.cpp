#include "vvlift/subgroup.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <regex>

namespace vvlift {

namespace {

long mod_n(const Rational& x, long N) {
  Integer r;
  Integer n(N);
  mpz_fdiv_r(r.get_mpz_t(), x.get_num_mpz_t(), n.get_mpz_t());
  return r.get_si();
}

std::vector<long> prime_factors(long N) {
  std::vector<long> ps;
  for (long p = 2; p * p <= N; ++p) {
    if (N % p == 0) {
      ps.push_back(p);
      while (N % p == 0) N /= p;
    }
  }
  if (N > 1) ps.push_back(N);
  return ps;
}

void check_level(long N) {
  if (N < 1 || N > 64) throw InputError("level must be in [1, 64], got " + std::to_string(N));
}

int apply_power(const std::vector<int>& sigma, int x, long p) {
  int len = 1;
  for (int y = sigma[x]; y != x; y = sigma[y]) ++len;
  long e = ((p % len) + len) % len;
  for (long i = 0; i < e; ++i) x = sigma[x];
  return x;
}

}  // namespace

Subgroup Subgroup::full() { return Subgroup(); }

Subgroup Subgroup::gamma0(long N) {
  check_level(N);
  Subgroup H;
  H.family_ = N == 1 ? Family::Full : Family::Gamma0;
  H.N_ = N;
  long idx = N;
  for (long p : prime_factors(N)) idx = idx / p * (p + 1);
  H.index_ = idx;
  H.label_ = N == 1 ? "SL2Z" : "Gamma0(" + std::to_string(N) + ")";
  return H;
}

Subgroup Subgroup::gamma1(long N) {
  check_level(N);
  if (N <= 2) {
    Subgroup H = gamma0(N);
    if (N == 2) H.label_ = "Gamma1(2)";
    return H;
  }
  Subgroup H;
  H.family_ = Family::Gamma1;
  H.N_ = N;
  long idx = N * N;
  for (long p : prime_factors(N)) idx = idx / (p * p) * (p * p - 1);
  H.index_ = idx / 2;
  H.label_ = "Gamma1(" + std::to_string(N) + ")";
  return H;
}

Subgroup Subgroup::gamma(long N) {
  check_level(N);
  if (N == 1) return full();
  Subgroup H;
  H.family_ = Family::Gamma;
  H.N_ = N;
  long idx = N * N * N;
  for (long p : prime_factors(N)) idx = idx / (p * p) * (p * p - 1);
  H.index_ = N == 2 ? 6 : idx / 2;
  H.label_ = "Gamma(" + std::to_string(N) + ")";
  return H;
}

Subgroup Subgroup::from_table(CosetTable table, std::string label) {
  const std::size_t d = table.sigma_S.size();
  if (d == 0 || table.sigma_T.size() != d) throw InputError("coset table sizes differ or are empty");
  auto is_perm = [d](const std::vector<int>& s) {
    std::vector<bool> seen(d, false);
    for (int x : s) {
      if (x < 0 || static_cast<std::size_t>(x) >= d || seen[x]) return false;
      seen[x] = true;
    }
    return true;
  };
  if (!is_perm(table.sigma_S) || !is_perm(table.sigma_T))
    throw InputError("coset table entries are not permutations");
  for (std::size_t x = 0; x < d; ++x) {
    if (table.sigma_S[table.sigma_S[x]] != static_cast<int>(x))
      throw InputError("coset table violates S^2 = 1");
    int y = static_cast<int>(x);
    for (int k = 0; k < 3; ++k) y = table.sigma_S[table.sigma_T[y]];
    if (y != static_cast<int>(x)) throw InputError("coset table violates (ST)^3 = 1");
  }
  std::vector<bool> seen(d, false);
  std::deque<int> q{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int y : {table.sigma_S[x], table.sigma_T[x]}) {
      if (!seen[y]) {
        seen[y] = true;
        ++count;
        q.push_back(y);
      }
    }
  }
  if (count != d) throw InputError("coset table is not transitive");
  Subgroup H;
  H.family_ = Family::Table;
  H.N_ = 0;
  H.index_ = static_cast<long>(d);
  H.label_ = std::move(label);
  H.table_ = std::move(table);
  return H;
}

Subgroup Subgroup::parse(const std::string& label) {
  if (label == "SL2Z" || label == "SL2(Z)") return full();
  static const std::regex re(R"(^(Gamma0|Gamma1|Gamma)\((\d{1,3})\)$)");
  std::smatch m;
  if (!std::regex_match(label, m, re)) throw InputError("unknown subgroup label '" + label + "'");
  long N = std::stol(m[2]);
  if (m[1] == "Gamma0") return gamma0(N);
  if (m[1] == "Gamma1") return gamma1(N);
  return gamma(N);
}

Subgroup::Key Subgroup::coset_key(const ExactMatrix2& g) const {
  if (!g.is_integral()) throw InputError("coset key of a non-integral matrix: " + to_string(g));
  switch (family_) {
    case Family::Full: return {};
    case Family::Gamma0: {
      long a = mod_n(g.a(), N_), c = mod_n(g.c(), N_);
      Key best{N_, N_};
      for (long u = 1; u < N_; ++u) {
        if (std::gcd(u, N_) != 1) continue;
        Key k{a * u % N_, c * u % N_};
        best = std::min(best, k);
      }
      return best;
    }
    case Family::Gamma1: {
      long a = mod_n(g.a(), N_), c = mod_n(g.c(), N_);
      return std::min(Key{a, c}, Key{(N_ - a) % N_, (N_ - c) % N_});
    }
    case Family::Gamma: {
      Key k{mod_n(g.a(), N_), mod_n(g.b(), N_), mod_n(g.c(), N_), mod_n(g.d(), N_)};
      Key m;
      for (long x : k) m.push_back((N_ - x) % N_);
      return std::min(k, m);
    }
    case Family::Table: {
      const auto& t = *table_;
      GeneratorWord w = word_decompose(g);
      int x = 0;
      for (auto it = w.tokens.rbegin(); it != w.tokens.rend(); ++it) {
        if (it->gen == Gen::S) {
          if (it->power % 2 != 0) x = t.sigma_S[x];
        } else {
          x = apply_power(t.sigma_T, x, it->power);
        }
      }
      return {x};
    }
  }
  return {};
}

bool Subgroup::contains(const ExactMatrix2& g) const {
  if (!g.is_integral()) return false;
  return coset_key(g) == coset_key(ExactMatrix2::identity());
}

std::vector<ExactMatrix2> enumerate_cosets(const Subgroup& H, long bound) {
  if (bound <= 0) bound = H.index();
  std::vector<ExactMatrix2> reps{ExactMatrix2::identity()};
  std::map<Subgroup::Key, long> seen{{H.coset_key(reps[0]), 0}};
  const ExactMatrix2 gens[3] = {ExactMatrix2::S(), ExactMatrix2::T(1), ExactMatrix2::T(-1)};
  for (std::size_t head = 0; head < reps.size(); ++head) {
    for (const auto& s : gens) {
      ExactMatrix2 n = s * reps[head];
      auto key = H.coset_key(n);
      if (seen.count(key)) continue;
      seen.emplace(std::move(key), static_cast<long>(reps.size()));
      reps.push_back(n);
      if (static_cast<long>(reps.size()) > bound)
        throw ConsistencyError("coset closure for " + H.label() + " exceeds bound " +
                               std::to_string(bound));
    }
  }
  if (static_cast<long>(reps.size()) != H.index())
    throw ConsistencyError("coset closure for " + H.label() + " found " +
                           std::to_string(reps.size()) + " cosets, index is " +
                           std::to_string(H.index()));
  return reps;
}

CuspData ambient_cusp_data(const ExtendedPoint& cusp) {
  CuspData cd;
  cd.cusp = cusp;
  cd.width = 1;
  cd.scaling = canonical_scaling(cusp);
  cd.stabilizer = cd.scaling * ExactMatrix2::T(1) * cd.scaling.inverse();
  ExactMatrix2 U = cd.scaling.inverse() * standard_scaling(cusp);
  cd.standard_width = cd.width / (U.a() * U.a());
  return cd;
}

AffineConstants affine_constants(const ExactMatrix2& A, const ExactMatrix2& A_ci) {
  ExactMatrix2 U = A.inverse() * A_ci;
  if (U.c() != 0)
    throw ConsistencyError("A^-1 A_ci is not upper triangular: " + to_string(U));
  return {U.a() * U.a(), U.b() * U.a()};
}

long LiftPlan::coset_of(const ExactMatrix2& x) const {
  auto it = lookup_.find(H->coset_key(x));
  if (it == lookup_.end()) throw ConsistencyError("element " + to_string(x) + " hits no coset");
  return it->second;
}

LiftPlan cusp_orbits(const Subgroup& H, const ExtendedPoint& ambient_cusp) {
  LiftPlan plan;
  plan.H = std::make_shared<const Subgroup>(H);
  plan.ambient = ambient_cusp_data(ambient_cusp);
  const ExactMatrix2& Ac = plan.ambient.scaling;
  const ExactMatrix2& tc = plan.ambient.stabilizer;

  std::vector<ExactMatrix2> cosets = enumerate_cosets(H);
  const long d = static_cast<long>(cosets.size());
  plan.d = d;
  std::map<Subgroup::Key, long> index;
  for (long r = 0; r < d; ++r) index[H.coset_key(cosets[r])] = r;

  // Cycles of t_c on the left cosets are the H-classes of cusps under c.
  std::vector<long> cycle(d, -1), cycle_len;
  for (long r = 0; r < d; ++r) {
    if (cycle[r] >= 0) continue;
    long id = static_cast<long>(cycle_len.size()), len = 0;
    for (long x = r; cycle[x] < 0; x = index.at(H.coset_key(tc * cosets[x]))) {
      cycle[x] = id;
      ++len;
    }
    cycle_len.push_back(len);
  }

  long w = 1;
  while (!H.contains(ExactMatrix2::T(w))) {
    if (++w > d) throw ConsistencyError("no power T^w with w <= d lies in " + H.label());
  }

  std::vector<bool> taken(cycle_len.size(), false);
  long covered = 0;
  auto try_cusp = [&](const ExtendedPoint& x) {
    ExactMatrix2 X = canonical_scaling(x);
    long id = cycle[index.at(H.coset_key(Ac * X.inverse()))];
    if (taken[id]) return;
    taken[id] = true;
    covered += cycle_len[id];

    PlanEntry e;
    e.h = cycle_len[id];
    e.B = X;
    e.A = X * Ac.inverse();
    e.t = e.A * tc.pow(e.h) * e.A.inverse();
    if (!H.contains(e.t)) throw ConsistencyError("t_i not in subgroup at " + to_string(x));
    if (e.t != X * ExactMatrix2::T(e.h) * X.inverse())
      throw ConsistencyError("t_i differs from the conjugated translation at " + to_string(x));
    for (long hp = 1; hp < e.h; ++hp)
      if (H.contains(X * ExactMatrix2::T(hp) * X.inverse()))
        throw ConsistencyError("width at " + to_string(x) + " is not minimal");
    e.cusp.cusp = x;
    e.cusp.width = e.h;
    e.cusp.scaling = X;
    e.cusp.stabilizer = e.t;
    ExactMatrix2 Std = standard_scaling(x);
    AffineConstants ac = affine_constants(X, Std);
    e.cusp.standard_width = Rational(e.h) / ac.a2;
    e.a2 = ac.a2;
    e.alpha_a = ac.alpha_a;
    ExactMatrix2 Ainv = e.A.inverse();
    const ExactMatrix2 tch = tc.pow(e.h);
    for (long j = 0; j < e.h; ++j) {
      ExactMatrix2 g = tc.pow(j) * Ainv;
      if (g * e.t * g.inverse() != tch)
        throw ConsistencyError("conjugation identity fails at " + to_string(x));
      // Affine form of A_c^-1 g_{i,j} at three sample points.
      ExactMatrix2 lhs = Ac.inverse() * g, sinv = Std.inverse();
      for (cplx tau : {cplx(0.3, 1.1), cplx(-1.7, 0.6), cplx(2.2, 3.5)}) {
        cplx l = mobius_apply(lhs, tau);
        cplx r = ac.a2.get_d() * mobius_apply(sinv, tau) + double(j) + ac.alpha_a.get_d();
        if (std::abs(l - r) > 1e-12 * std::max(1.0, std::abs(l)))
          throw ConsistencyError("affine constants fail the three-point check at " + to_string(x));
      }
      e.g.push_back(std::move(g));
    }
    plan.entries.push_back(std::move(e));
  };

  try_cusp(ExtendedPoint::infinity());
  for (long q = 1; covered < d; ++q) {
    if (q > 100000) throw ConsistencyError("cusp search did not cover all cosets");
    for (long p = 0; p < q * w && covered < d; ++p)
      if (std::gcd(p, q) == 1) try_cusp(ExtendedPoint::cusp(ratio(p, q)));
  }

  long sum = 0;
  for (const auto& e : plan.entries) {
    plan.offsets.push_back(static_cast<long>(plan.reps.size()));
    for (const auto& g : e.g) {
      auto key = H.coset_key(g);
      if (plan.lookup_.count(key)) throw ConsistencyError("two representatives share a coset");
      plan.lookup_[key] = static_cast<long>(plan.reps.size());
      plan.reps.push_back(g);
    }
    sum += e.h;
  }
  if (sum != d) throw ConsistencyError("relative widths do not sum to the index");
  return plan;
}

long lcm_power_into_subgroup(const LiftPlan& plan) {
  double dd = std::pow(double(plan.d), double(plan.d));
  long limit = dd > 1e7 ? 10000000L : static_cast<long>(dd);
  limit = std::max(limit, 1L);
  const ExactMatrix2& tc = plan.ambient.stabilizer;
  ExactMatrix2 tn = tc;
  for (long n = 1; n <= limit; ++n, tn = tn * tc) {
    bool ok = true;
    for (const auto& g : plan.reps) {
      if (!plan.H->contains(g.inverse() * tn * g)) {
        ok = false;
        break;
      }
    }
    if (ok) return n;
  }
  throw ConsistencyError("no power of t_c up to d^d conjugates into the subgroup");
}

}  // namespace vvlift
