#include "vvlift/rep.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace vvlift {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

CMat mat_pow(const CMat& base_in, long e) {
  CMat out = CMat::Identity(base_in.rows(), base_in.cols());
  CMat base = base_in;
  while (e > 0) {
    if (e & 1) out = out * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return out;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

bool close(const CMat& a, const CMat& b, double tol) {
  return (a - b).norm() <= tol * std::max(1.0, b.norm());
}

std::shared_ptr<const Subgroup> common_group(const RepPtr& a, const RepPtr& b) {
  auto ga = a->group(), gb = b->group();
  if (!ga) return gb;
  if (!gb) return ga;
  if (ga->label() != gb->label())
    throw InputError("representations live on different groups: " + ga->label() + ", " +
                     gb->label());
  return ga;
}

void require(const Representation& r, const ExactMatrix2& g) {
  if (!r.in_group(g)) throw InputError("element " + to_string(g) + " is outside the group");
}

}  // namespace

bool Representation::in_group(const ExactMatrix2& g) const {
  if (!g.is_integral()) return false;
  auto H = group();
  return !H || H->contains(g);
}

AmbientRep::AmbientRep(CMat rho_S, CMat rho_T) : S_(std::move(rho_S)), T_(std::move(rho_T)) {
  if (S_.rows() == 0 || S_.rows() != S_.cols() || T_.rows() != S_.rows() || T_.cols() != S_.cols())
    throw InputError("generator images must be square of equal size");
  const CMat I = CMat::Identity(S_.rows(), S_.cols());
  const CMat S2 = S_ * S_;
  if (!close(S2 * S2, I, 1e-10)) throw InputError("rho(S)^4 is not the identity");
  const CMat ST = S_ * T_;
  if (!close(ST * ST * ST, S2, 1e-10)) throw InputError("(rho(S) rho(T))^3 differs from rho(S)^2");
  Eigen::FullPivLU<CMat> lu(T_);
  if (!lu.isInvertible()) throw InputError("rho(T) is singular");
  Tinv_ = lu.inverse();
}

CMat AmbientRep::evaluate(const ExactMatrix2& g) const {
  require(*this, g);
  GeneratorWord w = word_decompose(g);
  CMat out = CMat::Identity(dim(), dim());
  for (const auto& t : w.tokens) {
    if (t.gen == Gen::S) {
      out = out * mat_pow(S_, ((t.power % 4) + 4) % 4);
    } else {
      out = out * (t.power >= 0 ? mat_pow(T_, t.power) : mat_pow(Tinv_, -t.power));
    }
  }
  if (w.negate) out = out * (S_ * S_);
  return out;
}

EtaCharacter::EtaCharacter(long N, std::map<long, long> r) : N_(N), r_(std::move(r)) {
  for (const auto& [delta, e] : r_) {
    (void)e;
    if (delta < 1 || N_ % delta != 0)
      throw InputError("eta quotient index " + std::to_string(delta) + " does not divide level " +
                       std::to_string(N_));
  }
  H_ = N_ == 1 ? nullptr : std::make_shared<const Subgroup>(Subgroup::gamma0(N_));
}

int EtaCharacter::exponent12(const ExactMatrix2& g) const {
  require(*this, g);
  long e = 0;
  for (const auto& [delta, r] : r_) {
    ExactMatrix2 m(g.a(), g.b() * delta, g.c() / delta, g.d());
    e += (r % 12) * nu_exponent(m);
    e %= 12;
  }
  return static_cast<int>(((e % 12) + 12) % 12);
}

CMat EtaCharacter::evaluate(const ExactMatrix2& g) const {
  CMat out(1, 1);
  out(0, 0) = std::polar(1.0, kTwoPi * exponent12(g) / 12.0);
  return out;
}

long EtaCharacter::weight() const {
  long k = 0;
  for (const auto& [delta, r] : r_) {
    (void)delta;
    k += r;
  }
  return k;
}

TensorRep::TensorRep(RepPtr a, RepPtr b) : a_(std::move(a)), b_(std::move(b)) {
  common_group(a_, b_);
}

std::shared_ptr<const Subgroup> TensorRep::group() const { return common_group(a_, b_); }

CMat TensorRep::evaluate(const ExactMatrix2& g) const {
  require(*this, g);
  return kron(a_->evaluate(g), b_->evaluate(g));
}

DirectSumRep::DirectSumRep(RepPtr a, RepPtr b) : a_(std::move(a)), b_(std::move(b)) {
  common_group(a_, b_);
}

std::shared_ptr<const Subgroup> DirectSumRep::group() const { return common_group(a_, b_); }

CMat DirectSumRep::evaluate(const ExactMatrix2& g) const {
  require(*this, g);
  const int m = a_->dim(), n = b_->dim();
  CMat out = CMat::Zero(m + n, m + n);
  out.topLeftCorner(m, m) = a_->evaluate(g);
  out.bottomRightCorner(n, n) = b_->evaluate(g);
  return out;
}

RestrictedRep::RestrictedRep(RepPtr base, std::shared_ptr<const Subgroup> H)
    : base_(std::move(base)), H_(std::move(H)) {
  if (auto g = base_->group(); g && H_ && g->label() != H_->label())
    throw InputError("restriction is only supported from SL2(Z)");
}

CMat RestrictedRep::evaluate(const ExactMatrix2& g) const {
  require(*this, g);
  return base_->evaluate(g);
}

Transversal schreier_transversal(const CosetTable& t) {
  const int d = static_cast<int>(t.sigma_S.size());
  Transversal tr;
  tr.reps.assign(d, ExactMatrix2::identity());
  tr.tree.assign(d, {false, false});
  std::vector<bool> seen(d, false);
  seen[0] = true;
  std::deque<int> q{0};
  while (!q.empty()) {
    int c = q.front();
    q.pop_front();
    for (int x = 0; x < 2; ++x) {
      int n = x == 0 ? t.sigma_S[c] : t.sigma_T[c];
      if (seen[n]) continue;
      seen[n] = true;
      tr.tree[c][x] = true;
      tr.reps[n] = (x == 0 ? ExactMatrix2::S() : ExactMatrix2::T(1)) * tr.reps[c];
      q.push_back(n);
    }
  }
  return tr;
}

ExactMatrix2 schreier_generator(const CosetTable& t, const Transversal& tr, int coset, char gen) {
  const bool isS = gen == 'S';
  int n = isS ? t.sigma_S[coset] : t.sigma_T[coset];
  ExactMatrix2 x = isS ? ExactMatrix2::S() : ExactMatrix2::T(1);
  return tr.reps[n].inverse() * x * tr.reps[coset];
}

CosetTableRep::CosetTableRep(std::shared_ptr<const Subgroup> H, int dim,
                             std::map<std::pair<int, char>, CMat> generator_images)
    : H_(std::move(H)), dim_(dim), images_(std::move(generator_images)) {
  if (!H_ || !H_->table()) throw InputError("coset_table_rep needs a coset-table subgroup");
  if (dim_ < 1) throw InputError("dimension must be positive");
  const auto& t = *H_->table();
  const int d = static_cast<int>(t.sigma_S.size());
  Transversal tr = schreier_transversal(t);
  const CMat I = CMat::Identity(dim_, dim_);
  for (int c = 0; c < d; ++c) {
    for (int x = 0; x < 2; ++x) {
      std::pair<int, char> key{c, x == 0 ? 'S' : 'T'};
      auto it = images_.find(key);
      if (tr.tree[c][x]) {
        if (it != images_.end() && !close(it->second, I, 1e-12))
          throw InputError("tree generator (" + std::to_string(c) + ", " + key.second +
                           ") must map to the identity");
        images_[key] = I;
      } else if (it == images_.end()) {
        throw InputError("missing image for Schreier generator (" + std::to_string(c) + ", " +
                         key.second + ")");
      } else if (it->second.rows() != dim_ || it->second.cols() != dim_) {
        throw InputError("generator image has the wrong size");
      }
    }
  }
  GeneratorWord s4{{{Gen::S, 4}}, false};
  GeneratorWord st3{{{Gen::S, 1}, {Gen::T, 1}, {Gen::S, 1}, {Gen::T, 1}, {Gen::S, 1}, {Gen::T, 1},
                     {Gen::S, 2}},
                    false};
  for (int c = 0; c < d; ++c) {
    for (const auto* rel : {&s4, &st3}) {
      int cc = c;
      CMat v = walk(*rel, cc);
      if (cc != c || !close(v, I, 1e-10))
        throw InputError("generator images violate a relator at coset " + std::to_string(c));
    }
  }
}

CMat CosetTableRep::walk(const GeneratorWord& w, int& coset) const {
  const auto& t = *H_->table();
  const int d = static_cast<int>(t.sigma_T.size());
  std::vector<int> Tinv(d);
  for (int c = 0; c < d; ++c) Tinv[t.sigma_T[c]] = c;
  CMat acc = CMat::Identity(dim_, dim_);
  int c = coset;
  auto step_S = [&] {
    acc = images_.at({c, 'S'}) * acc;
    c = t.sigma_S[c];
  };
  auto step_T = [&](bool forward) {
    if (forward) {
      acc = images_.at({c, 'T'}) * acc;
      c = t.sigma_T[c];
    } else {
      int prev = Tinv[c];
      acc = images_.at({prev, 'T'}).inverse() * acc;
      c = prev;
    }
  };
  for (auto it = w.tokens.rbegin(); it != w.tokens.rend(); ++it) {
    if (it->gen == Gen::S) {
      long e = ((it->power % 4) + 4) % 4;
      for (long k = 0; k < e; ++k) step_S();
      continue;
    }
    const bool forward = it->power > 0;
    long p = std::labs(it->power);
    int len = 1;
    for (int y = t.sigma_T[c]; y != c; y = t.sigma_T[y]) ++len;
    if (p >= len) {
      // A full loop around the T-cycle returns to c; raise it to a power.
      CMat before = acc;
      acc = CMat::Identity(dim_, dim_);
      for (int k = 0; k < len; ++k) step_T(forward);
      acc = mat_pow(acc, p / len) * before;
      p %= len;
    }
    for (long k = 0; k < p; ++k) step_T(forward);
  }
  if (w.negate) {
    step_S();
    step_S();
  }
  coset = c;
  return acc;
}

CMat CosetTableRep::evaluate(const ExactMatrix2& g) const {
  require(*this, g);
  int c = 0;
  CMat v = walk(word_decompose(g), c);
  if (c != 0) throw ConsistencyError("coset walk did not return to the subgroup");
  return v;
}

RepPtr identity_rep() {
  CMat S(2, 2), T(2, 2);
  S << 0, -1, 1, 0;
  T << 1, 1, 0, 1;
  return std::make_shared<AmbientRep>(S, T);
}

RepPtr nu_power(long k) { return std::make_shared<EtaCharacter>(1, std::map<long, long>{{1, k}}); }

RepPtr trivial_rep(int m) {
  CMat I = CMat::Identity(m, m);
  return std::make_shared<AmbientRep>(I, I);
}

double op_norm(const CMat& M) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<CMat> svd(M);
  return svd.singularValues()(0);
}

RepClass classify(const Representation& rho, const std::vector<ExactMatrix2>& parabolic_gens) {
  for (const auto& t : parabolic_gens) {
    if (!is_parabolic(t).parabolic) throw InputError("element " + to_string(t) + " is not parabolic");
    if (!jordan_analyze(rho.evaluate(t)).diagonalizable()) return RepClass::Logarithmic;
  }
  return RepClass::Admissible;
}

double norm_growth_probe(const std::vector<double>& element_norms,
                         const std::vector<double>& image_norms, double alpha_step,
                         double alpha_max) {
  const std::size_t n = element_norms.size();
  if (n == 0 || image_norms.size() != n) throw InputError("growth probe needs paired samples");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return element_norms[a] < element_norms[b]; });
  const std::size_t fit = std::max<std::size_t>(1, n / 5);
  const long steps = static_cast<long>(std::llround(alpha_max / alpha_step));
  for (long s = 0; s <= steps; ++s) {
    const double alpha = s * alpha_step;
    double logC = -1e300;
    for (std::size_t k = 0; k < fit; ++k) {
      std::size_t i = order[k];
      logC = std::max(logC, std::log(image_norms[i]) - alpha * std::log(element_norms[i]));
    }
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      ok = std::log(image_norms[i]) <= logC + alpha * std::log(element_norms[i]) + 1e-9;
    if (ok) return alpha;
  }
  return alpha_max;
}

}  // namespace vvlift
