#include "vvlift/sl2.hpp"

#include <cmath>

namespace vvlift {

std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw InputError("empty rational");
  Rational r;
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      r = Rational(Integer(s));
    } else {
      Integer num(s.substr(0, slash)), den(s.substr(slash + 1));
      if (den == 0) throw InputError("zero denominator in '" + s + "'");
      r = Rational(num, den);
      r.canonicalize();
    }
  } catch (const std::invalid_argument&) {
    throw InputError("malformed rational '" + s + "'");
  }
  return r;
}

Integer floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Rational frac_of(const Rational& r) { return r - Rational(floor_of(r)); }

bool is_integer(const Rational& r) { return r.get_den() == 1; }

std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer exceeds 64 bits: " + z.get_str());
  return z.get_si();
}

std::int64_t to_int64(const Rational& r) {
  if (!is_integer(r)) throw std::invalid_argument("not an integer: " + to_string(r));
  return to_int64(r.get_num());
}

Rational rational_lcm(const Rational& a, const Rational& b) {
  Integer n, d;
  mpz_lcm(n.get_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
  mpz_gcd(d.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
  Rational r(n, d);
  r.canonicalize();
  return r;
}

ExactMatrix2::ExactMatrix2() : a_(1), b_(0), c_(0), d_(1) {}

ExactMatrix2::ExactMatrix2(Rational a, Rational b, Rational c, Rational d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  if (a_ * d_ - b_ * c_ != 1)
    throw InputError("determinant is not 1: " + to_string(*this));
}

ExactMatrix2::ExactMatrix2(Rational a, Rational b, Rational c, Rational d, Unchecked)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

ExactMatrix2 ExactMatrix2::identity() { return {}; }
ExactMatrix2 ExactMatrix2::S() { return {0, -1, 1, 0, Unchecked{}}; }
ExactMatrix2 ExactMatrix2::T(long n) { return {1, n, 0, 1, Unchecked{}}; }
ExactMatrix2 ExactMatrix2::T(const Rational& x) { return {1, x, 0, 1, Unchecked{}}; }

ExactMatrix2 ExactMatrix2::operator*(const ExactMatrix2& o) const {
  return {a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_, c_ * o.a_ + d_ * o.c_,
          c_ * o.b_ + d_ * o.d_, Unchecked{}};
}

ExactMatrix2 ExactMatrix2::operator-() const { return {-a_, -b_, -c_, -d_, Unchecked{}}; }

ExactMatrix2 ExactMatrix2::inverse() const { return {d_, -b_, -c_, a_, Unchecked{}}; }

ExactMatrix2 ExactMatrix2::pow(long n) const {
  ExactMatrix2 base = n < 0 ? inverse() : *this;
  unsigned long e = n < 0 ? static_cast<unsigned long>(-(n + 1)) + 1 : static_cast<unsigned long>(n);
  ExactMatrix2 out;
  while (e) {
    if (e & 1) out = out * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return out;
}

bool ExactMatrix2::operator==(const ExactMatrix2& o) const {
  return a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && d_ == o.d_;
}

bool ExactMatrix2::is_integral() const {
  return is_integer(a_) && is_integer(b_) && is_integer(c_) && is_integer(d_);
}

bool ExactMatrix2::is_identity() const { return a_ == 1 && b_ == 0 && c_ == 0 && d_ == 1; }
bool ExactMatrix2::is_minus_identity() const {
  return a_ == -1 && b_ == 0 && c_ == 0 && d_ == -1;
}

Eigen::Matrix2cd ExactMatrix2::to_complex() const {
  Eigen::Matrix2cd m;
  m << a_.get_d(), b_.get_d(), c_.get_d(), d_.get_d();
  return m;
}

double ExactMatrix2::norm() const {
  Eigen::Matrix2d m;
  m << a_.get_d(), b_.get_d(), c_.get_d(), d_.get_d();
  // Largest singular value; for det 1 it is the larger root of s^2 - F s + 1.
  double f = m.squaredNorm();
  return std::sqrt((f + std::sqrt(std::max(0.0, f * f - 4.0))) / 2.0);
}

std::string to_string(const ExactMatrix2& g) {
  return "[[" + to_string(g.a()) + ", " + to_string(g.b()) + "], [" + to_string(g.c()) + ", " +
         to_string(g.d()) + "]]";
}

ExtendedPoint ExtendedPoint::interior(cplx z) {
  if (!(z.imag() > 0)) throw InputError("interior point needs Im > 0");
  ExtendedPoint p;
  p.kind = Kind::Interior;
  p.z = z;
  return p;
}

ExtendedPoint ExtendedPoint::cusp(const Rational& x) {
  ExtendedPoint p;
  p.kind = Kind::Cusp;
  p.x = x;
  return p;
}

ExtendedPoint ExtendedPoint::infinity() { return {}; }

bool ExtendedPoint::operator==(const ExtendedPoint& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Infinity: return true;
    case Kind::Cusp: return x == o.x;
    case Kind::Interior: return z == o.z;
  }
  return false;
}

std::string to_string(const ExtendedPoint& p) {
  switch (p.kind) {
    case ExtendedPoint::Kind::Infinity: return "oo";
    case ExtendedPoint::Kind::Cusp: return to_string(p.x);
    case ExtendedPoint::Kind::Interior: {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%.17g%+.17gi", p.z.real(), p.z.imag());
      return buf;
    }
  }
  return "?";
}

ExtendedPoint parse_cusp(const std::string& s) {
  if (s == "oo" || s == "inf" || s == "infinity") return ExtendedPoint::infinity();
  return ExtendedPoint::cusp(parse_rational(s));
}

ExtendedPoint mobius_apply(const ExactMatrix2& g, const ExtendedPoint& p) {
  switch (p.kind) {
    case ExtendedPoint::Kind::Infinity:
      if (g.c() == 0) return ExtendedPoint::infinity();
      return ExtendedPoint::cusp(g.a() / g.c());
    case ExtendedPoint::Kind::Cusp: {
      Rational den = g.c() * p.x + g.d();
      if (den == 0) return ExtendedPoint::infinity();
      return ExtendedPoint::cusp((g.a() * p.x + g.b()) / den);
    }
    case ExtendedPoint::Kind::Interior:
      return ExtendedPoint::interior(mobius_apply(g, p.z));
  }
  return p;
}

cplx mobius_apply(const ExactMatrix2& g, cplx tau) {
  return (g.a().get_d() * tau + g.b().get_d()) / (g.c().get_d() * tau + g.d().get_d());
}

cplx automorphy_factor(const ExactMatrix2& g, cplx tau, int k) {
  cplx j = g.c().get_d() * tau + g.d().get_d();
  cplx base = k < 0 ? 1.0 / j : j;
  unsigned e = static_cast<unsigned>(k < 0 ? -k : k);
  cplx out = 1.0;
  while (e) {
    if (e & 1) out *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return out;
}

ParabolicInfo is_parabolic(const ExactMatrix2& g) {
  if (g.is_identity() || g.is_minus_identity())
    throw InputError("+-I is not classified as parabolic");
  ParabolicInfo info;
  Rational tr = g.trace();
  if (tr != 2 && tr != -2) return info;
  info.parabolic = true;
  if (g.c() == 0) {
    info.fixed_cusp = ExtendedPoint::infinity();
  } else {
    Rational shift = tr == 2 ? Rational(1) : Rational(-1);
    info.fixed_cusp = ExtendedPoint::cusp((g.a() - shift) / g.c());
  }
  return info;
}

ExactMatrix2 GeneratorWord::evaluate() const {
  ExactMatrix2 out;
  for (const auto& t : tokens) {
    if (t.gen == Gen::T) {
      out = out * ExactMatrix2::T(t.power);
    } else {
      long e = ((t.power % 4) + 4) % 4;
      for (long i = 0; i < e; ++i) out = out * ExactMatrix2::S();
    }
  }
  return negate ? -out : out;
}

long GeneratorWord::letter_count() const {
  long n = 0;
  for (const auto& t : tokens) n += t.power < 0 ? -t.power : t.power;
  return n;
}

namespace {

void push_token(std::vector<GeneratorToken>& w, Gen g, long p) {
  if (p == 0) return;
  if (!w.empty() && w.back().gen == g) {
    w.back().power += p;
    if (w.back().power == 0) w.pop_back();
    return;
  }
  w.push_back({g, p});
}

}  // namespace

GeneratorWord word_decompose(const ExactMatrix2& g) {
  if (!g.is_integral()) throw InputError("word_decompose needs an integral matrix: " + to_string(g));
  Integer a = g.a().get_num(), b = g.b().get_num(), c = g.c().get_num(), d = g.d().get_num();
  // Left-multiply by S^-1 T^-q until c = 0; g is then T^q1 S T^q2 S ... times +-T^n.
  GeneratorWord w;
  while (c != 0) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t());
    a -= q * c;
    b -= q * d;
    push_token(w.tokens, Gen::T, to_int64(q));
    push_token(w.tokens, Gen::S, 1);
    // S^-1 [[a, b], [c, d]] = [[c, d], [-a, -b]]
    Integer na = c, nb = d, nc = -a, nd = -b;
    a = na; b = nb; c = nc; d = nd;
  }
  // Now a = d = +-1.
  Integer n = a * b;
  push_token(w.tokens, Gen::T, to_int64(n));
  if (a < 0) push_token(w.tokens, Gen::S, 2);
  return w;
}

int nu_exponent(const ExactMatrix2& g) {
  GeneratorWord w = word_decompose(g);
  long e = 0;
  for (const auto& t : w.tokens) {
    long p = t.power % 12;
    e += t.gen == Gen::S ? 9 * p : p;
    e %= 12;
  }
  if (w.negate) e += 6;
  return static_cast<int>(((e % 12) + 12) % 12);
}

ExactMatrix2 canonical_scaling(const ExtendedPoint& cusp) {
  if (cusp.kind == ExtendedPoint::Kind::Interior) throw InputError("scaling needs a cusp");
  if (cusp.is_infinity()) return ExactMatrix2::identity();
  Integer p = cusp.x.get_num(), q = cusp.x.get_den();
  Integer v;
  if (q == 1) {
    v = 0;
  } else {
    Integer pm = p % q;
    if (pm < 0) pm += q;
    mpz_invert(v.get_mpz_t(), pm.get_mpz_t(), q.get_mpz_t());
  }
  Integer u = (p * v - 1) / q;
  return {Rational(p), Rational(u), Rational(q), Rational(v)};
}

ExactMatrix2 standard_scaling(const ExtendedPoint& cusp) {
  if (cusp.kind == ExtendedPoint::Kind::Interior) throw InputError("scaling needs a cusp");
  if (cusp.is_infinity()) return ExactMatrix2::identity();
  return {cusp.x, -1, 1, 0};
}

}  // namespace vvlift
