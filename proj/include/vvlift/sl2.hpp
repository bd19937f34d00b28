#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vvlift/rational.hpp"

namespace vvlift {

using cplx = std::complex<double>;

// 2x2 rational matrix of determinant one. The determinant is checked on
// construction, so every value of this type is a group element.
class ExactMatrix2 {
 public:
  ExactMatrix2();
  ExactMatrix2(Rational a, Rational b, Rational c, Rational d);

  static ExactMatrix2 identity();
  static ExactMatrix2 S();
  static ExactMatrix2 T(long n = 1);
  static ExactMatrix2 T(const Rational& x);

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Rational& c() const { return c_; }
  const Rational& d() const { return d_; }

  ExactMatrix2 operator*(const ExactMatrix2& o) const;
  ExactMatrix2 operator-() const;
  ExactMatrix2 inverse() const;
  ExactMatrix2 pow(long n) const;
  bool operator==(const ExactMatrix2& o) const;
  bool operator!=(const ExactMatrix2& o) const { return !(*this == o); }

  bool is_integral() const;
  bool is_identity() const;
  bool is_minus_identity() const;
  Rational trace() const { return a_ + d_; }
  Eigen::Matrix2cd to_complex() const;
  // Operator 2-norm of the real matrix.
  double norm() const;

 private:
  struct Unchecked {};
  ExactMatrix2(Rational a, Rational b, Rational c, Rational d, Unchecked);
  Rational a_, b_, c_, d_;
};

std::string to_string(const ExactMatrix2& g);

struct ExtendedPoint {
  enum class Kind { Interior, Cusp, Infinity };
  Kind kind = Kind::Infinity;
  cplx z{};    // Interior
  Rational x;  // Cusp

  static ExtendedPoint interior(cplx z);
  static ExtendedPoint cusp(const Rational& x);
  static ExtendedPoint infinity();

  bool is_infinity() const { return kind == Kind::Infinity; }
  bool is_cusp_point() const { return kind != Kind::Interior; }
  bool operator==(const ExtendedPoint& o) const;
};

std::string to_string(const ExtendedPoint& p);
// "oo" or "p/q".
ExtendedPoint parse_cusp(const std::string& s);

ExtendedPoint mobius_apply(const ExactMatrix2& g, const ExtendedPoint& p);
cplx mobius_apply(const ExactMatrix2& g, cplx tau);

// (c tau + d)^k.
cplx automorphy_factor(const ExactMatrix2& g, cplx tau, int k);

struct ParabolicInfo {
  bool parabolic = false;
  std::optional<ExtendedPoint> fixed_cusp;
};

// Throws InputError on +-I.
ParabolicInfo is_parabolic(const ExactMatrix2& g);

enum class Gen { S, T };

// Runs of generator powers, e.g. {T, 3} is T T T and {S, -1} is S^-1.
struct GeneratorToken {
  Gen gen;
  long power;
  bool operator==(const GeneratorToken& o) const { return gen == o.gen && power == o.power; }
};

struct GeneratorWord {
  std::vector<GeneratorToken> tokens;
  bool negate = false;  // multiply the product by -I

  ExactMatrix2 evaluate() const;
  // Number of single letters after expanding the runs.
  long letter_count() const;
};

// Euclidean decomposition into S and T. A leftover -I is emitted as S S.
GeneratorWord word_decompose(const ExactMatrix2& g);

// Exponent e of nu(g) = exp(2 pi i e / 12), where nu is the multiplier of
// eta^2: nu(S) = -i, nu(T) = exp(pi i / 6).
int nu_exponent(const ExactMatrix2& g);

// Integral matrix [[p, r], [q, s]] with p/q the cusp (lowest terms, q > 0).
// For integer cusps this is [[c, -1], [1, 0]]; for infinity it is I.
ExactMatrix2 canonical_scaling(const ExtendedPoint& cusp);
// [[c, -1], [1, 0]] for finite c, I for infinity; rational in general.
ExactMatrix2 standard_scaling(const ExtendedPoint& cusp);

}  // namespace vvlift
