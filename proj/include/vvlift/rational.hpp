#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vvlift {

// Arbitrary precision; there is no overflow path to guard.
using Rational = mpq_class;
using Integer = mpz_class;

// p / q in lowest terms; the two-argument mpq_class constructor does not
// reduce.
inline Rational ratio(const Integer& p, const Integer& q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

// Always "p/q", including q = 1.
std::string to_string(const Rational& r);
Rational parse_rational(const std::string& s);

Integer floor_of(const Rational& r);
// r - floor(r), in [0, 1).
Rational frac_of(const Rational& r);
bool is_integer(const Rational& r);

// Throws std::overflow_error if the value does not fit.
std::int64_t to_int64(const Integer& z);
std::int64_t to_int64(const Rational& r);

Rational rational_lcm(const Rational& a, const Rational& b);

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vvlift
