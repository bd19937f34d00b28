#pragma once

#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "vvlift/rational.hpp"
#include "vvlift/sl2.hpp"

namespace vvlift {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

struct ChannelKey {
  Rational mu;     // in [0, 1)
  int logpow = 0;  // power of log q~
  bool operator<(const ChannelKey& o) const {
    return mu != o.mu ? mu < o.mu : logpow < o.logpow;
  }
  bool operator==(const ChannelKey& o) const { return mu == o.mu && logpow == o.logpow; }
};

// Dense run of coefficients; coeffs[k] belongs to q~^(mu + nmin + k).
struct Channel {
  long nmin = 0;
  std::vector<CVec> coeffs;
  long nend() const { return nmin + static_cast<long>(coeffs.size()); }
};

// sum over channels of (log q~)^j q~^(mu + n) c[mu, j, n] with
// q~ = exp(2 pi i tau / period) and log q~ = 2 pi i tau / period.
// Every term with exponent mu + n below valid_through is present (absent
// entries are zero); nothing is known at or above it.
class LogQSeries {
 public:
  Rational period{1};
  int dim = 1;
  Rational valid_through{0};
  std::map<ChannelKey, Channel> channels;

  LogQSeries() = default;
  LogQSeries(int dim, Rational period, Rational valid_through);
  static LogQSeries constant(const CVec& v, const Rational& valid_through,
                             const Rational& period = 1);

  // Adds c to the coefficient of (log q~)^logpow q~^exponent. Terms at or
  // above valid_through are dropped.
  void add_term(const Rational& exponent, int logpow, const CVec& c);
  // Zero when absent; TruncationError when mu + n >= valid_through.
  CVec coefficient(const Rational& mu, int logpow, long n) const;

  // Smallest exponent carrying a coefficient above zero_tol in max norm.
  std::optional<Rational> order(double zero_tol = 0) const;
  int max_logpow() const;
  // Exponents mu + n of nonzero terms, as channel classes.
  std::vector<ChannelKey> channel_keys(double zero_tol = 0) const;
  LogQSeries truncated(const Rational& bound) const;
  // Drops all-zero channels and trailing zeros.
  void compact();
  // Largest coefficient difference over the common valid range; the
  // periods must agree.
  double max_difference(const LogQSeries& o) const;
};

LogQSeries series_add(const LogQSeries& a, const LogQSeries& b);
LogQSeries series_scale(const LogQSeries& a, cplx s);
// Applies M to every coefficient vector.
LogQSeries apply_matrix(const CMat& M, const LogQSeries& a);
// One factor must be scalar (dim 1) unless both are. The period of a is kept.
LogQSeries series_multiply(const LogQSeries& a, const LogQSeries& b, bool parallel = true);
LogQSeries relabel_period(const LogQSeries& a, const Rational& new_period);
// The series of tau -> f(tau - s).
LogQSeries shift_argument(const LogQSeries& a, const Rational& s);

struct SeriesValue {
  CVec value;
  // Size of the last retained term class relative to the total.
  double tail_ratio = 0;
  bool tail_warning = false;
};
SeriesValue evaluate_at(const LogQSeries& a, cplx tau);

struct ScalarForm {
  LogQSeries series;            // dim 1, period 1
  int weight2 = 0;              // twice the weight
  Rational leading;             // exponent of the first term
  std::vector<Integer> integer_coeffs;  // exact coefficients of the product part
  cplx multiplier_S, multiplier_T;
};

// eta^e for even e, terms q^(e/24 + n) for 0 <= n <= N.
ScalarForm eta_power_series(long e, long N);

// Coefficients of prod (1 - q^n) through q^N from the pentagonal number theorem.
std::vector<Integer> euler_product_coeffs(long N);
// f^e for integer power series f with f[0] = 1, through index N.
std::vector<Integer> power_series_pow(const std::vector<Integer>& f, long e, long N);

// (X|_k A)(tau) for X = prod eta(delta tau)^(2 r_delta), A integral of det 1,
// with k = sum r_delta. Period 1, terms below valid_through.
LogQSeries eta_quotient_at(const std::map<long, long>& r, const ExactMatrix2& A, long N);
// Direct evaluation of the same eta quotient at tau by truncated products.
cplx eta_quotient_direct(const std::map<long, long>& r, cplx tau);
// eta(tau) by its product formula with the given number of factors.
cplx eta_direct(cplx tau, int factors = 400);

}  // namespace vvlift
