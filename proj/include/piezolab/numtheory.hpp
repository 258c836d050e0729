#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace piezolab {

using BigInt = boost::multiprecision::cpp_int;

class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RealKind { rational, quadratic, decimal };

// rational: p/q, q > 0, gcd 1
// quadratic: (a + b sqrt(c))/d, c > 0 non-square, b, d != 0
// decimal: the true value lies in [num, num + 1] / 10^digits
struct RealRep {
  RealKind kind = RealKind::rational;
  BigInt p = 0, q = 1;
  BigInt a = 0, b = 0, c = 0, d = 1;
  BigInt num = 0;
  std::size_t digits = 0;
  double value = 0.0;

  static RealRep rational(BigInt p, BigInt q);
  static RealRep quadratic(BigInt a, BigInt b, BigInt c, BigInt d);
  // Keeps at most `precision` fractional digits.
  static RealRep decimal(const std::string& text, std::size_t precision = 256);

  std::string to_string() const;
};

// "p/q", "n", "(a+b√c)/d" (also "sqrt"), or a decimal string.
RealRep parse_real(const std::string& text, std::size_t precision = 256);

struct Convergent {
  BigInt p, q;
};

struct ContinuedFraction {
  std::vector<BigInt> quotients;
  std::vector<Convergent> convergents;
  bool terminated = false;  // finite expansion (rational input)
  bool precision_exhausted = false;
  // Quadratic inputs: quotients[preperiod .. preperiod+period) repeat.
  std::optional<std::size_t> preperiod, period;
};

// Decimal inputs stop at the first quotient the interval does not pin down, or
// once a convergent sits within 10^10 interval widths of the ends.
ContinuedFraction continued_fraction(const RealRep& x, std::size_t depth);

// log10 |x - p/q|, -inf for an exact hit.  Decimals use the interval's lower
// end.
double log10_abs_error(const RealRep& x, const BigInt& p, const BigInt& q);

enum class Verdict {
  rational,
  badly_approximable,
  generic,
  liouville_like,
  undetermined
};
const char* verdict_name(Verdict v);

struct OddApproximation {
  BigInt p, q;
  double error = 0.0;
  double quality = 0.0;  // q^2 |x - p/q|
};

struct OddScan {
  // successive minima of |q x - p| over odd coprime pairs
  std::vector<OddApproximation> records;
  OddApproximation best;  // smallest quality seen
  double witness_C = 0.0;  // largest quality among records
  std::size_t scanned = 0;
  bool early_exit = false;
};

// stop_below > 0 ends the scan once a pair reaches that quality.
OddScan best_odd_approximations(const RealRep& x, std::uint64_t Qmax,
                                double stop_below = 0.0);

struct DiophantineReport {
  RealRep x;
  ContinuedFraction cf;
  std::vector<double> quality;  // q^2 |x - p/q| per convergent
  std::vector<double> log10_quality;
  double exponent_estimate = 0.0;
  Verdict verdict = Verdict::undetermined;
  bool heuristic = false;
  std::size_t depth_reached = 0;
  BigInt max_quotient = 0;
  std::optional<OddScan> odd;
};

DiophantineReport classify(const RealRep& x, std::size_t depth,
                           std::uint64_t Qmax = 0);

// sum_{n=1}^{kmax} base^{-n!} as a decimal, base in {2, 3, 5, 10}.  Exact
// for 2, 5, 10; base 3 is truncated to 2 kmax! + 20 digits.
RealRep liouville_value(unsigned kmax, unsigned base = 10);

BigInt floor_div(const BigInt& a, const BigInt& b);
double log10_big(const BigInt& n);

}  // namespace piezolab
