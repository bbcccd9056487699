#ifndef BAYAN_RATIONAL_HPP
#define BAYAN_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace bayan {

// All probabilities, weights and beliefs are exact rationals. mpq_class
// keeps values canonical (lowest terms, positive denominator) as long as
// they are built through the helpers below; raw two-argument construction
// does not canonicalize on its own.
using Rational = mpq_class;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BuildError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InconsistentHistory : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational rat(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Exact integer power; exponent may be large (amplification exponents b run
// into the thousands).
Rational rat_pow(const Rational& base, unsigned long exp);

// Parses "num", "-num" or "num/den". In strict mode the input must already
// be in lowest terms with a positive denominator ("3/6" is rejected).
Rational parse_rational(const std::string& text, bool strict = true);

// Canonical serialization: "num" for integers, otherwise "num/den".
std::string rational_str(const Rational& value);

// Short decimal approximation, for display next to the exact value.
std::string rational_approx(const Rational& value);

}  // namespace bayan

#endif
