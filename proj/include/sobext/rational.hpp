#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace sobext {

using Rational = mpq_class;

/// Input that fails validation (bad file, bad flag, malformed number).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural property that must hold by construction did not hold.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// 2^e for any integer e, exactly.
Rational pow2(long e);

/// Parses "p/q", an integer, or a plain decimal such as "-0.125" or "3e-4".
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when q == 1).
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

// Exact: every finite double is a dyadic rational.
Rational from_double(double value);

inline Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

}  // namespace sobext
