#ifndef CROWDGAME_RATIONAL_HPP
#define CROWDGAME_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace crowdgame {

using Rational = mpq_class;

// Accepts "p/q", integers and plain decimals ("0.25" -> 1/4). Throws
// std::invalid_argument on anything else or a zero denominator.
Rational parse_rational(std::string_view text);

// Canonical "p/q" form; integers print without a denominator.
std::string to_string(const Rational& r);

// mpq_class(p, q) does not reduce; GMP arithmetic expects reduced operands.
inline Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline int sign(const Rational& r) { return sgn(r); }

}  // namespace crowdgame

#endif
