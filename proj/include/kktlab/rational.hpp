#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace kktlab {

// Exact rational scalar. mpq_class keeps values canonical (reduced,
// positive denominator), which is exactly the invariant we need.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Serialized form: "p/q", or just "p" when the denominator is 1.
inline std::string rat_str(const Rational& q) { return q.get_str(); }

inline Rational rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  for (char c : s)
    if (!(c == '-' || c == '/' || (c >= '0' && c <= '9')))
      throw std::invalid_argument("bad rational literal: " + s);
  Rational q;
  if (q.set_str(s, 10) != 0 || sgn(q.get_den()) <= 0)
    throw std::invalid_argument("bad rational literal: " + s);
  q.canonicalize();
  return q;
}

}  // namespace kktlab
