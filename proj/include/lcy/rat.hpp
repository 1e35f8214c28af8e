#ifndef LCY_RAT_HPP
#define LCY_RAT_HPP

#include <gmpxx.h>
#include <cstdint>
#include <random>
#include <string>

namespace lcy {

// Exact rational coefficients. All arithmetic in the engine is exact;
// nothing in the certification path touches floating point.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat_of(long n) { return Rat(n); }
inline Rat rat_of(long n, long d) { Rat r(n, d); r.canonicalize(); return r; }

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

inline std::string to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

// Uniform rational in [-bound, bound] with small denominator. Deterministic
// given the engine state.
inline Rat random_rat(std::mt19937_64& rng, long bound, long max_den = 1) {
  std::uniform_int_distribution<long> dd(1, max_den);
  long den = max_den == 1 ? 1 : dd(rng);
  std::uniform_int_distribution<long> dn(-bound * den, bound * den);
  Rat r(dn(rng), den);
  r.canonicalize();
  return r;
}

inline Rat random_nonzero_rat(std::mt19937_64& rng, long bound, long max_den = 1) {
  for (;;) {
    Rat r = random_rat(rng, bound, max_den);
    if (!is_zero(r)) return r;
  }
}

}  // namespace lcy

#endif
