#pragma once

#include <gmpxx.h>

#include <string>

namespace pacqe {

// Arbitrary-precision integer. Step I multiplies by lcms and coefficients can
// exceed machine range even on small inputs, so everything is bignum.
using Int = mpz_class;

inline int sign(const Int& a) { return sgn(a); }

inline Int abs_int(const Int& a) { return abs(a); }

inline Int gcd_int(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int lcm_int(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// Mathematical remainder in [0, m), m > 0.
inline Int floor_mod(const Int& a, const Int& m) {
  Int r = a % m;
  if (sign(r) < 0) r += m;
  return r;
}

inline bool divides(const Int& d, const Int& a) {
  return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline std::string to_string(const Int& a) { return a.get_str(); }

}  // namespace pacqe
