#pragma once

#include <cstdint>
#include <vector>

#include "wildquot/errors.hpp"

namespace wildquot {

using i64 = std::int64_t;
using u64 = std::uint64_t;

/* Scalar arithmetic in Z/q where q = p^M fits in a signed 64-bit word.
 * All values are kept in the canonical range [0, q). */
namespace zmod {

bool is_prime(i64 p);

/* p^M, with an overflow check (q must stay below 2^62). */
i64 pow_checked(i64 p, int M);

inline i64 norm(i64 a, i64 q) {
  a %= q;
  return a < 0 ? a + q : a;
}
inline i64 add(i64 a, i64 b, i64 q) {
  i64 s = a + b;
  return s >= q ? s - q : s;
}
inline i64 sub(i64 a, i64 b, i64 q) {
  i64 s = a - b;
  return s < 0 ? s + q : s;
}
inline i64 mul(i64 a, i64 b, i64 q) {
  return static_cast<i64>((static_cast<__int128>(a) * b) % q);
}
i64 pow(i64 a, u64 e, i64 q);

/* p-adic valuation of a mod p^M; returns M for a == 0. */
int valp(i64 a, i64 p, int M);

/* Inverse of a unit mod q; NotAUnit if gcd(a, q) != 1. */
i64 inv(i64 a, i64 q);

}  // namespace zmod
}  // namespace wildquot
