#include "wildquot/zmod.hpp"

namespace wildquot::zmod {

bool is_prime(i64 p) {
  if (p < 2) return false;
  for (i64 d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

i64 pow_checked(i64 p, int M) {
  i64 q = 1;
  const i64 limit = i64{1} << 62;
  for (int i = 0; i < M; ++i) {
    if (q > limit / p) throw Error("modulus p^M exceeds the supported 62-bit range");
    q *= p;
  }
  return q;
}

i64 pow(i64 a, u64 e, i64 q) {
  i64 r = 1 % q;
  a = norm(a, q);
  while (e) {
    if (e & 1) r = mul(r, a, q);
    a = mul(a, a, q);
    e >>= 1;
  }
  return r;
}

int valp(i64 a, i64 p, int M) {
  if (a == 0) return M;
  int v = 0;
  while (v < M && a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

i64 inv(i64 a, i64 q) {
  /* extended Euclid; q = p^M, so a is a unit iff p does not divide a */
  i64 r0 = q, r1 = norm(a, q), t0 = 0, t1 = 1;
  while (r1 != 0) {
    i64 k = r0 / r1;
    i64 r2 = r0 - k * r1;
    i64 t2 = t0 - k * t1;
    r0 = r1; r1 = r2;
    t0 = t1; t1 = t2;
  }
  if (r0 != 1) throw NotAUnit("element is not invertible modulo p^M");
  return norm(t0, q);
}

}  // namespace wildquot::zmod
