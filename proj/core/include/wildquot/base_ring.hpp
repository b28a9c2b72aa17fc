#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wildquot/zmod.hpp"

namespace wildquot {

/* A valuation reading: either an exact value, or the statement
 * "at least `bound`" when the element is indistinguishable from zero
 * below the working precision. */
struct Valuation {
  i64 value = 0;
  bool exact = true;

  static Valuation exactly(i64 v) { return {v, true}; }
  static Valuation at_least(i64 b) { return {b, false}; }
  bool operator==(const Valuation&) const = default;
  /* true when the reading certifies val >= n */
  bool ge(i64 n) const { return value >= n; }
  std::string str() const;
};

/* An element of a BaseRing: `c` holds the coordinates (length e for a
 * truncated DVR in the basis 1, u, ..., u^{e-1}; length r for F_{p^r}),
 * `prec` is the absolute u-adic precision: the element is known as a
 * coset modulo u^prec.  Fresh elements carry the ring's full cap e*M;
 * only divisions by the uniformizer lower it. */
struct RElem {
  std::vector<i64> c;
  int prec = 0;
};

class BaseRing;
using RingHandle = std::shared_ptr<const BaseRing>;

enum class RingKind { FiniteField, TruncatedDvr };

/* Coefficient rings: prime/finite residue fields F_{p^r}, and complete
 * DVRs presented at finite precision as (Z/p^M)[u]/(E(u)) with E
 * Eisenstein of degree e.  Valuations are normalized to val(u) = 1 and
 * val(p) = e; stored coordinates mod p^M pin the element down modulo
 * u^{eM}. */
class BaseRing : public std::enable_shared_from_this<BaseRing> {
 public:
  /* F_{p^r}; for r > 1 a monic irreducible modulus of degree r over F_p
   * is selected deterministically. */
  static RingHandle finite_field(i64 p, int r = 1);
  /* (Z/p^M)[u]/(E); `eisenstein` lists E's coefficients from the
   * constant term up and must be monic of degree >= 1.  Raises NotPrime
   * or NotEisenstein. */
  static RingHandle truncated_dvr(i64 p, int M, std::vector<i64> eisenstein);

  RingKind kind() const { return kind_; }
  bool is_field() const { return kind_ == RingKind::FiniteField; }
  i64 p() const { return p_; }
  int M() const { return M_; }
  int ram_degree() const { return e_; }  /* e; 1 for fields */
  int ext_degree() const { return r_; }  /* r; 1 for DVRs */
  i64 coeff_modulus() const { return q_; }
  int coeff_len() const { return is_field() ? r_ : e_; }
  /* absolute precision cap: e*M for a DVR, 1 for a field */
  int cap() const { return is_field() ? 1 : e_ * M_; }
  const std::vector<i64>& modulus_poly() const { return E_; }
  /* characteristic of the fraction field: 0 in mixed characteristic */
  i64 char_of_fractions() const { return is_field() ? p_ : 0; }
  bool same(const BaseRing& o) const;

  /* ---- element construction ---- */
  RElem zero() const;
  RElem one() const;
  RElem from_int(i64 n) const;
  RElem from_coords(std::vector<i64> c) const;
  RElem uniformizer() const;           /* DVR only */
  RElem uniformizer_pow(i64 k) const;  /* u^k, k >= 0 */

  /* ---- arithmetic (exact at the tracked precision) ---- */
  RElem add(const RElem& a, const RElem& b) const;
  RElem sub(const RElem& a, const RElem& b) const;
  RElem neg(const RElem& a) const;
  RElem mul(const RElem& a, const RElem& b) const;
  RElem mul_int(const RElem& a, i64 n) const;
  RElem pow(const RElem& a, u64 k) const;
  /* inverse of a unit (val = 0); NotAUnit otherwise */
  RElem inv(const RElem& a) const;

  /* ---- valuation and precision ---- */
  Valuation val(const RElem& a) const;
  bool is_zero(const RElem& a) const;  /* at the element's precision */
  bool is_unit(const RElem& a) const;
  bool equal(const RElem& a, const RElem& b) const;  /* at joint precision */
  /* a / u^n for certified val(a) >= n; costs n precision.  PrecisionLoss
   * when the shift cannot be certified or nothing would remain. */
  RElem shift_down(const RElem& a, i64 n) const;

  /* ---- residue field ---- */
  RingHandle residue_ring() const;  /* F_p for a DVR; the field itself */
  RElem residue(const RElem& a) const;
  RElem lift(const RElem& k_elem) const;

  /* ---- field-only ---- */
  RElem frobenius(const RElem& a) const;

  std::string pretty(const RElem& a) const;  /* polynomial in u (or the field generator w) */
  std::string describe() const;

 private:
  BaseRing() = default;

  RingKind kind_ = RingKind::FiniteField;
  i64 p_ = 2;
  int M_ = 1;      /* DVR coefficient precision */
  int e_ = 1;      /* DVR ramification degree */
  int r_ = 1;      /* field extension degree */
  i64 q_ = 2;      /* modulus of stored coordinates: p^M resp. p */
  std::vector<i64> E_;              /* DVR: Eisenstein poly; field r>1: modulus */
  std::vector<std::vector<i64>> red_;  /* DVR: u^{e+k} reduced, k = 0..e-2 */
  i64 E0_over_p_inv_ = 0;           /* inverse of E_0/p mod p^M */
  RingHandle residue_;              /* DVR: F_p */

  int arr_val(const RElem& a) const;  /* valuation of the stored coset */
  RElem div_u_once(const RElem& a) const;
  void check(const RElem& a) const;
};

/* An automorphism of a truncated DVR, determined by the image of u.
 * `make` verifies sigma^p = id (exactly at the precision cap), sigma != id,
 * and val(image) = 1; failures raise NotOrderP. */
class DvrAutomorphism {
 public:
  static DvrAutomorphism identity(RingHandle R);
  static DvrAutomorphism make(RingHandle R, RElem u_image, i64 p);

  const RingHandle& ring() const { return R_; }
  bool is_identity() const { return identity_; }
  i64 order() const { return order_; }
  bool verified() const { return verified_; }
  const RElem& u_image() const { return u_image_; }

  RElem apply(const RElem& x) const;
  RElem apply_iter(const RElem& x, i64 k) const;
  /* (trace, norm) of x over the fixed ring; OrderNotVerified unless the
   * order-p certificate is present. */
  std::pair<RElem, RElem> trace_norm(const RElem& x) const;

 private:
  RingHandle R_;
  RElem u_image_;
  i64 order_ = 1;
  bool identity_ = true;
  bool verified_ = false;
};

}  // namespace wildquot
