#include <doctest.h>

#include "wildquot/base_ring.hpp"
#include "wildquot/errors.hpp"
#include "wildquot/zmod.hpp"

using namespace wildquot;

namespace {
RingHandle z2sqrt2(int M = 6) { return BaseRing::truncated_dvr(2, M, {-2, 0, 1}); }
}  // namespace

TEST_CASE("scalar helpers mod p^M") {
  CHECK(zmod::is_prime(2));
  CHECK(zmod::is_prime(97));
  CHECK_FALSE(zmod::is_prime(1));
  CHECK_FALSE(zmod::is_prime(91)); /* 7*13 */
  CHECK(zmod::pow_checked(2, 20) == 1048576);
  CHECK_THROWS_AS((void)zmod::pow_checked(2, 63), Error);
  CHECK(zmod::valp(12, 2, 10) == 2);
  CHECK(zmod::valp(0, 2, 10) == 10);
  i64 q = zmod::pow_checked(3, 5);
  CHECK(zmod::mul(zmod::inv(7, q), 7, q) == 1);
  CHECK_THROWS_AS((void)zmod::inv(3, q), NotAUnit);
}

TEST_CASE("ring construction validates input") {
  CHECK_THROWS_AS(BaseRing::truncated_dvr(4, 3, {-2, 0, 1}), NotPrime);
  /* constant term must have p-valuation exactly 1 */
  CHECK_THROWS_AS(BaseRing::truncated_dvr(2, 3, {-4, 0, 1}), NotEisenstein);
  CHECK_THROWS_AS(BaseRing::truncated_dvr(2, 3, {-3, 0, 1}), NotEisenstein);
  /* middle coefficients divisible by p */
  CHECK_THROWS_AS(BaseRing::truncated_dvr(2, 3, {2, 1, 1}), NotEisenstein);
  CHECK_THROWS_AS(BaseRing::truncated_dvr(2, 3, {-2, 0, 2}), NotEisenstein);
  CHECK_NOTHROW(BaseRing::truncated_dvr(2, 3, {-6, 0, 1}));
  CHECK_NOTHROW(BaseRing::truncated_dvr(2, 3, {2, 2, 1}));
  CHECK_NOTHROW(BaseRing::truncated_dvr(3, 4, {3, 0, -3, 1}));
  CHECK_THROWS_AS(BaseRing::finite_field(6), NotPrime);
}

TEST_CASE("valuations in Z2[sqrt2]") {
  auto R = z2sqrt2();
  CHECK(R->cap() == 12);
  auto u = R->uniformizer();
  CHECK(R->val(u) == Valuation::exactly(1));
  CHECK(R->val(R->from_int(2)) == Valuation::exactly(2));
  CHECK(R->val(R->from_int(12)) == Valuation::exactly(4));
  CHECK(R->val(R->from_coords({2, 1})) == Valuation::exactly(1));
  CHECK(R->val(R->zero()) == Valuation::at_least(12));
  CHECK(R->val(R->one()) == Valuation::exactly(0));
  CHECK(R->is_unit(R->from_coords({1, 1})));
  CHECK_FALSE(R->is_unit(u));
  /* u^2 = 2 exactly */
  CHECK(R->equal(R->mul(u, u), R->from_int(2)));
}

TEST_CASE("valuation in an unramified DVR") {
  auto R = BaseRing::truncated_dvr(2, 8, {-2, 1}); /* Z/2^8, u = 2 */
  CHECK(R->cap() == 8);
  CHECK(R->val(R->from_int(12)) == Valuation::exactly(2));
  CHECK(R->equal(R->uniformizer(), R->from_int(2)));
}

TEST_CASE("arithmetic and inverses") {
  auto R = z2sqrt2();
  auto u = R->uniformizer();
  auto a = R->add(R->one(), u); /* 1 + sqrt2 */
  auto ai = R->inv(a);
  CHECK(R->equal(R->mul(a, ai), R->one()));
  /* (1+sqrt2)^{-1} = -1+sqrt2: check exact coordinates */
  CHECK(R->equal(ai, R->from_coords({-1, 1})));
  CHECK_THROWS_AS((void)R->inv(u), NotAUnit);
  /* inversion preserves precision */
  RElem b = R->from_coords({1, 2});
  b.prec = 5;
  CHECK(R->inv(b).prec == 5);
  /* pow */
  CHECK(R->equal(R->pow(u, 6), R->from_int(8)));
}

TEST_CASE("multiplication precision rule") {
  auto R = z2sqrt2();
  RElem x = R->uniformizer();
  x.prec = 3;
  RElem y = R->mul(x, x);
  /* prec = min(cap, v(x) + prec(x), v(x) + prec(x)) = 4 */
  CHECK(y.prec == 4);
  CHECK(R->val(y) == Valuation::exactly(2));
  /* adding keeps the min precision */
  RElem s = R->add(x, R->one());
  CHECK(s.prec == 3);
}

TEST_CASE("shift_down divides by the uniformizer") {
  auto R = z2sqrt2();
  auto u = R->uniformizer();
  CHECK(R->equal(R->shift_down(u, 1), R->one()));
  /* 2 / sqrt2 = sqrt2 */
  CHECK(R->equal(R->shift_down(R->from_int(2), 1), u));
  /* 2 + sqrt2 = sqrt2 * (1 + sqrt2) */
  CHECK(R->equal(R->shift_down(R->from_coords({2, 1}), 1), R->from_coords({1, 1})));
  /* each shift costs one unit of precision */
  CHECK(R->shift_down(R->from_int(2), 2).prec == R->cap() - 2);
  CHECK_THROWS_AS((void)R->shift_down(R->one(), 1), PrecisionLoss);
  RElem z = R->zero();
  z.prec = 2;
  CHECK_THROWS_AS((void)R->shift_down(z, 3), PrecisionLoss);
  /* quartic Eisenstein ring: u^4 = 2(1 + 2u - u^2 + 2u^3)-ish sanity */
  auto Q = BaseRing::truncated_dvr(2, 5, {-2, -4, 2, 4, 1});
  auto w = Q->uniformizer();
  auto w4 = Q->pow(w, 4);
  CHECK(Q->val(w4) == Valuation::exactly(4));
  CHECK(Q->equal(Q->shift_down(Q->mul(w4, w4), 8), Q->one()));
}

TEST_CASE("residue field maps") {
  auto R = z2sqrt2();
  auto k = R->residue_ring();
  CHECK(k->is_field());
  CHECK(k->p() == 2);
  auto r = R->residue(R->from_coords({3, 1}));
  CHECK(k->equal(r, k->one()));
  CHECK(k->is_zero(R->residue(R->from_int(2))));
  CHECK(R->equal(R->lift(k->one()), R->one()));
  RElem noinfo = R->one();
  noinfo.prec = 0;
  CHECK_THROWS_AS((void)R->residue(noinfo), PrecisionLoss);
}

TEST_CASE("finite field extensions and frobenius") {
  auto F4 = BaseRing::finite_field(2, 2);
  CHECK(F4->coeff_len() == 2);
  /* the generator w satisfies an irreducible quadratic; w^4 = w */
  RElem w = F4->from_coords({0, 1});
  CHECK(F4->equal(F4->frobenius(F4->frobenius(w)), w));
  CHECK_FALSE(F4->equal(F4->frobenius(w), w));
  CHECK(F4->equal(F4->mul(w, F4->inv(w)), F4->one()));
  auto F9 = BaseRing::finite_field(3, 2);
  for (i64 a0 = 0; a0 < 3; ++a0)
    for (i64 a1 = 0; a1 < 3; ++a1) {
      RElem x = F9->from_coords({a0, a1});
      CHECK(F9->equal(F9->pow(x, 9), x)); /* x^q = x */
      CHECK(F9->equal(F9->frobenius(x), F9->pow(x, 3)));
    }
  /* frobenius is additive */
  RElem a = F9->from_coords({1, 2}), b = F9->from_coords({2, 2});
  CHECK(F9->equal(F9->frobenius(F9->add(a, b)),
                  F9->add(F9->frobenius(a), F9->frobenius(b))));
}

TEST_CASE("order-p coefficient automorphisms") {
  auto R = z2sqrt2();
  auto u = R->uniformizer();
  auto sigma = DvrAutomorphism::make(R, R->neg(u), 2);
  CHECK(sigma.verified());
  CHECK(sigma.order() == 2);
  CHECK_FALSE(sigma.is_identity());
  CHECK(R->equal(sigma.apply(u), R->neg(u)));
  CHECK(R->equal(sigma.apply(R->from_int(7)), R->from_int(7)));
  CHECK(R->equal(sigma.apply_iter(u, 2), u));
  auto id = DvrAutomorphism::identity(R);
  CHECK(id.is_identity());
  CHECK(R->equal(id.apply(u), u));

  SUBCASE("trace and norm") {
    auto [t1, n1] = sigma.trace_norm(u);
    CHECK(R->is_zero(t1));
    CHECK(R->equal(n1, R->from_int(-2)));
    auto [t2, n2] = sigma.trace_norm(R->add(R->one(), u));
    CHECK(R->equal(t2, R->from_int(2)));
    CHECK(R->equal(n2, R->from_int(-1)));
  }

  SUBCASE("non-automorphisms are rejected") {
    CHECK_THROWS_AS(DvrAutomorphism::make(R, R->from_int(2), 2), NotOrderP);
    CHECK_THROWS_AS(DvrAutomorphism::make(R, u, 2), NotOrderP);
    /* u + 2 has valuation-1 image but sigma^2 != id */
    CHECK_THROWS_AS(DvrAutomorphism::make(R, R->add(u, R->from_int(2)), 2),
                    NotOrderP);
  }
}

TEST_CASE("order-2 automorphism of the quartic presentation") {
  /* E = T^4 + 4T^3 + 2T^2 - 4T - 2; sigma(pi) = -pi - 2 generates the
   * subfield fixed data used elsewhere; here just verify the order */
  auto R = BaseRing::truncated_dvr(2, 6, {-2, -4, 2, 4, 1});
  auto pi = R->uniformizer();
  auto img = R->sub(R->neg(pi), R->from_int(2));
  auto sigma = DvrAutomorphism::make(R, img, 2);
  CHECK(sigma.verified());
  /* sqrt2 = 2 - 3pi^2 - pi^3 is multiplied by -1 */
  auto s = R->from_coords({2, 0, -3, -1});
  CHECK(R->equal(R->mul(s, s), R->from_int(2)));
  CHECK(R->equal(sigma.apply(s), R->neg(s)));
}
