#include <doctest.h>

#include "wildquot/base_ring.hpp"
#include "wildquot/errors.hpp"
#include "wildquot/series.hpp"

using namespace wildquot;

namespace {
RingHandle z2sqrt2(int M = 6) { return BaseRing::truncated_dvr(2, M, {-2, 0, 1}); }
}  // namespace

TEST_CASE("context enumerates monomials by degree") {
  auto R = BaseRing::finite_field(3);
  auto ctx = SeriesContext::make(R, {"x", "y"}, 3);
  CHECK(ctx->size() == 10);
  CHECK(ctx->exponents(0) == std::vector<int>{0, 0});
  CHECK(ctx->degree(9) == 3);
  for (int i = 0; i < ctx->size(); ++i)
    CHECK(ctx->index_of(ctx->exponents(i)) == i);
  CHECK(ctx->index_of({4, 0}) == -1);
  int ix = ctx->index_of({1, 0});
  int iy = ctx->index_of({0, 1});
  CHECK(ctx->prod_index(ix, iy) == ctx->index_of({1, 1}));
  /* overflow beyond the truncation */
  int ixy2 = ctx->index_of({1, 2});
  CHECK(ctx->prod_index(ix, ixy2) == -1);
  CHECK(ctx->var_index("y") == 1);
  CHECK(ctx->var_index("z") == -1);
  CHECK(ctx->dim() == 2);
  CHECK(SeriesContext::make(z2sqrt2(), {"x"}, 4)->dim() == 2);
  CHECK_THROWS_AS(SeriesContext::make(R, {"x", "x"}, 3), Error);
  CHECK_THROWS_AS(SeriesContext::make(R, {"u"}, 3), Error);
}

TEST_CASE("series arithmetic over a field") {
  auto R = BaseRing::finite_field(3);
  auto ctx = SeriesContext::make(R, {"x"}, 5);
  Series x = Series::variable(ctx, 0);
  Series f = Series::one(ctx) + x;
  Series g = Series::one(ctx) - x;
  Series h = f * g;
  CHECK(h.equal(Series::one(ctx) - x.pow(2)));
  /* geometric series */
  Series gi = g.inv();
  Series expect = Series::zero(ctx);
  for (int k = 0; k <= 5; ++k) expect = expect + x.pow(k);
  CHECK(gi.equal(expect));
  CHECK((g * gi).equal(Series::one(ctx)));
  CHECK_THROWS_AS((void)x.inv(), NotAUnit);
  CHECK(x.low_degree() == 1);
  CHECK(Series::zero(ctx).low_degree() == 6);
  CHECK(Series::zero(ctx).is_zero());
}

TEST_CASE("valid degree bookkeeping") {
  auto R = BaseRing::finite_field(5);
  auto ctx = SeriesContext::make(R, {"x"}, 5);
  Series x = Series::variable(ctx, 0);
  Series a = x;
  a.set_valid_deg(2);
  Series b = a * x; /* trusted to min(5, 2+1, 5+1) = 3 */
  CHECK(b.valid_deg() == 3);
  Series c = dvar(x.pow(3), 0);
  CHECK(c.valid_deg() == 4);
  CHECK(c.equal(x.pow(2).scaled_int(3)));
  /* equality only inspects the joint trusted range */
  Series d = x.pow(2);
  Series e = x.pow(2) + x.pow(5);
  d.set_valid_deg(4);
  CHECK(d.equal(e));
  CHECK(e.homogeneous_part(5).equal(x.pow(5)));
}

TEST_CASE("entire flag: exact polynomials vs unknown tails") {
  auto R = BaseRing::finite_field(5);
  auto ctx = SeriesContext::make(R, {"x"}, 4);
  Series x = Series::variable(ctx, 0);

  /* constructors build exact polynomials; arithmetic keeps exactness
   * while nothing spills past the truncation */
  CHECK(Series::zero(ctx).entire());
  CHECK(Series::one(ctx).entire());
  CHECK((x + x.pow(2)).entire());
  CHECK((x.pow(2) * x.pow(2)).entire());
  /* x^3 * x^2 overflows degree 4: the stored product is missing x^5 */
  CHECK_FALSE((x.pow(3) * x.pow(2)).entire());
  /* lowering valid_deg discards coefficients: tail no longer known */
  Series a = x;
  a.set_valid_deg(2);
  CHECK_FALSE(a.entire());
  /* truncating at or below the trusted degree makes an exact polynomial
   * again, trusted at every degree */
  Series b = a.truncate_above(1);
  CHECK(b.entire());
  CHECK(b.valid_deg() == 4);
  /* a unit's inverse is exact only for constants */
  CHECK(Series::from_int(ctx, 2).inv().entire());
  CHECK_FALSE((Series::one(ctx) + x).inv().entire());
  /* restriction keeps exactness only when nothing nonzero is cut off */
  auto coarse = ctx->with_truncation(2);
  CHECK((x + x.pow(2)).restricted(coarse).entire());
  CHECK_FALSE((x + x.pow(3)).restricted(coarse).entire());
  /* the flag can be waived but never reasserted by arithmetic */
  Series c = x;
  c.clear_entire();
  CHECK_FALSE((c + x).entire());
}

TEST_CASE("substitution matches a hand-computed binomial") {
  auto R = z2sqrt2();
  auto ctx = SeriesContext::make(R, {"x"}, 4);
  Series x = Series::variable(ctx, 0);
  Series u = Series::uniformizer(ctx);
  Series f = x.pow(2);
  Series image = x + u;
  Series got = subst(f, {image});
  /* (x + u)^2 = 2 + 2u x + x^2 */
  CHECK(R->equal(got.coeff({0}), R->from_int(2)));
  CHECK(R->equal(got.coeff({1}), R->mul_int(R->uniformizer(), 2)));
  CHECK(R->equal(got.coeff({2}), R->one()));
  CHECK(got.equal(image * image));
  /* f is an exact polynomial (entire), so no truncation-tail allowance is
   * needed: coefficients keep full precision */
  CHECK(f.entire());
  CHECK(got.coeff({0}).prec == R->cap());
  CHECK(got.coeff({2}).prec == R->cap());
  /* an unknown tail above valid_deg changes that: an image with constant
   * term of valuation c leaves degree-t coefficients certified only mod
   * u^{c(N+1-t)} */
  Series f2 = x.pow(2);
  f2.clear_entire();
  Series got2 = subst(f2, {image});
  CHECK(got2.coeff({0}).prec == 5);
  CHECK(got2.coeff({1}).prec == 4);
  CHECK(got2.coeff({2}).prec == 3);
  /* an image whose constant term is a unit escapes the maximal ideal */
  CHECK_THROWS_AS((void)subst(f, {x + Series::one(ctx)}),
                  SubstitutionEscapesMaximalIdeal);
}

TEST_CASE("substitution with a coefficient automorphism") {
  auto R = z2sqrt2();
  auto sigma = DvrAutomorphism::make(R, R->neg(R->uniformizer()), 2);
  auto ctx = SeriesContext::make(R, {"x"}, 3);
  Series x = Series::variable(ctx, 0);
  Series u = Series::uniformizer(ctx);
  Series f = u * x; /* sqrt2 * x */
  Series got = subst(f, {x}, sigma);
  CHECK(got.equal(-(u * x)));
}

TEST_CASE("map inversion recovers the reversion of x + x^2") {
  auto R = BaseRing::finite_field(101);
  auto ctx = SeriesContext::make(R, {"x"}, 6);
  Series x = Series::variable(ctx, 0);
  std::vector<Series> F = {x + x.pow(2)};
  auto G = invert_map(F);
  REQUIRE(G.size() == 1);
  /* reversion: x - x^2 + 2x^3 - 5x^4 + 14x^5 - 42x^6 (Catalan numbers) */
  Series expect = x - x.pow(2) + x.pow(3).scaled_int(2) - x.pow(4).scaled_int(5) +
                  x.pow(5).scaled_int(14) - x.pow(6).scaled_int(42);
  CHECK(G[0].equal(expect));
  CHECK(subst(F[0], G).equal(x));
  CHECK(subst(G[0], F).equal(x));
}

TEST_CASE("map inversion in two variables over a DVR") {
  auto R = z2sqrt2(4);
  auto ctx = SeriesContext::make(R, {"x", "y"}, 5);
  Series x = Series::variable(ctx, 0), y = Series::variable(ctx, 1);
  Series u = Series::uniformizer(ctx);
  std::vector<Series> F = {x + y.pow(2), y + u * x * x};
  auto G = invert_map(F);
  CHECK(subst(F[0], G).equal(x));
  CHECK(subst(F[1], G).equal(y));
  CHECK(subst(G[0], F).equal(x));
  CHECK(subst(G[1], F).equal(y));
  /* a map with non-unit Jacobian is rejected */
  CHECK_THROWS_AS(invert_map({x * u + y, y * u + x.pow(2)}), NotAUnit);
}

TEST_CASE("pi-adic context in the base-uniformizer shape") {
  auto R = z2sqrt2();
  auto ctx = SeriesContext::make(R, {"x"}, 4);
  Series x = Series::variable(ctx, 0);
  Series u = Series::uniformizer(ctx);

  SUBCASE("pi = u") {
    auto P = PiAdicContext::make(ctx, u);
    CHECK(P.shape() == PiShape::BaseUniformizer);
    CHECK(P.residue_char() == 2);
    CHECK(P.bar()->base()->is_field());
    Series f = x.scaled(R->from_int(-2));
    CHECK(P.pival(f) == Valuation::exactly(2));
    /* [-2x]_u = x over F_2 */
    Series br = P.bracket(f);
    CHECK(br.equal(Series::variable(P.bar(), 0)));
    CHECK(P.pival(Series::zero(ctx)) == Valuation::at_least(12));
    /* divide then remultiply */
    Series dv = P.divide(f, 2);
    CHECK((dv * u * u).equal(f));
    CHECK_THROWS_AS((void)P.divide(x, 1), PrecisionLoss);
    /* reduce/lift round trip */
    Series fb = P.reduce(Series::one(ctx) + x + u * x);
    CHECK(P.reduce(P.lift(fb)).equal(fb));
  }

  SUBCASE("pi = u * (1 + x)") {
    auto P = PiAdicContext::make(ctx, u * (Series::one(ctx) + x));
    CHECK(P.shape() == PiShape::BaseUniformizer);
    Series f = x.scaled(R->from_int(6));
    CHECK(P.pival(f) == Valuation::exactly(2));
    Series dv = P.divide(f, 2);
    CHECK((dv * P.pi() * P.pi()).equal(f));
    /* reduction is taken after removing the unit part */
    Series br = P.bracket(u.pow(3));
    CHECK_FALSE(br.is_zero());
  }

  SUBCASE("rejected parameters") {
    CHECK_THROWS_AS(PiAdicContext::make(ctx, u + x.pow(2)), NotRegularParameter);
    CHECK_THROWS_AS(PiAdicContext::make(ctx, u * u), NotRegularParameter);
    CHECK_THROWS_AS(PiAdicContext::make(ctx, Series::one(ctx) + x), NotRegularParameter);
    CHECK_THROWS_AS(PiAdicContext::make(ctx, x.scaled(R->from_int(2))), NotRegularParameter);
  }
}

TEST_CASE("pi-adic context in the variable shape") {
  auto F3 = BaseRing::finite_field(3);
  auto ctx = SeriesContext::make(F3, {"x", "y"}, 5);
  Series x = Series::variable(ctx, 0), y = Series::variable(ctx, 1);

  SUBCASE("pi = y, the trivial change") {
    auto P = PiAdicContext::make(ctx, y);
    CHECK(P.shape() == PiShape::VariableCoord);
    CHECK(P.var() == 1);
    CHECK(P.residue_char() == 3);
    CHECK(P.bar()->vars() == std::vector<std::string>{"x"});
    CHECK(P.pival(x.pow(2) * y.pow(3)) == Valuation::exactly(3));
    CHECK(P.pival(x) == Valuation::exactly(0));
    Series xb = Series::variable(P.bar(), 0);
    CHECK(P.reduce(x + y * x.pow(4)).equal(xb));
    CHECK(P.divide(y.pow(2) * x, 2).equal(x));
    CHECK(P.bracket(x.pow(2) * y.pow(3)).equal(xb.pow(2)));
    CHECK(P.reduce(P.lift(xb.pow(3))).equal(xb.pow(3)));
  }

  SUBCASE("pi = y + x^2 via a coordinate change") {
    auto P = PiAdicContext::make(ctx, y + x.pow(2));
    CHECK(P.shape() == PiShape::VariableCoord);
    CHECK(P.pival(y + x.pow(2)) == Valuation::exactly(1));
    CHECK(P.bracket(y + x.pow(2)).equal(Series::one(P.bar())));
    Series xb = Series::variable(P.bar(), 0);
    CHECK(P.reduce(y).equal(-xb.pow(2)));
    /* dividing pi^2 * f by pi^2 returns f mod higher pi-terms */
    Series f = P.pi().pow(2) * x;
    CHECK(P.divide(f, 2).equal(x * Series::one(ctx)));
  }

  SUBCASE("pi = x over an unramified DVR") {
    auto Z2 = BaseRing::truncated_dvr(2, 6, {-2, 1});
    auto c1 = SeriesContext::make(Z2, {"x"}, 4);
    Series xx = Series::variable(c1, 0);
    auto P = PiAdicContext::make(c1, xx);
    CHECK(P.shape() == PiShape::VariableCoord);
    CHECK(P.residue_char() == 0); /* tame direction sees characteristic zero */
    CHECK(P.bar()->nvars() == 0);
    CHECK(P.pival(xx + Series::from_int(c1, 2)) == Valuation::exactly(0));
    CHECK(P.pival(xx.pow(2).scaled(Z2->from_int(6))) == Valuation::exactly(2));
    CHECK(P.reduce(xx + Series::from_int(c1, 2))
              .equal(Series::from_int(P.bar(), 2)));
    /* a parameter mixing the variable with base terms has no certifiable
     * pi-adic readings on the truncated model */
    CHECK_THROWS_AS(PiAdicContext::make(c1, xx + Series::from_int(c1, 2)),
                    NotRegularParameter);
  }

  SUBCASE("pi = y + x^2 with a coefficient-shifted variable is accepted") {
    auto Z2 = BaseRing::truncated_dvr(2, 5, {-2, 1});
    auto c2 = SeriesContext::make(Z2, {"x", "y"}, 4);
    Series xx = Series::variable(c2, 0), yy = Series::variable(c2, 1);
    /* unit linear coefficient 1 + 2 on y, zero constant term */
    auto P = PiAdicContext::make(c2, yy.scaled(Z2->from_int(3)) + xx.pow(2));
    CHECK(P.shape() == PiShape::VariableCoord);
    CHECK(P.pival(yy.scaled(Z2->from_int(3)) + xx.pow(2)) == Valuation::exactly(1));
    Series xb = Series::variable(P.bar(), 0);
    /* y = 3^{-1}(pi - x^2), so y reduces to -3^{-1} x^2 = -11 x^2 mod 32 */
    Series red = P.reduce(yy);
    Series expect = xb.pow(2).scaled(Z2->inv(Z2->from_int(-3)));
    CHECK(red.equal(expect));
  }
}
