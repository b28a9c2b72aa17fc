#include <doctest.h>

#include "wildquot/automorphism.hpp"
#include "wildquot/errors.hpp"

using namespace wildquot;

namespace {

struct Fix {
  RingHandle R;
  DvrAutomorphism sig;
  CtxHandle B;
  Series x, u;
  Fix(int M = 6, int N = 6)
      : R(BaseRing::truncated_dvr(2, M, {-2, 0, 1})),
        sig(DvrAutomorphism::make(R, R->neg(R->uniformizer()), 2)),
        B(SeriesContext::make(R, {"x"}, N)),
        x(Series::variable(B, 0)),
        u(Series::uniformizer(B)) {}
};

}  // namespace

TEST_CASE("order verification accepts and rejects") {
  Fix fx;
  /* sigma(x) = -x with trivial coefficient action */
  auto s = LocalAutomorphism::make(fx.B, {-fx.x}, 2);
  CHECK(s.certificate().ok);
  CHECK(s.trivial_on_base());
  CHECK(s.apply(fx.x.pow(3)).equal(-(fx.x.pow(3))));
  CHECK(s.apply_iter(fx.x.pow(3), 2).equal(fx.x.pow(3)));

  /* sigma(x) = x + sqrt2 over sigma_R(u) = -u has order 2 */
  auto t = LocalAutomorphism::make(fx.B, fx.sig, {fx.x + fx.u}, 2);
  CHECK(t.certificate().ok);
  CHECK_FALSE(t.trivial_on_base());
  CHECK(t.apply(fx.x).equal(fx.x + fx.u));
  CHECK(t.apply_iter(fx.x, 2).equal(fx.x));

  /* x + x^2 with trivial base action is not an involution */
  CHECK_THROWS_AS(LocalAutomorphism::make(fx.B, {fx.x + fx.x.pow(2)}, 2),
                  NotOrderP);
  /* the identity is excluded */
  CHECK_THROWS_AS(LocalAutomorphism::make(fx.B, {fx.x}, 2), NotOrderP);
  /* non-prime order */
  CHECK_THROWS_AS(LocalAutomorphism::make(fx.B, {-fx.x}, 4), NotOrderP);
}

TEST_CASE("order three over F_3") {
  auto F3 = BaseRing::finite_field(3);
  auto B = SeriesContext::make(F3, {"x"}, 8);
  Series x = Series::variable(B, 0);
  /* x -> x/(1+x); the k-th iterate is x/(1+kx), so the order is 3 */
  auto s = LocalAutomorphism::make(B, {x * (Series::one(B) + x).inv()}, 3);
  CHECK(s.certificate().ok);
  CHECK(s.apply_iter(x, 3).equal(x));
  CHECK_FALSE(s.apply_iter(x, 2).equal(x));
}

TEST_CASE("I_sigma generators and delta") {
  Fix fx;
  auto Pu = PiAdicContext::make(fx.B, fx.u);

  SUBCASE("sign flip: delta = 2, not pi-power principal") {
    auto s = LocalAutomorphism::make(fx.B, {-fx.x}, 2);
    auto gens = isigma(s);
    REQUIRE(gens.gens.size() == 1);
    CHECK(gens.names[0] == "x");
    CHECK(gens.gens[0].equal(fx.x.scaled(fx.R->from_int(-2))));
    auto rep = autom_delta(s, Pu);
    CHECK(rep.delta == 2);
    CHECK(rep.exact);
    auto pr = principality(s);
    CHECK(pr.kind == PrincipalityCase::NotPrincipal);
    CHECK(pr.nu == Valuation::exactly(2));
    CHECK(pr.sigma_trivial_on_base);
  }

  SUBCASE("translation by sqrt2: Case II with power 1") {
    auto s = LocalAutomorphism::make(fx.B, fx.sig, {fx.x + fx.u}, 2);
    auto gens = isigma(s);
    REQUIRE(gens.gens.size() == 2);
    CHECK(gens.names[1] == "u");
    auto rep = autom_delta(s, Pu);
    CHECK(rep.delta == 1); /* v(sqrt2) = 1 beats v(-2u) = 3 */
    CHECK(rep.exact);
    auto pr = principality(s);
    CHECK(pr.kind == PrincipalityCase::CaseII);
    CHECK(pr.mu == Valuation::exactly(3));
    CHECK(pr.nu == Valuation::exactly(1));
    CHECK(pr.v_a0 == Valuation::exactly(1));
    CHECK(pr.power == 1);
  }

  SUBCASE("scaling by 1 + 4 sqrt2: Case I with power 3") {
    auto w = fx.R->add(fx.R->one(), fx.R->mul_int(fx.R->uniformizer(), 4));
    auto s = scaling_family(fx.B, fx.sig, w);
    CHECK(s.certificate().ok);
    auto pr = principality(s);
    CHECK(pr.kind == PrincipalityCase::CaseI);
    CHECK(pr.mu == Valuation::exactly(3));
    CHECK(pr.nu == Valuation::exactly(7)); /* v(sigma(w)/w - 1) = 7 */
    CHECK(pr.power == 3);
    auto rep = autom_delta(s, Pu);
    CHECK(rep.delta == 3);
  }

  SUBCASE("sigma(x) = -x + 4: the witness triple (3, 2, 4)") {
    auto img = -fx.x + Series::from_int(fx.B, 4);
    auto s = LocalAutomorphism::make(fx.B, fx.sig, {img}, 2);
    auto pr = principality(s);
    CHECK(pr.kind == PrincipalityCase::NotPrincipal);
    CHECK(pr.mu == Valuation::exactly(3));
    CHECK(pr.nu == Valuation::exactly(2));
    CHECK(pr.v_a0 == Valuation::exactly(4));
    auto rep = autom_delta(s, Pu);
    CHECK(rep.delta == 2);
  }
}

TEST_CASE("translation family telescopes to order p") {
  Fix fx;
  /* g = sqrt2: sigma(x) = x - 2 sqrt2 */
  auto s = translation_family(fx.B, fx.sig, fx.R->uniformizer());
  CHECK(s.certificate().ok);
  CHECK(s.apply(fx.x).equal(fx.x - fx.u.scaled_int(2)));
  auto pr = principality(s);
  CHECK(pr.kind == PrincipalityCase::CaseI);
  CHECK(pr.mu == Valuation::exactly(3));
  CHECK(pr.power == 3);
  /* a constant fixed by sigma_R still leaves the coefficient action */
  auto s2 = translation_family(fx.B, fx.sig, fx.R->one());
  CHECK(s2.apply(fx.x).equal(fx.x));
  CHECK_FALSE(s2.trivial_on_base());
  /* with the identity coefficient action the family degenerates */
  CHECK_THROWS_AS(
      translation_family(fx.B, DvrAutomorphism::identity(fx.R), fx.R->uniformizer()),
      NotOrderP);
}

TEST_CASE("conjugation preserves order and delta") {
  Fix fx;
  auto s = LocalAutomorphism::make(fx.B, fx.sig, {fx.x + fx.u}, 2);
  std::vector<Series> phi = {fx.x + fx.x.pow(2)};
  auto t = conjugation(s, phi);
  CHECK(t.certificate().ok);
  CHECK_FALSE(t.apply(fx.x).equal(s.apply(fx.x)));
  auto Pu = PiAdicContext::make(fx.B, fx.u);
  auto rs = autom_delta(s, Pu);
  auto rt = autom_delta(t, Pu);
  CHECK(rs.delta == rt.delta);
  /* the trichotomy readings are also conjugation-stable here */
  auto ps = principality(s);
  auto pt = principality(t);
  CHECK(ps.kind == pt.kind);
}

TEST_CASE("restriction to a coarser truncation") {
  Fix fx(6, 8);
  auto s = LocalAutomorphism::make(fx.B, fx.sig, {fx.x + fx.u}, 2);
  auto coarse = fx.B->with_truncation(5);
  auto t = s.restricted(coarse);
  CHECK(t.certificate().ok);
  CHECK(t.ctx()->N() == 5);
  CHECK(t.apply(Series::variable(coarse, 0))
            .equal(Series::variable(coarse, 0) + Series::uniformizer(coarse)));
}

TEST_CASE("equal characteristic automorphism of F_2[[x,y]]") {
  auto F2 = BaseRing::finite_field(2);
  auto B = SeriesContext::make(F2, {"x", "y"}, 6);
  Series x = Series::variable(B, 0), y = Series::variable(B, 1);
  auto s = LocalAutomorphism::make(B, {x + y, y}, 2);
  CHECK(s.certificate().ok);
  auto gens = isigma(s);
  REQUIRE(gens.gens.size() == 2);
  CHECK(gens.gens[0].equal(y));
  CHECK(gens.gens[1].is_zero());
  auto Py = PiAdicContext::make(B, y);
  auto rep = autom_delta(s, Py);
  CHECK(rep.delta == 1);
  CHECK(rep.exact);
  CHECK(rep.pi_val == Valuation::at_least(7)); /* sigma(pi) = pi */
}
