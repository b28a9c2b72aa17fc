#include <doctest.h>

#include <random>

#include "wildquot/linalg.hpp"
#include "wildquot/zmod.hpp"

using namespace wildquot;

TEST_CASE("Howell form is canonical over Z/4") {
  Howell h1({{2, 1}}, 2, 2, 2);
  CHECK(h1.rows() == Mat{{2, 1}, {0, 2}});
  /* (2,3) = 3*(2,1) mod 4 generates the same module */
  Howell h2({{2, 3}}, 2, 2, 2);
  CHECK(h1.same_span(h2));
  CHECK(h1.rows() == h2.rows());
  CHECK(h1.log_size() == 2); /* 4 elements */
  CHECK(h1.contains({2, 1}));
  CHECK(h1.contains({0, 2}));
  CHECK(h1.contains({2, 3}));
  CHECK(h1.contains({0, 0}));
  CHECK_FALSE(h1.contains({1, 0}));
  CHECK_FALSE(h1.contains({0, 1}));
  CHECK_FALSE(h1.same_span(Howell({{1, 0}, {0, 1}}, 2, 2, 2)));
}

TEST_CASE("Howell membership without closure rows") {
  Howell h({{1, 1}}, 2, 2, 2);
  CHECK(h.rows() == Mat{{1, 1}});
  CHECK(h.contains({2, 2}));
  CHECK_FALSE(h.contains({1, 3}));
  CHECK(h.log_size() == 2);
}

TEST_CASE("Howell of the identity") {
  Howell h({{1, 0}, {0, 1}}, 2, 3, 2);
  CHECK(h.log_size() == 6);
  CHECK(h.contains({5, 7}));
}

TEST_CASE("kernel over Z/8") {
  /* 2 v0 + 4 v1 = 0 mod 8 */
  auto gens = kernel_mod_pM({{2, 4}}, 2, 3, 2);
  REQUIRE(gens.size() == 2);
  Mat vs;
  bool saw_full = false, saw_partial = false;
  for (const auto& g : gens) {
    i64 lhs = zmod::norm(2 * g.v[0] + 4 * g.v[1], 8);
    CHECK(lhs == 0);
    if (g.order_exp == 3) saw_full = true;
    if (g.order_exp == 1) saw_partial = true;
    vs.push_back(g.v);
  }
  CHECK(saw_full);
  CHECK(saw_partial);
  Howell hk(vs, 2, 3, 2);
  Howell expect({{6, 1}, {4, 0}}, 2, 3, 2);
  CHECK(hk.same_span(expect));
}

TEST_CASE("kernel of an injective map is trivial") {
  auto gens = kernel_mod_pM({{1, 0}, {0, 3}}, 2, 3, 2);
  CHECK(gens.empty());
}

TEST_CASE("random kernels annihilate and spans are stable") {
  std::mt19937_64 rng(12345);
  const i64 p = 3;
  const int M = 3;
  const i64 q = zmod::pow_checked(p, M);
  for (int trial = 0; trial < 40; ++trial) {
    int m = 1 + static_cast<int>(rng() % 3);
    int n = 1 + static_cast<int>(rng() % 4);
    Mat A(m, Vec(n));
    for (auto& row : A)
      for (auto& x : row) x = static_cast<i64>(rng() % q);
    auto ker = kernel_mod_pM(A, p, M, n);
    for (const auto& g : ker) {
      for (int i = 0; i < m; ++i) {
        i64 acc = 0;
        for (int j = 0; j < n; ++j) acc = zmod::norm(acc + A[i][j] * g.v[j], q);
        CHECK(acc == 0);
      }
      CHECK(g.order_exp >= 1);
      CHECK(g.order_exp <= M);
    }
    /* Howell form does not depend on generator order or unit rescaling */
    Mat gens1, gens2;
    for (const auto& g : ker) gens1.push_back(g.v);
    if (gens1.empty()) continue;
    for (size_t i = gens1.size(); i-- > 0;) {
      Vec w = gens1[i];
      i64 s = 1 + static_cast<i64>(rng() % (p - 1)); /* one unit per row */
      for (auto& x : w) x = zmod::norm(x * s, q);
      gens2.push_back(w);
    }
    /* also add a random combination of the first two */
    if (gens1.size() >= 2) {
      Vec w(n);
      for (int j = 0; j < n; ++j)
        w[j] = zmod::norm(gens1[0][j] + 2 * gens1[1][j], q);
      gens2.push_back(w);
    }
    Howell h1(gens1, p, M, n), h2(gens2, p, M, n);
    CHECK(h1.same_span(h2));
    CHECK(h1.rows() == h2.rows());
    for (const auto& g : gens1) CHECK(h1.contains(g));
  }
}
