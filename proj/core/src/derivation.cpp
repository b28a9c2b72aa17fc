#include "wildquot/derivation.hpp"

#include <random>
#include <string>

#include "wildquot/errors.hpp"

namespace wildquot {

namespace {

enum class IntegrateMode { kNormalize, kExact, kLogDeriv };

/* Preimage of g under d/dx_1: each monomial c * x_1^l * m maps to
 * c/(l+1) * x_1^{l+1} * m.  Monomials with l = -1 mod p have no
 * preimage; a nonzero coefficient there aborts with the error matching
 * the caller.  Degree-N terms of g would integrate past the truncation
 * and are dropped; the result satisfies d(result)/dx_1 = g through
 * degree min(g.valid_deg, N-1). */
Series integrate_first_var(const Series& g, IntegrateMode mode) {
  const auto& cx = g.ctx();
  const auto& R = *cx->base();
  const i64 p = R.p();
  Series r = Series::zero(cx);
  bool dropped = false;
  for (int idx = 0; idx < cx->size(); ++idx) {
    if (cx->degree(idx) > g.valid_deg()) break;
    const RElem& c = g.coeff(idx);
    if (R.is_zero(c)) continue;
    std::vector<int> e = cx->exponents(idx);
    if ((e[0] + 1) % p == 0) {
      const std::string what =
          "no d/dx_1 preimage: obstruction at " + cx->monomial_str(idx);
      switch (mode) {
        case IntegrateMode::kNormalize:
          throw HypothesisViolated(what + " (theta^p is not proportional to theta)");
        case IntegrateMode::kExact:
          throw NotInImage(what);
        case IntegrateMode::kLogDeriv:
          throw Inconsistent(what + " (not a logarithmic derivative of a unit)");
      }
    }
    if (cx->degree(idx) == cx->N()) { /* primitive escapes the model */
      dropped = true;
      continue;
    }
    RElem v = R.mul(c, R.inv(R.from_int(e[0] + 1)));
    e[0] += 1;
    r.set_coeff(e, v);
  }
  r.set_valid_deg(std::min(cx->N(), g.valid_deg() + 1));
  if (!g.entire() || dropped) r.clear_entire();
  return r;
}

void check_frame_ctx(const NormalizedFrame& fr, const Series& g) {
  if (!g.defined() || !g.ctx()->same(*fr.ctx))
    throw MixedContext("series does not live in the frame's ring");
}

/* Rewrites f into the frame's normalized coordinates. */
Series to_new(const NormalizedFrame& fr, const Series& f) {
  return subst(f, fr.old_in_new);
}
Series to_old(const NormalizedFrame& fr, const Series& f) {
  return subst(f, fr.new_params);
}

}  // namespace

Derivation Derivation::make(CtxHandle B, std::vector<Series> values) {
  if (!B) throw WrongShape("derivation needs a series context");
  if (!B->base()->is_field())
    throw WrongShape(
        "derivations are supported over finite-field coefficients only");
  if (static_cast<int>(values.size()) != B->nvars())
    throw WrongShape("need one value theta(x_i) per variable");
  for (const auto& v : values)
    if (!v.defined() || !v.ctx()->same(*B))
      throw MixedContext("derivation value in a different ring");
  Derivation th;
  th.ctx_ = std::move(B);
  th.values_ = std::move(values);
  return th;
}

Series Derivation::apply(const Series& f) const {
  if (!f.defined() || !f.ctx()->same(*ctx_))
    throw MixedContext("derivation applied to a series in a different ring");
  Series r = Series::zero(ctx_);
  for (int i = 0; i < ctx_->nvars(); ++i)
    r = r + dvar(f, i) * values_[i];
  return r;
}

Series Derivation::apply_iter(const Series& f, int k) const {
  Series r = f;
  for (int j = 0; j < k; ++j) r = apply(r);
  return r;
}

bool Derivation::is_zero() const {
  for (const auto& v : values_)
    if (!v.is_zero()) return false;
  return true;
}

Series deriv_check_plie(const Derivation& th) {
  const auto& B = th.ctx();
  const auto& R = *B->base();
  const int p = static_cast<int>(R.p());
  int j = -1;
  for (int i = 0; i < B->nvars(); ++i)
    if (R.is_unit(th.values()[i].constant_term())) {
      j = i;
      break;
    }
  if (j < 0)
    throw HypothesisViolated(
        "derivation induces the zero map on m/m^2: no theta(x_i) is a unit");
  Series a = th.apply_iter(th.values()[j], p - 1) * th.values()[j].inv();
  for (int i = 0; i < B->nvars(); ++i) {
    Series lhs = th.apply_iter(th.values()[i], p - 1);
    Series rhs = a * th.values()[i];
    if (!lhs.equal(rhs))
      throw NotPLie("theta^p differs from a*theta on variable " +
                    B->vars()[i]);
  }
  return a;
}

NormalizedFrame deriv_normalize(const Derivation& th) {
  const auto& B = th.ctx();
  const auto& R = *B->base();
  const int d = B->nvars();
  const int N = B->N();

  /* Linear stage: scale a unit direction to theta(x_1') = 1 mod m and
   * clear the constant parts of the other values. */
  int j = -1;
  for (int i = 0; i < d; ++i)
    if (R.is_unit(th.values()[i].constant_term())) {
      j = i;
      break;
    }
  if (j < 0)
    throw HypothesisViolated(
        "derivation induces the zero map on m/m^2: no theta(x_i) is a unit");
  RElem cj_inv = R.inv(th.values()[j].constant_term());
  std::vector<Series> F;
  F.reserve(d);
  F.push_back(Series::variable(B, j).scaled(cj_inv));
  for (int i = 0; i < d; ++i) {
    if (i == j) continue;
    RElem ci = th.values()[i].constant_term();
    F.push_back(Series::variable(B, i) -
                Series::variable(B, j).scaled(R.mul(ci, cj_inv)));
  }

  /* Stage n kills the degree-n part of theta(x_i') for i > 1 by adding a
   * chosen degree-(n+1) form; lower degrees are untouched because the
   * correction's image shifts everything else past degree n. */
  std::vector<Series> G;
  std::vector<Series> t(d);
  int limit = 0;
  for (int n = 1;; ++n) {
    G = invert_map(F);
    limit = N - 1;
    for (int i = 0; i < d; ++i) {
      t[i] = subst(th.apply(F[i]), G);
      limit = std::min(limit, t[i].valid_deg());
    }
    for (int i = 1; i < d; ++i)
      for (int m = 0; m <= std::min(n - 1, limit); ++m)
        if (!t[i].homogeneous_part(m).is_zero())
          throw Inconsistent("normalization regressed at degree " +
                             std::to_string(m));
    if (n > limit) break;
    for (int i = 1; i < d; ++i) {
      Series T = t[i].homogeneous_part(n);
      if (T.is_zero()) continue;
      Series delta = integrate_first_var(-T, IntegrateMode::kNormalize);
      delta.set_valid_deg(N); /* a chosen polynomial correction is exact */
      F[i] = F[i] + subst(delta, F);
    }
  }

  if (!R.equal(t[0].constant_term(), R.one()))
    throw Inconsistent("normalized theta(x_1') does not start at 1");

  NormalizedFrame fr;
  fr.ctx = B;
  fr.p = R.p();
  fr.new_params = std::move(F);
  fr.old_in_new = std::move(G);
  fr.h = t[0];
  fr.checked_deg = limit;
  return fr;
}

std::vector<Series> kernel_components(const NormalizedFrame& fr,
                                      const Series& f) {
  check_frame_ctx(fr, f);
  const auto& cx = fr.ctx;
  const auto& R = *cx->base();
  const int p = static_cast<int>(fr.p);
  Series fp = to_new(fr, f);
  std::vector<Series> comps(p, Series::zero(cx));
  for (int idx = 0; idx < cx->size(); ++idx) {
    if (cx->degree(idx) > fp.valid_deg()) break;
    const RElem& c = fp.coeff(idx);
    if (R.is_zero(c)) continue;
    std::vector<int> e = cx->exponents(idx);
    const int i = e[0] % p;
    e[0] -= i;
    comps[i].set_coeff(e, c);
  }
  for (int i = 0; i < p; ++i) {
    comps[i].set_valid_deg(std::min(cx->N(), fp.valid_deg() - i));
    if (!fp.entire()) comps[i].clear_entire();
  }
  return comps;
}

Series kernel_recompose(const NormalizedFrame& fr,
                        const std::vector<Series>& comps) {
  const auto& cx = fr.ctx;
  Series acc = Series::zero(cx);
  Series x1 = Series::variable(cx, 0);
  for (std::size_t i = 0; i < comps.size(); ++i)
    acc = acc + comps[i] * x1.pow(i);
  return to_old(fr, acc);
}

bool in_kernel(const NormalizedFrame& fr, const Series& f) {
  auto comps = kernel_components(fr, f);
  for (std::size_t i = 1; i < comps.size(); ++i)
    if (!comps[i].is_zero()) return false;
  return true;
}

KernelDecomp deriv_kernel_decomp(const NormalizedFrame& fr, int trials,
                                 std::uint64_t seed) {
  const auto& cx = fr.ctx;
  const auto& R = *cx->base();
  const int p = static_cast<int>(fr.p);
  KernelDecomp kd;
  kd.ring_gens.push_back(to_old(fr, Series::variable(cx, 0).pow(p)));
  for (int i = 1; i < cx->nvars(); ++i)
    kd.ring_gens.push_back(fr.new_params[i]);
  kd.trials = trials;
  kd.certified = true;
  std::mt19937_64 rng(seed);
  for (int tr = 0; tr < trials; ++tr) {
    Series f = Series::zero(cx);
    for (int idx = 0; idx < cx->size(); ++idx) {
      std::vector<i64> cs(R.coeff_len());
      for (auto& c : cs)
        c = static_cast<i64>(rng() %
                             static_cast<std::uint64_t>(R.coeff_modulus()));
      f.set_coeff(cx->exponents(idx), R.from_coords(cs));
    }
    auto comps = kernel_components(fr, f);
    bool pure = true;
    for (int i = 0; i < p; ++i)
      for (int idx = 0; idx < cx->size(); ++idx) {
        if (cx->degree(idx) > comps[i].valid_deg()) break;
        if (!R.is_zero(comps[i].coeff(idx)) &&
            cx->exponents(idx)[0] % p != 0)
          pure = false;
      }
    if (!pure || !kernel_recompose(fr, comps).equal(f)) kd.certified = false;
  }
  return kd;
}

Series deriv_solve_exact(const NormalizedFrame& fr, const Series& g) {
  check_frame_ctx(fr, g);
  Series gt = to_new(fr, g) * fr.h.inv();
  Series f0 = integrate_first_var(gt, IntegrateMode::kExact);
  return to_old(fr, f0);
}

Series deriv_solve_logderiv(const NormalizedFrame& fr, const Series& g) {
  check_frame_ctx(fr, g);
  const auto& cx = fr.ctx;
  const int N = cx->N();
  Series gt = to_new(fr, g) * fr.h.inv();
  const int uvd = std::min(N, gt.valid_deg() + 1);
  Series u = Series::one(cx);
  u.set_valid_deg(uvd);
  for (int t = 0; t + 1 <= uvd; ++t) {
    Series rhs = (gt * u).homogeneous_part(t);
    Series part = integrate_first_var(rhs, IntegrateMode::kLogDeriv);
    part.set_valid_deg(std::min(N, t + 1)); /* homogeneous, hence exact */
    u = u + part;
    u.set_valid_deg(uvd);
  }
  return to_old(fr, u);
}

}  // namespace wildquot
