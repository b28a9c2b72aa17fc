#include <algorithm>

#include "wildquot/errors.hpp"
#include "wildquot/series.hpp"

namespace wildquot {

namespace {

constexpr i64 kInf = i64{1} << 40;

bool exactly_zero(const BaseRing& R, const RElem& a) {
  return R.val(a).ge(R.cap());
}

}  // namespace

PiAdicContext PiAdicContext::make(CtxHandle B, Series pi) {
  if (!B) throw Error("pi-adic context: missing ambient context");
  if (!pi.defined() || !pi.ctx()->same(*B))
    throw MixedContext("pi-adic context: pi not in the ambient ring");
  const auto& R = *B->base();
  const int d = B->nvars();

  PiAdicContext P;
  P.B_ = B;
  P.pi_ = pi;

  if (R.is_unit(pi.constant_term()))
    throw NotRegularParameter("pi is a unit");

  /* variable-like shape: some linear coefficient is a unit */
  int unit_idx = -1;
  for (int j = 0; j < d && unit_idx < 0; ++j) {
    std::vector<int> e(d, 0);
    e[j] = 1;
    if (R.is_unit(pi.coeff(e))) unit_idx = j;
  }

  /* The variable shape demands an exactly-zero constant term: the change
   * of coordinates then preserves the degree filtration, so pi-adic
   * readings on the truncated model are exact.  A parameter such as
   * x + u mixes the base uniformizer into the variables; truncation
   * tails of such a change reach pi-valuation 0 and no reading could be
   * certified, so it is rejected rather than silently degraded. */
  if (unit_idx >= 0 && exactly_zero(R, pi.constant_term())) {
    P.shape_ = PiShape::VariableCoord;
    P.var_ = unit_idx;
    P.bar_ = B->without_var(unit_idx);
    /* is pi literally the variable? */
    bool literal = true;
    for (int idx = 0; idx < B->size(); ++idx) {
      const auto& e = B->exponents(idx);
      bool is_var = (B->degree(idx) == 1 && e[unit_idx] == 1);
      if (is_var ? !R.equal(pi.coeff(idx), R.one())
                 : !exactly_zero(R, pi.coeff(idx)))
        literal = false;
    }
    P.trivial_change_ = literal;
    if (!literal) {
      if (pi.valid_deg() < B->N())
        throw PrecisionLoss(
            "pi-adic context: coordinate change needs pi trusted to full degree");
      std::vector<Series> F(d);
      for (int j = 0; j < d; ++j) F[j] = Series::variable(B, j);
      F[unit_idx] = pi;
      P.to_old_ = F;             /* from pi-coordinates back to x-coordinates */
      P.to_new_ = invert_map(F); /* x-coordinates to pi-coordinates */
    }
    return P;
  }

  if (unit_idx >= 0)
    throw NotRegularParameter(
        "pi mixes a variable with base-ring terms; only u*(unit) or a pure "
        "variable change is supported");

  /* base-uniformizer shape: pi = u * (unit series).  Requires a DVR base,
   * every coefficient divisible by u, and a constant term of valuation
   * exactly 1. */
  if (R.is_field())
    throw NotRegularParameter(
        "pi lies in the square of the maximal ideal (no unit linear part)");
  Valuation v0 = R.val(pi.constant_term());
  if (!(v0.exact && v0.value == 1))
    throw NotRegularParameter(
        "pi has no unit linear part and its constant term is not u * unit");
  P.shape_ = PiShape::BaseUniformizer;
  Series w = Series::zero(B);
  for (int idx = 0; idx < B->size(); ++idx) {
    if (B->degree(idx) > pi.valid_deg()) continue;
    const RElem& c = pi.coeff(idx);
    if (!R.val(c).ge(1))
      throw NotRegularParameter(
          "pi is not u times a unit series (coefficient of valuation 0 at " +
          B->monomial_str(idx) + ")");
    w.coeff(idx) = R.shift_down(c, 1);
  }
  w.set_valid_deg(pi.valid_deg());
  if (!pi.entire()) w.clear_entire();
  P.unit_part_ = w;
  P.unit_part_inv_ = w.inv();
  P.bar_ = B->with_base(R.residue_ring());
  return P;
}

i64 PiAdicContext::residue_char() const {
  const auto& R = *B_->base();
  if (shape_ == PiShape::BaseUniformizer) return R.p();
  return R.char_of_fractions();
}

Series PiAdicContext::to_pi_coords(const Series& f) const {
  if (shape_ != PiShape::VariableCoord || trivial_change_) return f;
  return subst(f, to_new_);
}

Series PiAdicContext::from_pi_coords(const Series& f) const {
  if (shape_ != PiShape::VariableCoord || trivial_change_) return f;
  return subst(f, to_old_);
}

Valuation PiAdicContext::pival(const Series& f) const {
  if (!f.defined() || !f.ctx()->same(*B_))
    throw MixedContext("pival: element not in the ambient ring");
  const auto& R = *B_->base();
  i64 vexact = kInf, vamb = kInf;
  if (shape_ == PiShape::BaseUniformizer) {
    for (int idx = 0; idx < B_->size(); ++idx) {
      if (B_->degree(idx) > f.valid_deg()) continue;
      Valuation v = R.val(f.coeff(idx));
      if (v.exact)
        vexact = std::min(vexact, v.value);
      else
        vamb = std::min(vamb, v.value);
    }
  } else {
    Series g = to_pi_coords(f);
    for (int idx = 0; idx < B_->size(); ++idx) {
      if (B_->degree(idx) > g.valid_deg()) continue;
      const RElem& c = g.coeff(idx);
      if (exactly_zero(R, c)) continue;
      i64 m = B_->exponents(idx)[var_];
      Valuation v = R.val(c);
      if (v.exact)
        vexact = std::min(vexact, m); /* certified nonzero coefficient */
      else
        vamb = std::min(vamb, m); /* could vanish; could not be ruled out */
    }
  }
  if (vexact <= vamb && vexact < kInf) return Valuation::exactly(vexact);
  if (vamb < kInf) return Valuation::at_least(vamb);
  return Valuation::at_least(std::max(f.valid_deg(), 0) + 1);
}

Series PiAdicContext::divide(const Series& f, i64 k) const {
  if (k < 0) throw Error("pi-adic divide: negative exponent");
  if (k == 0) return f;
  const auto& R = *B_->base();
  if (shape_ == PiShape::BaseUniformizer) {
    Series r = Series::zero(B_);
    for (int idx = 0; idx < B_->size(); ++idx) {
      if (B_->degree(idx) > f.valid_deg()) continue;
      r.coeff(idx) = R.shift_down(f.coeff(idx), k);
    }
    r.set_valid_deg(f.valid_deg());
    if (!f.entire()) r.clear_entire();
    return r * unit_part_inv_.pow(static_cast<u64>(k));
  }
  Series g = to_pi_coords(f);
  if (g.valid_deg() < k)
    throw PrecisionLoss("pi-adic divide: truncation too small");
  Series h = Series::zero(B_);
  for (int idx = 0; idx < B_->size(); ++idx) {
    if (B_->degree(idx) > g.valid_deg()) continue;
    const RElem& c = g.coeff(idx);
    if (exactly_zero(R, c)) continue;
    std::vector<int> e(B_->exponents(idx));
    /* entries below pi^k must be exactly zero: a certified-nonzero entry
     * means f is not divisible, an imprecise zero cannot be certified */
    if (e[var_] < k)
      throw PrecisionLoss("pi-adic divide: divisibility not certified at truncation");
    e[var_] -= static_cast<int>(k);
    h.set_coeff(e, c);
  }
  /* an entire numerator divides exactly: the quotient is again the full
   * stored polynomial, so keep the zero-built full trust */
  if (!g.entire()) {
    h.set_valid_deg(g.valid_deg() - static_cast<int>(k));
    h.clear_entire();
  }
  return from_pi_coords(h);
}

Series PiAdicContext::reduce(const Series& f) const {
  return reduce_shifted(f, 0);
}

Series PiAdicContext::reduce_shifted(const Series& f, i64 k) const {
  if (!f.defined() || !f.ctx()->same(*B_))
    throw MixedContext("pi-adic reduce: element not in the ambient ring");
  if (k < 0) throw Error("pi-adic reduce: negative shift");
  const auto& R = *B_->base();
  if (shape_ == PiShape::BaseUniformizer) {
    /* (f/pi^k) mod pi = (f/u^k) * w^{-k} mod u */
    Series r = Series::zero(bar_);
    for (int idx = 0; idx < B_->size(); ++idx) {
      if (B_->degree(idx) > f.valid_deg()) continue;
      r.coeff(idx) = R.residue(R.shift_down(f.coeff(idx), k));
    }
    r.set_valid_deg(f.valid_deg());
    if (!f.entire()) r.clear_entire();
    if (k == 0) return r;
    Series wbar = Series::zero(bar_);
    for (int idx = 0; idx < B_->size(); ++idx) {
      if (B_->degree(idx) > unit_part_.valid_deg()) continue;
      wbar.coeff(idx) = R.residue(unit_part_.coeff(idx));
    }
    wbar.set_valid_deg(unit_part_.valid_deg());
    if (!unit_part_.entire()) wbar.clear_entire();
    return r * wbar.inv().pow(static_cast<u64>(k));
  }
  Series g = to_pi_coords(f);
  if (g.valid_deg() < k)
    throw PrecisionLoss("pi-adic reduce: truncation too small");
  Series r = Series::zero(bar_);
  for (int idx = 0; idx < B_->size(); ++idx) {
    if (B_->degree(idx) > g.valid_deg()) continue;
    const RElem& c = g.coeff(idx);
    const auto& e = B_->exponents(idx);
    if (e[var_] < k && R.is_zero(c) && !exactly_zero(R, c))
      throw PrecisionLoss("pi-adic reduce: shift not certified at truncation");
    if (e[var_] != k) continue;
    std::vector<int> eb;
    for (int j = 0; j < B_->nvars(); ++j)
      if (j != var_) eb.push_back(e[j]);
    r.set_coeff(eb, c);
  }
  if (!g.entire()) {
    r.set_valid_deg(g.valid_deg() - static_cast<int>(k));
    r.clear_entire();
  }
  return r;
}

Series PiAdicContext::bracket(const Series& f) const {
  Valuation v = pival(f);
  if (!v.exact)
    throw PrecisionLoss("bracket: pi-adic valuation not certified (>= " +
                        std::to_string(v.value) + ")");
  Series r = reduce_shifted(f, v.value);
  if (r.is_zero())
    throw PrecisionLoss("bracket: leading unit vanished after reduction");
  return r;
}

Series PiAdicContext::lift(const Series& fbar) const {
  if (!fbar.defined() || !fbar.ctx()->same(*bar_))
    throw MixedContext("pi-adic lift: element not in the residue ring");
  const auto& R = *B_->base();
  if (shape_ == PiShape::BaseUniformizer) {
    Series r = Series::zero(B_);
    for (int idx = 0; idx < bar_->size(); ++idx) {
      if (bar_->degree(idx) > fbar.valid_deg()) continue;
      r.coeff(idx) = R.lift(fbar.coeff(idx));
    }
    r.set_valid_deg(fbar.valid_deg());
    if (!fbar.entire()) r.clear_entire();
    return r;
  }
  Series r = Series::zero(B_);
  for (int idx = 0; idx < bar_->size(); ++idx) {
    if (bar_->degree(idx) > fbar.valid_deg()) continue;
    const auto& eb = bar_->exponents(idx);
    std::vector<int> e;
    int t = 0;
    for (int j = 0; j < B_->nvars(); ++j)
      e.push_back(j == var_ ? 0 : eb[t++]);
    r.set_coeff(e, fbar.coeff(idx));
  }
  r.set_valid_deg(fbar.valid_deg());
  if (!fbar.entire()) r.clear_entire();
  return from_pi_coords(r);
}

}  // namespace wildquot
