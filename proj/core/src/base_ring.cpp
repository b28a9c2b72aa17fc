#include "wildquot/base_ring.hpp"

#include <algorithm>
#include <sstream>

namespace wildquot {

std::string Valuation::str() const {
  std::ostringstream os;
  if (exact)
    os << value;
  else
    os << ">=" << value;
  return os.str();
}

/* ---------- polynomial helpers over F_p (for field construction) ---------- */
namespace {

using Poly = std::vector<i64>;  /* coefficients mod p, low degree first */

void ptrim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly pmod(Poly a, const Poly& m, i64 p) {
  ptrim(a);
  while (a.size() >= m.size()) {
    i64 lead = a.back();  /* m is monic */
    size_t shift = a.size() - m.size();
    for (size_t i = 0; i < m.size(); ++i)
      a[shift + i] = zmod::sub(a[shift + i], zmod::mul(lead, m[i], p), p);
    ptrim(a);
  }
  return a;
}

Poly pmulmod(const Poly& a, const Poly& b, const Poly& m, i64 p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = zmod::add(c[i + j], zmod::mul(a[i], b[j], p), p);
  return pmod(std::move(c), m, p);
}

Poly pgcd(Poly a, Poly b, i64 p) {
  ptrim(a);
  ptrim(b);
  while (!b.empty()) {
    /* make b monic for pmod */
    i64 li = zmod::inv(b.back(), p);
    Poly bm = b;
    for (auto& x : bm) x = zmod::mul(x, li, p);
    a = pmod(std::move(a), bm, p);
    std::swap(a, b);
  }
  return a;
}

/* x^(p^k) mod m */
Poly frob_power(const Poly& m, i64 p, int k) {
  Poly x = {0, 1};
  Poly r = pmod(x, m, p);
  for (int i = 0; i < k; ++i) {
    /* r := r^p by square-and-multiply */
    Poly acc = {1};
    Poly base = r;
    i64 e = p;
    while (e) {
      if (e & 1) acc = pmulmod(acc, base, m, p);
      base = pmulmod(base, base, m, p);
      e >>= 1;
    }
    r = std::move(acc);
  }
  return r;
}

/* Rabin irreducibility test for a monic polynomial of degree r over F_p. */
bool irreducible(const Poly& m, i64 p) {
  int r = static_cast<int>(m.size()) - 1;
  Poly x = pmod({0, 1}, m, p);
  /* x^{p^r} == x mod m */
  Poly xr = frob_power(m, p, r);
  if (xr != x) return false;
  /* gcd(x^{p^{r/l}} - x, m) == 1 for every prime l | r */
  for (int l = 2; l <= r; ++l) {
    if (r % l != 0) continue;
    bool lprime = true;
    for (int d = 2; d * d <= l; ++d)
      if (l % d == 0) lprime = false;
    if (!lprime) continue;
    Poly xe = frob_power(m, p, r / l);
    Poly diff = xe;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = zmod::sub(diff[1], 1, p);
    Poly g = pgcd(diff, m, p);
    if (!(g.size() == 1)) return false;
  }
  return true;
}

Poly find_irreducible(i64 p, int r) {
  /* deterministic search ordered by the integer encoding of the
   * non-leading coefficients */
  std::vector<i64> digits(r, 0);
  while (true) {
    Poly m(digits.begin(), digits.end());
    m.push_back(1);
    if (irreducible(m, p)) return m;
    int i = 0;
    while (i < r && ++digits[i] == p) digits[i++] = 0;
    if (i == r) throw Error("no irreducible polynomial found (unreachable)");
  }
}

}  // namespace

/* ---------- construction ---------- */

RingHandle BaseRing::finite_field(i64 p, int r) {
  if (!zmod::is_prime(p)) throw NotPrime("field characteristic must be prime");
  if (r < 1) throw Error("extension degree must be >= 1");
  auto R = std::shared_ptr<BaseRing>(new BaseRing());
  R->kind_ = RingKind::FiniteField;
  R->p_ = p;
  R->M_ = 1;
  R->e_ = 1;
  R->r_ = r;
  R->q_ = p;
  if (r > 1) R->E_ = find_irreducible(p, r);
  return R;
}

RingHandle BaseRing::truncated_dvr(i64 p, int M, std::vector<i64> eisenstein) {
  if (!zmod::is_prime(p)) throw NotPrime("residue characteristic must be prime");
  if (M < 1) throw Error("coefficient precision M must be >= 1");
  int e = static_cast<int>(eisenstein.size()) - 1;
  if (e < 1) throw NotEisenstein("defining polynomial must have degree >= 1");
  if (eisenstein[e] != 1) throw NotEisenstein("defining polynomial must be monic");
  /* Eisenstein at p: constant term of p-valuation exactly 1, all other
   * non-leading coefficients divisible by p.  Tested on the integer
   * inputs before reduction. */
  if (eisenstein[0] % p != 0 || (eisenstein[0] / p) % p == 0)
    throw NotEisenstein("constant term must have p-valuation exactly 1");
  for (int i = 1; i < e; ++i)
    if (eisenstein[i] % p != 0)
      throw NotEisenstein("middle coefficients must be divisible by p");

  auto R = std::shared_ptr<BaseRing>(new BaseRing());
  R->kind_ = RingKind::TruncatedDvr;
  R->p_ = p;
  R->M_ = M;
  R->e_ = e;
  R->r_ = 1;
  R->q_ = zmod::pow_checked(p, M);
  R->E_.resize(e + 1);
  for (int i = 0; i <= e; ++i) R->E_[i] = zmod::norm(eisenstein[i], R->q_);

  /* u^{e+k} in the basis 1..u^{e-1}:  u^e = -(E_0 + ... + E_{e-1} u^{e-1}) */
  std::vector<i64> cur(e);
  for (int i = 0; i < e; ++i) cur[i] = zmod::sub(0, R->E_[i], R->q_);
  R->red_.push_back(cur);
  for (int k = 1; k <= e - 2; ++k) {
    std::vector<i64> nxt(e, 0);
    for (int i = 0; i < e - 1; ++i) nxt[i + 1] = cur[i];
    i64 top = cur[e - 1];
    for (int i = 0; i < e; ++i)
      nxt[i] = zmod::add(nxt[i], zmod::mul(top, R->red_[0][i], R->q_), R->q_);
    R->red_.push_back(nxt);
    cur = std::move(nxt);
  }

  i64 e0p = zmod::norm(R->E_[0], R->q_) / p;
  R->E0_over_p_inv_ = zmod::inv(e0p % R->q_, R->q_);
  R->residue_ = finite_field(p, 1);
  return R;
}

bool BaseRing::same(const BaseRing& o) const {
  return kind_ == o.kind_ && p_ == o.p_ && M_ == o.M_ && e_ == o.e_ &&
         r_ == o.r_ && E_ == o.E_;
}

/* ---------- element construction ---------- */

RElem BaseRing::zero() const { return {std::vector<i64>(coeff_len(), 0), cap()}; }

RElem BaseRing::one() const {
  RElem x = zero();
  x.c[0] = 1 % q_;
  return x;
}

RElem BaseRing::from_int(i64 n) const {
  RElem x = zero();
  x.c[0] = zmod::norm(n, q_);
  return x;
}

RElem BaseRing::from_coords(std::vector<i64> c) const {
  if (static_cast<int>(c.size()) != coeff_len())
    throw Error("coordinate vector has the wrong length");
  for (auto& x : c) x = zmod::norm(x, q_);
  return {std::move(c), cap()};
}

RElem BaseRing::uniformizer() const {
  if (is_field()) throw Error("a field has no uniformizer");
  RElem x = zero();
  if (e_ == 1) {
    /* R = Z/p^M with E = T - c: the distinguished uniformizer is c */
    x.c[0] = zmod::sub(0, E_[0], q_);
  } else {
    x.c[1] = 1;
  }
  return x;
}

RElem BaseRing::uniformizer_pow(i64 k) const {
  if (k < 0) throw Error("negative uniformizer power");
  RElem r = one();
  RElem u = uniformizer();
  for (i64 i = 0; i < k; ++i) r = mul(r, u);
  return r;
}

void BaseRing::check(const RElem& a) const {
  if (static_cast<int>(a.c.size()) != coeff_len())
    throw MixedContext("element does not belong to this coefficient ring");
}

/* ---------- arithmetic ---------- */

RElem BaseRing::add(const RElem& a, const RElem& b) const {
  check(a);
  check(b);
  RElem r;
  r.c.resize(coeff_len());
  for (int i = 0; i < coeff_len(); ++i) r.c[i] = zmod::add(a.c[i], b.c[i], q_);
  r.prec = std::min(a.prec, b.prec);
  return r;
}

RElem BaseRing::sub(const RElem& a, const RElem& b) const {
  check(a);
  check(b);
  RElem r;
  r.c.resize(coeff_len());
  for (int i = 0; i < coeff_len(); ++i) r.c[i] = zmod::sub(a.c[i], b.c[i], q_);
  r.prec = std::min(a.prec, b.prec);
  return r;
}

RElem BaseRing::neg(const RElem& a) const {
  check(a);
  RElem r = a;
  for (auto& x : r.c) x = zmod::sub(0, x, q_);
  return r;
}

int BaseRing::arr_val(const RElem& a) const {
  if (is_field()) {
    for (i64 x : a.c)
      if (x != 0) return 0;
    return 1;
  }
  int v = e_ * M_;
  for (int i = 0; i < e_; ++i) {
    if (a.c[i] == 0) continue;
    v = std::min(v, e_ * zmod::valp(a.c[i], p_, M_) + i);
  }
  return v;
}

RElem BaseRing::mul(const RElem& a, const RElem& b) const {
  check(a);
  check(b);
  RElem r;
  r.c.assign(coeff_len(), 0);
  if (is_field()) {
    if (r_ == 1) {
      r.c[0] = zmod::mul(a.c[0], b.c[0], q_);
    } else {
      Poly prod(2 * r_ - 1, 0);
      for (int i = 0; i < r_; ++i)
        for (int j = 0; j < r_; ++j)
          prod[i + j] = zmod::add(prod[i + j], zmod::mul(a.c[i], b.c[j], q_), q_);
      Poly red = pmod(std::move(prod), E_, q_);
      for (size_t i = 0; i < red.size(); ++i) r.c[i] = red[i];
    }
    r.prec = 1;
    return r;
  }
  std::vector<i64> prod(2 * e_ - 1, 0);
  for (int i = 0; i < e_; ++i)
    for (int j = 0; j < e_; ++j)
      prod[i + j] = zmod::add(prod[i + j], zmod::mul(a.c[i], b.c[j], q_), q_);
  for (int i = 0; i < e_; ++i) r.c[i] = prod[i];
  for (int k = 0; k <= e_ - 2; ++k) {
    i64 coef = prod[e_ + k];
    if (coef == 0) continue;
    for (int i = 0; i < e_; ++i)
      r.c[i] = zmod::add(r.c[i], zmod::mul(coef, red_[k][i], q_), q_);
  }
  /* capped-absolute precision: the product is pinned down modulo
   * u^{min(val(a)+prec(b), val(b)+prec(a))} */
  int va = std::min(arr_val(a), a.prec);
  int vb = std::min(arr_val(b), b.prec);
  r.prec = std::min({cap(), va + b.prec, vb + a.prec});
  if (r.prec < 0) r.prec = 0;
  return r;
}

RElem BaseRing::mul_int(const RElem& a, i64 n) const { return mul(a, from_int(n)); }

RElem BaseRing::pow(const RElem& a, u64 k) const {
  RElem r = one();
  RElem base = a;
  while (k) {
    if (k & 1) r = mul(r, base);
    base = mul(base, base);
    k >>= 1;
  }
  return r;
}

RElem BaseRing::inv(const RElem& a) const {
  check(a);
  if (!is_unit(a)) throw NotAUnit("inverse requested of a non-unit");
  if (is_field()) {
    if (r_ == 1) return {{zmod::inv(a.c[0], q_)}, 1};
    u64 qq = 1;
    for (int i = 0; i < r_; ++i) qq *= static_cast<u64>(p_);
    return pow(a, qq - 2);
  }
  /* Newton iteration z <- z(2 - a z); each step doubles the number of
   * certified u-digits */
  RElem z = from_int(zmod::inv(a.c[0], q_));
  RElem two = from_int(2);
  int digits = 1;
  while (digits < cap()) {
    z = mul(z, sub(two, mul(a, z)));
    z.prec = std::min(z.prec, a.prec);
    digits *= 2;
  }
  z.prec = a.prec;
  return z;
}

/* ---------- valuation / precision ---------- */

Valuation BaseRing::val(const RElem& a) const {
  check(a);
  int v = arr_val(a);
  if (v < a.prec) return Valuation::exactly(v);
  return Valuation::at_least(a.prec);
}

bool BaseRing::is_zero(const RElem& a) const { return arr_val(a) >= a.prec; }

bool BaseRing::is_unit(const RElem& a) const {
  check(a);
  if (a.prec < 1) throw PrecisionLoss("element has no certified digits");
  return arr_val(a) == 0;
}

bool BaseRing::equal(const RElem& a, const RElem& b) const {
  return is_zero(sub(a, b));
}

RElem BaseRing::div_u_once(const RElem& a) const {
  /* Solve u*y = a in the basis 1..u^{e-1}:
   *   y_{e-1} = -(a_0/p) * (E_0/p)^{-1},   y_{i-1} = a_i + E_i * y_{e-1}. */
  RElem y;
  y.c.assign(e_, 0);
  if (a.c[0] % p_ != 0)
    throw PrecisionLoss("shift below the valuation of the element");
  i64 top = zmod::mul(zmod::sub(0, a.c[0] / p_, q_), E0_over_p_inv_, q_);
  y.c[e_ - 1] = top;
  for (int i = 1; i < e_; ++i)
    y.c[i - 1] = zmod::add(a.c[i], zmod::mul(E_[i], top, q_), q_);
  y.prec = a.prec - 1;
  return y;
}

RElem BaseRing::shift_down(const RElem& a, i64 n) const {
  check(a);
  if (n < 0) throw Error("negative shift");
  if (n == 0) return a;
  if (is_field()) throw Error("shift_down is a DVR operation");
  if (a.prec < n || arr_val(a) < n)
    throw PrecisionLoss("cannot certify val >= " + std::to_string(n) +
                        " at precision " + std::to_string(a.prec));
  if (a.prec - n < 1)
    throw PrecisionLoss("no certified digits would remain after the shift");
  RElem r = a;
  for (i64 i = 0; i < n; ++i) r = div_u_once(r);
  return r;
}

/* ---------- residue field ---------- */

RingHandle BaseRing::residue_ring() const {
  if (is_field()) return shared_from_this();
  return residue_;
}

RElem BaseRing::residue(const RElem& a) const {
  check(a);
  if (is_field()) return a;
  if (a.prec < 1) throw PrecisionLoss("element has no certified digits");
  return {{a.c[0] % p_}, 1};
}

RElem BaseRing::lift(const RElem& k_elem) const {
  if (is_field()) return k_elem;
  if (k_elem.c.size() != 1) throw MixedContext("residue element has the wrong shape");
  RElem x = zero();
  x.c[0] = zmod::norm(k_elem.c[0], q_);
  return x;
}

RElem BaseRing::frobenius(const RElem& a) const {
  if (!is_field()) throw Error("frobenius is a field operation");
  return pow(a, static_cast<u64>(p_));
}

/* ---------- printing ---------- */

std::string BaseRing::pretty(const RElem& a) const {
  check(a);
  const char* g = is_field() ? "w" : "u";
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < coeff_len(); ++i) {
    if (a.c[i] == 0) continue;
    if (!first) os << " + ";
    if (i == 0)
      os << a.c[i];
    else {
      if (a.c[i] != 1) os << a.c[i] << "*";
      os << g;
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

std::string BaseRing::describe() const {
  std::ostringstream os;
  if (is_field()) {
    os << "F_" << p_;
    if (r_ > 1) os << "^" << r_;
  } else {
    os << "Z/" << p_ << "^" << M_ << "[u]/(";
    bool first = true;
    for (int i = e_; i >= 0; --i) {
      if (E_[i] == 0) continue;
      if (!first) os << " + ";
      if (i == 0)
        os << E_[i];
      else {
        if (E_[i] != 1) os << E_[i] << "*";
        os << "u";
        if (i > 1) os << "^" << i;
      }
      first = false;
    }
    os << ")";
  }
  return os.str();
}

/* ---------- DvrAutomorphism ---------- */

DvrAutomorphism DvrAutomorphism::identity(RingHandle R) {
  DvrAutomorphism s;
  s.R_ = std::move(R);
  s.identity_ = true;
  s.order_ = 1;
  s.verified_ = false;
  if (!s.R_->is_field()) s.u_image_ = s.R_->uniformizer();
  return s;
}

DvrAutomorphism DvrAutomorphism::make(RingHandle R, RElem u_image, i64 p) {
  if (R->is_field()) throw WrongShape("DvrAutomorphism requires a truncated DVR");
  if (!zmod::is_prime(p)) throw NotPrime("automorphism order must be prime");
  DvrAutomorphism s;
  s.R_ = std::move(R);
  s.u_image_ = std::move(u_image);
  s.order_ = p;
  s.identity_ = false;

  const BaseRing& B = *s.R_;
  Valuation v = B.val(s.u_image_);
  if (!(v.exact && v.value == 1))
    throw NotOrderP("image of the uniformizer must have valuation 1");
  RElem u = B.uniformizer();
  if (B.equal(s.u_image_, u))
    throw NotOrderP("automorphism acts trivially on the coefficient ring");
  RElem z = s.u_image_;
  for (i64 k = 1; k < p; ++k) z = s.apply(z);
  if (!B.equal(z, u))
    throw NotOrderP("sigma^p does not fix the uniformizer at the precision cap");
  s.verified_ = true;
  return s;
}

RElem DvrAutomorphism::apply(const RElem& x) const {
  if (identity_) return x;
  /* x = sum x_i u^i with x_i in Z/p^M fixed by sigma, so sigma(x) is the
   * same polynomial evaluated at sigma(u); Horner form. */
  const BaseRing& B = *R_;
  RElem acc = B.zero();
  for (int i = B.ram_degree() - 1; i >= 0; --i) {
    acc = B.mul(acc, u_image_);
    acc = B.add(acc, B.from_int(x.c[i]));
  }
  acc.prec = std::min(acc.prec, x.prec);
  return acc;
}

RElem DvrAutomorphism::apply_iter(const RElem& x, i64 k) const {
  RElem r = x;
  for (i64 i = 0; i < k; ++i) r = apply(r);
  return r;
}

std::pair<RElem, RElem> DvrAutomorphism::trace_norm(const RElem& x) const {
  if (!verified_)
    throw OrderNotVerified("trace/norm require a verified order-p automorphism");
  const BaseRing& B = *R_;
  RElem tr = B.zero(), nm = B.one(), cur = x;
  for (i64 i = 0; i < order_; ++i) {
    tr = B.add(tr, cur);
    nm = B.mul(nm, cur);
    cur = apply(cur);
  }
  return {tr, nm};
}

}  // namespace wildquot
