#include "wildquot/series.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "wildquot/errors.hpp"

namespace wildquot {

namespace {

constexpr long long kInf = 1LL << 40;

void gen_degree(int n, int d, int pos, std::vector<int>& cur,
                std::vector<std::vector<int>>& out) {
  if (pos == d - 1) {
    cur[pos] = n;
    out.push_back(cur);
    return;
  }
  for (int a = n; a >= 0; --a) {
    cur[pos] = a;
    gen_degree(n - a, d, pos + 1, cur, out);
  }
}

bool exactly_zero(const BaseRing& R, const RElem& a) {
  return R.val(a).ge(R.cap());
}

}  // namespace

u64 SeriesContext::pack(const std::vector<int>& e) {
  u64 key = 0;
  for (int v : e) key = (key << 8) | static_cast<u64>(v & 0xff);
  return key;
}

CtxHandle SeriesContext::make(RingHandle base, std::vector<std::string> vars, int N) {
  if (!base) throw Error("series context: missing base ring");
  if (N < 0 || N > 200) throw Error("series context: truncation order out of range");
  if (vars.size() > 8) throw Error("series context: at most 8 variables supported");
  for (const auto& v : vars) {
    if (v.empty()) throw Error("series context: empty variable name");
    if (v == "u") throw Error("series context: variable name 'u' is reserved");
    if (std::count(vars.begin(), vars.end(), v) != 1)
      throw Error("series context: duplicate variable name '" + v + "'");
  }
  auto* c = new SeriesContext();
  c->base_ = std::move(base);
  c->vars_ = std::move(vars);
  c->N_ = N;
  const int d = c->nvars();
  if (d == 0) {
    c->exps_.push_back({});
  } else {
    std::vector<int> cur(d, 0);
    for (int n = 0; n <= N; ++n) gen_degree(n, d, 0, cur, c->exps_);
  }
  c->deg_.reserve(c->exps_.size());
  for (size_t i = 0; i < c->exps_.size(); ++i) {
    int s = 0;
    for (int v : c->exps_[i]) s += v;
    c->deg_.push_back(s);
    c->index_[pack(c->exps_[i])] = static_cast<int>(i);
  }
  const size_t sz = c->exps_.size();
  if (sz <= 1400) {
    c->prod_.assign(sz * sz, -1);
    std::vector<int> e(d);
    for (size_t i = 0; i < sz; ++i)
      for (size_t j = 0; j < sz; ++j) {
        if (c->deg_[i] + c->deg_[j] > N) continue;
        for (int k = 0; k < d; ++k) e[k] = c->exps_[i][k] + c->exps_[j][k];
        c->prod_[i * sz + j] = c->index_.at(pack(e));
      }
  }
  return CtxHandle(c);
}

int SeriesContext::index_of(const std::vector<int>& e) const {
  if (static_cast<int>(e.size()) != nvars()) return -1;
  int s = 0;
  for (int v : e) {
    if (v < 0) return -1;
    s += v;
  }
  if (s > N_) return -1;
  auto it = index_.find(pack(e));
  return it == index_.end() ? -1 : it->second;
}

int SeriesContext::prod_index(int i, int j) const {
  if (!prod_.empty()) return prod_[static_cast<size_t>(i) * exps_.size() + j];
  if (deg_[i] + deg_[j] > N_) return -1;
  std::vector<int> e(exps_[i]);
  for (int k = 0; k < nvars(); ++k) e[k] += exps_[j][k];
  auto it = index_.find(pack(e));
  return it == index_.end() ? -1 : it->second;
}

int SeriesContext::var_index(const std::string& name) const {
  for (int i = 0; i < nvars(); ++i)
    if (vars_[i] == name) return i;
  return -1;
}

bool SeriesContext::same(const SeriesContext& o) const {
  return N_ == o.N_ && vars_ == o.vars_ && base_->same(*o.base_);
}

CtxHandle SeriesContext::with_truncation(int newN) const {
  return make(base_, vars_, newN);
}

CtxHandle SeriesContext::with_base(RingHandle newBase) const {
  return make(std::move(newBase), vars_, N_);
}

CtxHandle SeriesContext::without_var(int j) const {
  if (j < 0 || j >= nvars()) throw Error("series context: variable index out of range");
  std::vector<std::string> v;
  for (int i = 0; i < nvars(); ++i)
    if (i != j) v.push_back(vars_[i]);
  return make(base_, std::move(v), N_);
}

std::string SeriesContext::monomial_str(int idx) const {
  const auto& e = exps_[idx];
  std::string s;
  for (int i = 0; i < nvars(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += vars_[i];
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s.empty() ? "1" : s;
}

/* ------------------------------------------------------------------ */

Series Series::zero(CtxHandle c) {
  Series s;
  s.ctx_ = std::move(c);
  s.c_.assign(s.ctx_->size(), s.ctx_->base()->zero());
  s.valid_deg_ = s.ctx_->N();
  s.entire_ = true;
  return s;
}

Series Series::one(CtxHandle c) {
  Series s = zero(std::move(c));
  s.c_[0] = s.ctx_->base()->one();
  return s;
}

Series Series::from_int(CtxHandle c, i64 n) {
  Series s = zero(std::move(c));
  s.c_[0] = s.ctx_->base()->from_int(n);
  return s;
}

Series Series::constant(CtxHandle c, RElem v) {
  Series s = zero(std::move(c));
  s.c_[0] = std::move(v);
  return s;
}

Series Series::variable(CtxHandle c, int i) {
  Series s = zero(std::move(c));
  if (i < 0 || i >= s.ctx_->nvars()) throw Error("series: variable index out of range");
  if (s.ctx_->N() < 1) throw Error("series: truncation too small for a variable");
  std::vector<int> e(s.ctx_->nvars(), 0);
  e[i] = 1;
  s.c_[s.ctx_->index_of(e)] = s.ctx_->base()->one();
  return s;
}

Series Series::uniformizer(CtxHandle c) {
  Series s = zero(std::move(c));
  s.c_[0] = s.ctx_->base()->uniformizer();
  return s;
}

void Series::set_valid_deg(int d) {
  const int N = ctx_->N();
  if (d > N) d = N;
  if (d < -1) d = -1;
  if (d < valid_deg_) entire_ = false; /* coefficients above d become unknown */
  valid_deg_ = d;
  const auto& R = *ctx_->base();
  for (int i = 0; i < ctx_->size(); ++i)
    if (ctx_->degree(i) > d) c_[i] = R.zero();
}

const RElem& Series::coeff(const std::vector<int>& e) const {
  int i = ctx_->index_of(e);
  if (i < 0) throw Error("series: exponent out of range");
  return c_[i];
}

void Series::set_coeff(const std::vector<int>& e, RElem v) {
  int i = ctx_->index_of(e);
  if (i < 0) throw Error("series: exponent out of range");
  c_[i] = std::move(v);
}

void Series::check_same(const Series& o) const {
  if (!ctx_ || !o.ctx_) throw Error("series: uninitialized operand");
  if (!ctx_->same(*o.ctx_)) throw MixedContext("series: operands from different contexts");
}

Series Series::operator+(const Series& o) const {
  check_same(o);
  const auto& R = *ctx_->base();
  Series r = zero(ctx_);
  for (int i = 0; i < ctx_->size(); ++i) r.c_[i] = R.add(c_[i], o.c_[i]);
  r.set_valid_deg(std::min(valid_deg_, o.valid_deg_));
  r.entire_ = entire_ && o.entire_;
  return r;
}

Series Series::operator-(const Series& o) const {
  check_same(o);
  const auto& R = *ctx_->base();
  Series r = zero(ctx_);
  for (int i = 0; i < ctx_->size(); ++i) r.c_[i] = R.sub(c_[i], o.c_[i]);
  r.set_valid_deg(std::min(valid_deg_, o.valid_deg_));
  r.entire_ = entire_ && o.entire_;
  return r;
}

Series Series::operator-() const {
  const auto& R = *ctx_->base();
  Series r = zero(ctx_);
  for (int i = 0; i < ctx_->size(); ++i) r.c_[i] = R.neg(c_[i]);
  r.valid_deg_ = valid_deg_;
  r.entire_ = entire_;
  return r;
}

Series Series::operator*(const Series& o) const {
  check_same(o);
  const auto& cx = *ctx_;
  const auto& R = *cx.base();
  const int lda = low_degree(), ldb = o.low_degree();
  long long vd = std::min<long long>(
      {static_cast<long long>(cx.N()),
       static_cast<long long>(valid_deg_) + ldb,
       static_cast<long long>(o.valid_deg_) + lda});
  Series r = zero(ctx_);
  /* supports: coefficients that are not exactly zero mod the full modulus
   * (imprecise zeros still carry uncertainty and must participate) */
  std::vector<int> sa, sb;
  int maxa = -1, maxb = -1;
  for (int i = 0; i < cx.size(); ++i) {
    if (cx.degree(i) <= valid_deg_ && !exactly_zero(R, c_[i])) {
      sa.push_back(i);
      maxa = std::max(maxa, cx.degree(i));
    }
    if (cx.degree(i) <= o.valid_deg_ && !exactly_zero(R, o.c_[i])) {
      sb.push_back(i);
      maxb = std::max(maxb, cx.degree(i));
    }
  }
  for (int i : sa)
    for (int j : sb) {
      int t = cx.prod_index(i, j);
      if (t < 0) continue;
      r.c_[t] = R.add(r.c_[t], R.mul(c_[i], o.c_[j]));
    }
  r.set_valid_deg(static_cast<int>(std::min<long long>(vd, cx.N())));
  /* the product of two exact polynomials is exact when nothing spills
   * past the truncation */
  r.entire_ = entire_ && o.entire_ && maxa + maxb <= cx.N();
  return r;
}

Series Series::scaled(const RElem& a) const {
  const auto& R = *ctx_->base();
  Series r = zero(ctx_);
  for (int i = 0; i < ctx_->size(); ++i) r.c_[i] = R.mul(c_[i], a);
  r.set_valid_deg(valid_deg_);
  r.entire_ = entire_;
  return r;
}

Series Series::scaled_int(i64 n) const {
  const auto& R = *ctx_->base();
  Series r = zero(ctx_);
  for (int i = 0; i < ctx_->size(); ++i) r.c_[i] = R.mul_int(c_[i], n);
  r.set_valid_deg(valid_deg_);
  r.entire_ = entire_;
  return r;
}

Series Series::pow(u64 k) const {
  Series acc = one(ctx_);
  Series b = *this;
  while (k > 0) {
    if (k & 1) acc = acc * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return acc;
}

Series Series::inv() const {
  const auto& R = *ctx_->base();
  if (!R.is_unit(c_[0]))
    throw NotAUnit("series: constant term is not a unit");
  RElem s = R.inv(c_[0]);
  Series t = one(ctx_) - scaled(s);  /* low degree >= 1, exactly */
  Series acc = one(ctx_);
  for (int k = 0; k < std::max(valid_deg_, 0); ++k) acc = one(ctx_) + t * acc;
  Series r = acc.scaled(s);
  r.set_valid_deg(valid_deg_);
  /* the true inverse of a non-constant series has an infinite tail even
   * when the geometric partial sums stay within the truncation */
  bool constant_input = true;
  for (int i = 1; i < ctx_->size(); ++i)
    if (ctx_->degree(i) <= valid_deg_ && !exactly_zero(R, c_[i])) {
      constant_input = false;
      break;
    }
  r.entire_ = entire_ && constant_input;
  return r;
}

bool Series::is_zero() const {
  const auto& R = *ctx_->base();
  for (int i = 0; i < ctx_->size(); ++i)
    if (ctx_->degree(i) <= valid_deg_ && !R.is_zero(c_[i])) return false;
  return true;
}

bool Series::equal(const Series& o) const {
  check_same(o);
  const auto& R = *ctx_->base();
  int vd = std::min(valid_deg_, o.valid_deg_);
  for (int i = 0; i < ctx_->size(); ++i)
    if (ctx_->degree(i) <= vd && !R.equal(c_[i], o.c_[i])) return false;
  return true;
}

int Series::low_degree() const {
  const auto& R = *ctx_->base();
  int best = valid_deg_ + 1;
  for (int i = 0; i < ctx_->size(); ++i)
    if (ctx_->degree(i) <= valid_deg_ && ctx_->degree(i) < best && !R.is_zero(c_[i]))
      best = ctx_->degree(i);
  return best;
}

Series Series::restricted(const CtxHandle& coarser) const {
  if (!coarser->base()->same(*ctx_->base()) || coarser->vars() != ctx_->vars())
    throw MixedContext("series: restriction to an unrelated context");
  if (coarser->N() > ctx_->N())
    throw Error("series: restriction target must have lower truncation");
  Series r = zero(coarser);
  for (int i = 0; i < coarser->size(); ++i)
    r.c_[i] = c_[ctx_->index_of(coarser->exponents(i))];
  r.set_valid_deg(std::min(valid_deg_, coarser->N()));
  if (entire_) {
    /* still an exact polynomial only when nothing nonzero was cut off */
    const auto& R = *ctx_->base();
    bool cut = false;
    for (int i = 0; i < ctx_->size() && !cut; ++i)
      if (ctx_->degree(i) > coarser->N() && !exactly_zero(R, c_[i])) cut = true;
    r.entire_ = !cut;
  } else {
    r.entire_ = false;
  }
  return r;
}

Series Series::homogeneous_part(int n) const {
  if (n > valid_deg_)
    throw PrecisionLoss("series: homogeneous part beyond the trusted degree");
  Series r = zero(ctx_);
  for (int i = 0; i < ctx_->size(); ++i)
    if (ctx_->degree(i) == n) r.c_[i] = c_[i];
  return r;
}

Series Series::truncate_above(int n) const {
  const auto& R = *ctx_->base();
  Series r = *this;
  for (int i = 0; i < ctx_->size(); ++i)
    if (ctx_->degree(i) > n) r.c_[i] = R.zero();
  /* cutting at or below the trusted degree leaves an exact polynomial:
   * every coefficient above n -- up to the full truncation -- is zero by
   * construction, so the result is trusted everywhere */
  if (n <= valid_deg_) {
    r.valid_deg_ = ctx_->N();
    r.entire_ = true;
  }
  return r;
}

std::string Series::str() const {
  const auto& R = *ctx_->base();
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < ctx_->size(); ++i) {
    if (ctx_->degree(i) > valid_deg_ || R.is_zero(c_[i])) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << R.pretty(c_[i]) << ")";
    if (ctx_->degree(i) > 0) os << "*" << ctx_->monomial_str(i);
  }
  if (first) os << "0";
  if (valid_deg_ < ctx_->N()) os << "  [deg <= " << valid_deg_ << "]";
  return os.str();
}

/* ------------------------------------------------------------------ */

Series subst_mapped(const Series& f, const std::vector<Series>& images,
                    const CtxHandle& target,
                    const std::function<RElem(const RElem&)>& coeff_map) {
  const auto& cf = *f.ctx();
  if (static_cast<int>(images.size()) != cf.nvars())
    throw Error("subst: expected one image per variable");
  const auto& ct = *target;
  const auto& Rt = *ct.base();
  for (const auto& img : images)
    if (!img.ctx()->same(ct)) throw MixedContext("subst: image context mismatch");

  long long cclamp = kInf;
  int vd = std::min(f.valid_deg(), ct.N());
  for (const auto& img : images) {
    vd = std::min(vd, img.valid_deg());
    const RElem& c0 = img.constant_term();
    if (Rt.is_unit(c0))
      throw SubstitutionEscapesMaximalIdeal(
          "subst: image constant term is a unit");
    Valuation v = Rt.val(c0);
    long long ci = v.ge(Rt.cap()) ? kInf : v.value;
    cclamp = std::min(cclamp, ci);
  }
  if (!images.empty() && cclamp < 1)
    throw PrecisionLoss("subst: image constant term has no certified valuation");

  Series acc = Series::zero(target);
  const bool memo_ok = cf.size() <= 1500;
  if (memo_ok) {
    /* lazily memoize the image of each source monomial */
    std::vector<Series> mono(cf.size());
    mono[0] = Series::one(target);
    std::function<const Series&(int)> get = [&](int idx) -> const Series& {
      if (mono[idx].defined()) return mono[idx];
      const auto& e = cf.exponents(idx);
      int k = 0;
      while (e[k] == 0) ++k;
      std::vector<int> pe(e);
      pe[k] -= 1;
      mono[idx] = images[k] * get(cf.index_of(pe));
      return mono[idx];
    };
    for (int idx = 0; idx < cf.size(); ++idx) {
      if (cf.degree(idx) > f.valid_deg()) continue;
      const RElem& c = f.coeff(idx);
      if (exactly_zero(*cf.base(), c)) continue;
      acc = acc + get(idx).scaled(coeff_map(c));
    }
  } else {
    /* memory-light fallback: per-variable power tables, then one product
     * chain per monomial (desk-scale inputs always take the memo path) */
    std::vector<int> maxe(cf.nvars(), 0);
    for (int idx = 0; idx < cf.size(); ++idx) {
      if (cf.degree(idx) > f.valid_deg()) continue;
      if (exactly_zero(*cf.base(), f.coeff(idx))) continue;
      for (int k = 0; k < cf.nvars(); ++k)
        maxe[k] = std::max(maxe[k], cf.exponents(idx)[k]);
    }
    std::vector<std::vector<Series>> pows(cf.nvars());
    for (int k = 0; k < cf.nvars(); ++k) {
      pows[k].push_back(Series::one(target));
      for (int a = 1; a <= maxe[k]; ++a) pows[k].push_back(pows[k].back() * images[k]);
    }
    for (int idx = 0; idx < cf.size(); ++idx) {
      if (cf.degree(idx) > f.valid_deg()) continue;
      const RElem& c = f.coeff(idx);
      if (exactly_zero(*cf.base(), c)) continue;
      Series term = Series::constant(target, coeff_map(c));
      for (int k = 0; k < cf.nvars(); ++k)
        if (cf.exponents(idx)[k] > 0) term = term * pows[k][cf.exponents(idx)[k]];
      acc = acc + term;
    }
  }

  acc.set_valid_deg(vd);
  if (!f.entire() && cclamp < Rt.cap()) {
    /* truncation-tail terms of f land on degree-t output coefficients with
     * u-adic valuation >= cclamp * (vd + 1 - t); an entire f has no tail
     * and needs no such allowance */
    for (int idx = 0; idx < ct.size(); ++idx) {
      int t = ct.degree(idx);
      if (t > vd) continue;
      long long bound = cclamp * (vd + 1 - t);
      if (bound < acc.coeff(idx).prec)
        acc.coeff(idx).prec = static_cast<int>(bound);
    }
  }
  if (!f.entire()) acc.clear_entire();
  return acc;
}

Series subst(const Series& f, const std::vector<Series>& images) {
  if (images.empty()) throw Error("subst: no images given");
  return subst_mapped(f, images, images[0].ctx(),
                      [](const RElem& c) { return c; });
}

Series subst(const Series& f, const std::vector<Series>& images,
             const DvrAutomorphism& base_map) {
  if (images.empty()) throw Error("subst: no images given");
  return subst_mapped(f, images, images[0].ctx(),
                      [&](const RElem& c) { return base_map.apply(c); });
}

Series dvar(const Series& f, int i) {
  const auto& cx = *f.ctx();
  if (i < 0 || i >= cx.nvars()) throw Error("dvar: variable index out of range");
  const auto& R = *cx.base();
  Series r = Series::zero(f.ctx());
  for (int idx = 0; idx < cx.size(); ++idx) {
    if (cx.degree(idx) > f.valid_deg()) continue;
    const auto& e = cx.exponents(idx);
    if (e[i] == 0) continue;
    std::vector<int> t(e);
    t[i] -= 1;
    r.coeff(cx.index_of(t)) = R.mul_int(f.coeff(idx), e[i]);
  }
  r.set_valid_deg(f.valid_deg() - 1);
  return r;
}

namespace {

/* Gauss-Jordan inverse of a matrix of ring elements with unit pivots */
std::vector<std::vector<RElem>> invert_matrix(const BaseRing& R,
                                              std::vector<std::vector<RElem>> A) {
  const int d = static_cast<int>(A.size());
  std::vector<std::vector<RElem>> I(d, std::vector<RElem>(d, R.zero()));
  for (int i = 0; i < d; ++i) I[i][i] = R.one();
  for (int col = 0; col < d; ++col) {
    int piv = -1;
    for (int row = col; row < d; ++row)
      if (R.is_unit(A[row][col])) {
        piv = row;
        break;
      }
    if (piv < 0) throw NotAUnit("linear map is not invertible over the base ring");
    std::swap(A[piv], A[col]);
    std::swap(I[piv], I[col]);
    RElem s = R.inv(A[col][col]);
    for (int j = 0; j < d; ++j) {
      A[col][j] = R.mul(A[col][j], s);
      I[col][j] = R.mul(I[col][j], s);
    }
    for (int row = 0; row < d; ++row) {
      if (row == col) continue;
      RElem t = A[row][col];
      if (exactly_zero(R, t)) continue;
      for (int j = 0; j < d; ++j) {
        A[row][j] = R.sub(A[row][j], R.mul(t, A[col][j]));
        I[row][j] = R.sub(I[row][j], R.mul(t, I[col][j]));
      }
    }
  }
  return I;
}

}  // namespace

std::vector<Series> invert_map(const std::vector<Series>& F) {
  if (F.empty()) throw Error("invert_map: empty map");
  CtxHandle ctx = F[0].ctx();
  const auto& cx = *ctx;
  const auto& Rh = cx.base();
  const auto& R = *Rh;
  const int d = cx.nvars();
  if (static_cast<int>(F.size()) != d)
    throw Error("invert_map: expected one component per variable");
  const int N = cx.N();
  for (const auto& f : F) {
    if (!f.ctx()->same(cx)) throw MixedContext("invert_map: mixed contexts");
    if (f.valid_deg() < N)
      throw PrecisionLoss("invert_map: components must be trusted to full degree");
    if (R.is_unit(f.constant_term()))
      throw Error("invert_map: component constant term not in the maximal ideal");
  }

  /* split off base-ring constant terms: F = c + F1 with F1(0) = 0 */
  std::vector<RElem> c0(d, R.zero());
  std::vector<Series> F1 = F;
  bool has_const = false;
  for (int i = 0; i < d; ++i) {
    c0[i] = F[i].constant_term();
    if (!exactly_zero(R, c0[i])) has_const = true;
    F1[i].coeff(0) = R.zero();
  }

  /* linear part and its inverse */
  std::vector<std::vector<RElem>> L(d, std::vector<RElem>(d, R.zero()));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      std::vector<int> e(d, 0);
      e[j] = 1;
      L[i][j] = F1[i].coeff(e);
    }
  auto Linv = invert_matrix(R, L);

  /* degreewise correction: after step n, F1(G) = id mod degree n+1 */
  std::vector<Series> G(d);
  for (int i = 0; i < d; ++i) {
    G[i] = Series::zero(ctx);
    for (int j = 0; j < d; ++j)
      G[i] = G[i] + Series::variable(ctx, j).scaled(Linv[i][j]);
  }
  for (int n = 2; n <= N; ++n) {
    std::vector<Series> E(d);
    bool all_zero = true;
    for (int i = 0; i < d; ++i) {
      E[i] = subst(F1[i], G) - Series::variable(ctx, i);
      if (!E[i].is_zero()) all_zero = false;
    }
    if (all_zero) break;
    for (int i = 0; i < d; ++i) {
      Series delta = Series::zero(ctx);
      for (int j = 0; j < d; ++j)
        delta = delta + E[j].homogeneous_part(n).scaled(Linv[i][j]);
      G[i] = G[i] - delta;
    }
  }
  for (int i = 0; i < d; ++i) {
    Series check = subst(F1[i], G);
    if (!check.equal(Series::variable(ctx, i)))
      throw Inconsistent("invert_map: inversion did not converge");
  }

  if (has_const) {
    /* F(x) = y  <=>  F1(x) = y - c, so postcompose with the shift y - c */
    std::vector<Series> shift(d);
    for (int j = 0; j < d; ++j)
      shift[j] = Series::variable(ctx, j) - Series::constant(ctx, c0[j]);
    for (int i = 0; i < d; ++i) G[i] = subst(G[i], shift);
  }
  /* the inverse of a polynomial map is a power series in general: the
   * components computed here agree with it only up to the truncation */
  for (auto& g : G) g.clear_entire();
  return G;
}

}  // namespace wildquot
