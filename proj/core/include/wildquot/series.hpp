#pragma once

#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "wildquot/base_ring.hpp"

namespace wildquot {

class SeriesContext;
using CtxHandle = std::shared_ptr<const SeriesContext>;

/* A truncation context: the ring B = R[[x_1..x_d]] cut off at total
 * degree N in the variables, over a BaseRing R (DVR or finite field).
 * Monomials are enumerated by (total degree, lex) and addressed by
 * index. */
class SeriesContext : public std::enable_shared_from_this<SeriesContext> {
 public:
  static CtxHandle make(RingHandle base, std::vector<std::string> vars, int N);

  const RingHandle& base() const { return base_; }
  const std::vector<std::string>& vars() const { return vars_; }
  int nvars() const { return static_cast<int>(vars_.size()); }
  int N() const { return N_; }
  int size() const { return static_cast<int>(exps_.size()); }
  const std::vector<int>& exponents(int idx) const { return exps_[idx]; }
  int degree(int idx) const { return deg_[idx]; }
  int index_of(const std::vector<int>& e) const; /* -1 when out of range */
  int prod_index(int i, int j) const;            /* -1 on degree overflow */
  int var_index(const std::string& name) const;  /* -1 when absent */
  bool same(const SeriesContext& o) const;
  /* Krull dimension of the modeled ring: nvars + 1 over a DVR */
  int dim() const { return nvars() + (base_->is_field() ? 0 : 1); }

  CtxHandle with_truncation(int newN) const;
  CtxHandle with_base(RingHandle newBase) const;
  CtxHandle without_var(int j) const;

  std::string monomial_str(int idx) const;

 private:
  SeriesContext() = default;
  static u64 pack(const std::vector<int>& e);

  RingHandle base_;
  std::vector<std::string> vars_;
  int N_ = 0;
  std::vector<std::vector<int>> exps_;
  std::vector<int> deg_;
  std::unordered_map<u64, int> index_;
  std::vector<int> prod_;  /* size*size lookup when small, else empty */
};

/* Element of a SeriesContext.  `valid_deg` marks the largest total
 * degree whose coefficients are meaningful; operations that consume a
 * degree of truncation (partial derivatives, division by a variable)
 * lower it.  Coefficient-level precision travels inside the RElems. */
class Series {
 public:
  Series() = default;

  static Series zero(CtxHandle c);
  static Series one(CtxHandle c);
  static Series from_int(CtxHandle c, i64 n);
  static Series constant(CtxHandle c, RElem v);
  static Series variable(CtxHandle c, int i);
  static Series uniformizer(CtxHandle c); /* u as a constant series */

  const CtxHandle& ctx() const { return ctx_; }
  int valid_deg() const { return valid_deg_; }
  void set_valid_deg(int d);
  bool defined() const { return static_cast<bool>(ctx_); }

  /* An entire element is exactly the stored polynomial: every coefficient
   * beyond the truncation is known to be zero, so substitution needs no
   * allowance for an unknown tail.  Explicit constructors produce entire
   * elements; arithmetic keeps the flag only when the result is still an
   * exact polynomial within the truncation; lowering valid_deg drops it.
   * The flag can only ever be cleared from outside, never set. */
  bool entire() const { return entire_; }
  void clear_entire() { entire_ = false; }

  const RElem& coeff(int idx) const { return c_[idx]; }
  RElem& coeff(int idx) { return c_[idx]; }
  const RElem& coeff(const std::vector<int>& e) const;
  void set_coeff(const std::vector<int>& e, RElem v);
  RElem constant_term() const { return c_[0]; }

  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator-() const;
  Series operator*(const Series& o) const;
  Series scaled(const RElem& a) const;
  Series scaled_int(i64 n) const;
  Series pow(u64 k) const;
  /* inverse of a unit (constant term of valuation 0); NotAUnit else */
  Series inv() const;

  bool is_zero() const;             /* at precision, within valid_deg */
  bool equal(const Series& o) const;
  /* smallest total degree with a coefficient nonzero at precision;
   * valid_deg+1 when none */
  int low_degree() const;

  /* restriction to a coarser truncation of the same ring (exact) */
  Series restricted(const CtxHandle& coarser) const;
  Series homogeneous_part(int n) const;
  Series truncate_above(int n) const; /* drop degrees > n, keep valid_deg */

  std::string str() const;

 private:
  friend Series subst_mapped(const Series&, const std::vector<Series>&,
                             const CtxHandle&, const std::function<RElem(const RElem&)>&);
  CtxHandle ctx_;
  std::vector<RElem> c_;
  int valid_deg_ = 0;
  bool entire_ = false;
  void check_same(const Series& o) const;
};

/* Substitution x_i -> images[i].  Images live in a common context over
 * the same coefficient ring (possibly with different variables); each
 * image must have its constant term in the maximal ideal, else
 * SubstitutionEscapesMaximalIdeal.  Coefficients are passed through
 * `base_map` first.  Truncation-tail contributions are accounted for in
 * the per-coefficient precision of the result. */
Series subst(const Series& f, const std::vector<Series>& images);
Series subst(const Series& f, const std::vector<Series>& images,
             const DvrAutomorphism& base_map);
Series subst_mapped(const Series& f, const std::vector<Series>& images,
                    const CtxHandle& target,
                    const std::function<RElem(const RElem&)>& coeff_map);

/* partial derivative; costs one degree of truncation */
Series dvar(const Series& f, int i);

/* Inverse of a local coordinate change F (F_i in the maximal ideal,
 * unit Jacobian): returns G with F o G = G o F = id at truncation. */
std::vector<Series> invert_map(const std::vector<Series>& F);

/* ------------------------------------------------------------------ */

enum class PiShape { BaseUniformizer, VariableCoord };

/* Fixes a regular parameter pi of B and provides pi-adic valuation,
 * division, reduction to Bbar = B/(pi), and leading-unit brackets.
 * Two canonical shapes are supported:
 *   - pi = u * (unit series): Bbar = k[[x_1..x_d]] over the residue field;
 *   - pi = a variable up to an invertible change of coordinates:
 *     Bbar = R[[remaining variables]].
 * A pi that fits neither shape raises NotRegularParameter. */
class PiAdicContext {
 public:
  static PiAdicContext make(CtxHandle B, Series pi);

  const CtxHandle& B() const { return B_; }
  const CtxHandle& bar() const { return bar_; }
  const Series& pi() const { return pi_; }
  PiShape shape() const { return shape_; }
  int var() const { return var_; }
  /* characteristic of the residue field L-bar of the pi-adic valuation */
  i64 residue_char() const;

  Valuation pival(const Series& f) const;
  /* f / pi^k inside B; requires a certified pival(f) >= k */
  Series divide(const Series& f, i64 k) const;
  /* f mod pi, in Bbar */
  Series reduce(const Series& f) const;
  /* (f / pi^k) mod pi, in Bbar */
  Series reduce_shifted(const Series& f, i64 k) const;
  /* leading unit [f]_pi = (f * pi^{-pival(f)}) mod pi; PrecisionLoss when
   * the valuation cannot be certified or the class vanishes */
  Series bracket(const Series& f) const;
  /* a set-theoretic section of reduce */
  Series lift(const Series& fbar) const;

  Series to_pi_coords(const Series& f) const;
  Series from_pi_coords(const Series& f) const;

 private:
  CtxHandle B_, bar_;
  Series pi_;
  PiShape shape_ = PiShape::BaseUniformizer;
  int var_ = -1;
  Series unit_part_, unit_part_inv_; /* BaseUniformizer shape: pi = u*w */
  bool trivial_change_ = true;       /* VariableCoord: pi is literally a variable */
  std::vector<Series> to_new_, to_old_;
};

}  // namespace wildquot
