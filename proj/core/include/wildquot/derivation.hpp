#pragma once

#include <cstdint>
#include <vector>

#include "wildquot/series.hpp"

namespace wildquot {

/* A continuous k-derivation theta of k[[x_1,...,x_d]] over a finite
 * field k, represented by its values theta(x_i) on the variables.  The
 * action on arbitrary series is forced by k-linearity, the Leibniz rule
 * and continuity:
 *     theta(f) = sum_i (df/dx_i) * theta(x_i).
 * Each application consumes one degree of truncation, since the partial
 * derivative of a series trusted through degree N is trusted through
 * N - 1. */
class Derivation {
 public:
  /* `values` lists theta(x_i) in the order of B's variables; they need
   * not lie in the maximal ideal (d/dx_1 has value 1).  Requires a
   * finite-field coefficient ring. */
  static Derivation make(CtxHandle B, std::vector<Series> values);

  const CtxHandle& ctx() const { return ctx_; }
  const std::vector<Series>& values() const { return values_; }
  Series apply(const Series& f) const;
  Series apply_iter(const Series& f, int k) const;
  bool is_zero() const;

 private:
  Derivation() = default;
  CtxHandle ctx_;
  std::vector<Series> values_;
};

/* For theta with theta^p = a*theta and nonzero induced map m/m^2 -> k,
 * verifies the proportionality and returns a = theta(x_j)^{-1} *
 * theta^p(x_j) computed at a variable with unit value.  Throws
 * HypothesisViolated when no theta(x_i) is a unit, NotPLie (with the
 * witness variable in the message) when some theta^p(x_i) != a*theta(x_i)
 * at the comparable truncation. */
Series deriv_check_plie(const Derivation& th);

/* Coordinates adapted to theta: in the new parameters, theta(x_1') is a
 * unit with constant term 1 and theta(x_i') = 0 for i > 1, enforced and
 * verified through total degree `checked_deg`.  new_params[i] expresses
 * the new parameter in the original variables; old_in_new is the inverse
 * substitution.  `h` is theta(x_1') written in the new coordinates, so
 * that theta acts there as h * d/dx_1. */
struct NormalizedFrame {
  CtxHandle ctx;
  long long p = 0;
  std::vector<Series> new_params;
  std::vector<Series> old_in_new;
  Series h;
  int checked_deg = 0;
};

/* Builds a NormalizedFrame by the stagewise correction x_i += Delta_i,
 * Delta_i a degree-(n+1) form with theta(Delta_i) cancelling the
 * degree-n obstruction.  The correction divides by (l_1 + 1) on the
 * x_1-degree, which is possible precisely when l_1 != -1 mod p; a
 * nonzero obstruction coefficient at l_1 = -1 mod p contradicts the
 * p-Lie hypothesis and raises HypothesisViolated. */
NormalizedFrame deriv_normalize(const Derivation& th);

/* Writes f (given in the original coordinates) as
 *     f = a_0 + a_1*x_1' + ... + a_{p-1}*x_1'^{p-1}
 * with each a_i in the kernel ring A = k[[x_1'^p, x_2', ..., x_d']].
 * The returned components are expressed in the new coordinates of the
 * frame; kernel_recompose inverts the decomposition back to the
 * original coordinates. */
std::vector<Series> kernel_components(const NormalizedFrame& fr,
                                      const Series& f);
Series kernel_recompose(const NormalizedFrame& fr,
                        const std::vector<Series>& comps);
bool in_kernel(const NormalizedFrame& fr, const Series& f);

/* Kernel-ring description plus a randomized decomposition certificate:
 * ring_gens lists x_1'^p, x_2', ..., x_d' in the original coordinates,
 * and `certified` records that `trials` random series decomposed and
 * recomposed exactly at truncation. */
struct KernelDecomp {
  std::vector<Series> ring_gens;
  bool certified = false;
  int trials = 0;
};
KernelDecomp deriv_kernel_decomp(const NormalizedFrame& fr, int trials = 8,
                                 std::uint64_t seed = 1);

/* Solves theta(f0) = g for f0 with no kernel component (f0 lies in
 * A*x_1' + ... + A*x_1'^{p-1}).  Input and output are in the original
 * coordinates.  Throws NotInImage when g is not a value of theta at the
 * truncation, i.e. when g/h carries a monomial with x_1'-degree
 * -1 mod p. */
Series deriv_solve_exact(const NormalizedFrame& fr, const Series& g);

/* Solves theta(u) = g*u for a unit u with constant term 1 and no kernel
 * components in degrees >= 1, degree by degree.  Throws Inconsistent
 * when the triangular system has no solution at the truncation (g is
 * then not the logarithmic derivative of a unit). */
Series deriv_solve_logderiv(const NormalizedFrame& fr, const Series& g);

}  // namespace wildquot
