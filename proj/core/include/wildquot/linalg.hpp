#pragma once

#include <vector>

#include "wildquot/zmod.hpp"

namespace wildquot {

/* Exact linear algebra over Z/p^M.  Z/p^M is a local principal ideal
 * ring, so every matrix admits a diagonal (Smith-style) form with
 * p-power pivots, and every row span has a canonical Howell basis; both
 * are computed by plain elimination because any entry of minimal
 * p-valuation divides the rest. */

using Vec = std::vector<i64>;
using Mat = std::vector<Vec>;

/* Canonical basis of the row span of a set of generators (a module in
 * (Z/p^M)^n).  Supports membership tests, equality of spans, and the
 * module's size. */
class Howell {
 public:
  Howell(Mat gens, i64 p, int M, int ncols);

  const Mat& rows() const { return rows_; }
  const std::vector<int>& pivot_cols() const { return pivot_cols_; }
  const std::vector<int>& pivot_vals() const { return pivot_vals_; }
  int ncols() const { return n_; }

  bool contains(Vec v) const;
  bool same_span(const Howell& o) const;
  /* log_p of the number of elements of the module */
  i64 log_size() const;

 private:
  i64 p_, q_;
  int M_, n_;
  Mat rows_;
  std::vector<int> pivot_cols_, pivot_vals_;
};

struct KernelGen {
  Vec v;
  int order_exp;  /* the generator has additive order p^{order_exp} */
};

/* Right kernel { v : mat v = 0 } of an m x n matrix over Z/p^M, via a
 * Smith-style reduction with tracked column operations.  Generators of
 * order p^M ("full order") are genuine directions; generators of lower
 * order only exist because the coefficients are truncated. */
std::vector<KernelGen> kernel_mod_pM(const Mat& mat, i64 p, int M, int ncols);

}  // namespace wildquot
