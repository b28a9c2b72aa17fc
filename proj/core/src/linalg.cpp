#include "wildquot/linalg.hpp"

#include <algorithm>

namespace wildquot {

namespace {

int vval(i64 a, i64 p, int M) { return zmod::valp(a, p, M); }

void row_submul(Vec& target, const Vec& src, i64 t, i64 q) {
  for (size_t i = 0; i < target.size(); ++i)
    target[i] = zmod::sub(target[i], zmod::mul(t, src[i], q), q);
}

}  // namespace

Howell::Howell(Mat gens, i64 p, int M, int ncols)
    : p_(p), q_(zmod::pow_checked(p, M)), M_(M), n_(ncols) {
  for (auto& r : gens) {
    if (static_cast<int>(r.size()) != n_) r.resize(n_, 0);
    for (auto& x : r) x = zmod::norm(x, q_);
  }
  Mat work = std::move(gens);
  for (int col = 0; col < n_; ++col) {
    /* pick the row of minimal valuation at this column among untouched rows */
    int best = -1, bestv = M_;
    for (size_t i = 0; i < work.size(); ++i) {
      int v = vval(work[i][col], p_, M_);
      if (v < bestv) {
        bestv = v;
        best = static_cast<int>(i);
      }
    }
    if (best < 0 || bestv >= M_) continue;
    Vec piv = work[best];
    work.erase(work.begin() + best);
    /* normalize: pivot entry becomes exactly p^bestv */
    i64 unit = piv[col] / zmod::pow_checked(p_, bestv);
    i64 ui = zmod::inv(zmod::norm(unit, q_), q_);
    for (auto& x : piv) x = zmod::mul(x, ui, q_);
    i64 pv = zmod::pow_checked(p_, bestv);
    /* eliminate the column from the remaining generators */
    for (auto& r : work) {
      if (r[col] == 0) continue;
      i64 t = r[col] / pv; /* divisible: val >= bestv by minimality */
      row_submul(r, piv, t, q_);
    }
    /* Howell closure: p^{M-v} * pivot row still has entries past this
     * column; keep it so that span membership below stays decidable */
    if (bestv > 0) {
      Vec extra = piv;
      i64 s = zmod::pow_checked(p_, M_ - bestv);
      for (auto& x : extra) x = zmod::mul(x, s, q_);
      extra[col] = 0;
      bool nonzero = std::any_of(extra.begin(), extra.end(), [](i64 x) { return x != 0; });
      if (nonzero) work.push_back(std::move(extra));
    }
    rows_.push_back(std::move(piv));
    pivot_cols_.push_back(col);
    pivot_vals_.push_back(bestv);
  }
  /* reduce entries above each pivot modulo the pivot */
  for (size_t i = 0; i < rows_.size(); ++i) {
    for (size_t j = i + 1; j < rows_.size(); ++j) {
      int c = pivot_cols_[j];
      i64 pv = zmod::pow_checked(p_, pivot_vals_[j]);
      i64 t = rows_[i][c] / pv;
      if (t != 0) row_submul(rows_[i], rows_[j], t, q_);
    }
  }
}

bool Howell::contains(Vec v) const {
  if (static_cast<int>(v.size()) != n_) v.resize(n_, 0);
  for (auto& x : v) x = zmod::norm(x, q_);
  for (size_t i = 0; i < rows_.size(); ++i) {
    int c = pivot_cols_[i];
    if (v[c] == 0) continue;
    i64 pv = zmod::pow_checked(p_, pivot_vals_[i]);
    if (v[c] % pv != 0) return false;
    row_submul(v, rows_[i], v[c] / pv, q_);
  }
  return std::all_of(v.begin(), v.end(), [](i64 x) { return x == 0; });
}

bool Howell::same_span(const Howell& o) const {
  return rows_ == o.rows_ && pivot_cols_ == o.pivot_cols_;
}

i64 Howell::log_size() const {
  i64 s = 0;
  for (int v : pivot_vals_) s += M_ - v;
  return s;
}

std::vector<KernelGen> kernel_mod_pM(const Mat& mat, i64 p, int M, int ncols) {
  const i64 q = zmod::pow_checked(p, M);
  int m = static_cast<int>(mat.size());
  int n = ncols;
  Mat A(m, Vec(n, 0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < std::min<int>(n, mat[i].size()); ++j)
      A[i][j] = zmod::norm(mat[i][j], q);

  /* track column operations: x = V y, so kernel gens are columns of V
   * applied to the kernel of the diagonal form */
  Mat V(n, Vec(n, 0));
  for (int j = 0; j < n; ++j) V[j][j] = 1;
  auto col_swap = [&](int a, int b) {
    for (int i = 0; i < m; ++i) std::swap(A[i][a], A[i][b]);
    for (int i = 0; i < n; ++i) std::swap(V[i][a], V[i][b]);
  };
  auto col_submul = [&](int dst, int src, i64 t) {
    for (int i = 0; i < m; ++i) A[i][dst] = zmod::sub(A[i][dst], zmod::mul(t, A[i][src], q), q);
    for (int i = 0; i < n; ++i) V[i][dst] = zmod::sub(V[i][dst], zmod::mul(t, V[i][src], q), q);
  };

  std::vector<int> diag_val;
  int k = 0;
  for (; k < std::min(m, n); ++k) {
    int bi = -1, bj = -1, bv = M;
    for (int i = k; i < m; ++i)
      for (int j = k; j < n; ++j) {
        int v = vval(A[i][j], p, M);
        if (v < bv) {
          bv = v;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) break;
    if (bi != k) std::swap(A[bi], A[k]);
    if (bj != k) col_swap(bj, k);
    i64 pv = zmod::pow_checked(p, bv);
    i64 unit = zmod::norm(A[k][k] / pv, q);
    i64 ui = zmod::inv(unit, q);
    for (int j = k; j < n; ++j) A[k][j] = zmod::mul(A[k][j], ui, q);
    /* clear the column (row ops, no tracking needed) */
    for (int i = 0; i < m; ++i) {
      if (i == k || A[i][k] == 0) continue;
      i64 t = A[i][k] / pv;
      row_submul(A[i], A[k], t, q);
    }
    /* clear the row (column ops, tracked) */
    for (int j = k + 1; j < n; ++j) {
      if (A[k][j] == 0) continue;
      i64 t = A[k][j] / pv;
      col_submul(j, k, t);
    }
    diag_val.push_back(bv);
  }

  std::vector<KernelGen> gens;
  for (int j = 0; j < n; ++j) {
    int a = j < static_cast<int>(diag_val.size()) ? diag_val[j] : M;
    if (a == 0) continue; /* unit pivot: no kernel in this direction */
    i64 s = zmod::pow_checked(p, M - a);
    KernelGen g;
    g.order_exp = a;
    g.v.resize(n);
    for (int i = 0; i < n; ++i) g.v[i] = zmod::mul(V[i][j], s, q);
    gens.push_back(std::move(g));
  }
  return gens;
}

}  // namespace wildquot
