#pragma once

#include <string>
#include <vector>

#include "wildquot/automorphism.hpp"
#include "wildquot/ramification.hpp"
#include "wildquot/series.hpp"

namespace wildquot {

enum class Verdict { Regular, NotRegular, Undetermined };
const char* verdict_name(Verdict v);

/* Kernel of sigma - 1 on the truncated model, i.e. the invariant ring
 * A = B^sigma as far as the truncation sees it.  B truncated is a free
 * module of rank size * coeff_len over Z/p^M (over F_p for a field
 * base), sigma - 1 is a linear endomorphism of it, and the kernel is
 * computed by exact Smith-style elimination.
 *
 * `basis` holds the full-additive-order generators: every one is
 * invariant at full working precision, and these are the directions a
 * genuine invariant of the complete ring can reduce to.  Kernel
 * generators of lower additive order exist only because coefficients
 * are truncated mod p^M (p^{M-1} x is "invariant" whenever sigma(x) - x
 * is divisible by p); they are reported separately as artifacts and are
 * excluded from all ring-theoretic conclusions. */
struct InvariantKernel {
  CtxHandle ctx;
  std::vector<Series> basis;
  std::vector<Series> artifacts;
  std::vector<int> artifact_orders; /* additive order exponents < M */
  std::vector<int> rank_by_degree;  /* basis elements with low_degree == d */
};

InvariantKernel invar_kernel(const LocalAutomorphism& s);
/* joint kernel of several commuting automorphisms of one context (the
 * invariants of the group they generate) */
InvariantKernel invar_kernel_group(const std::vector<LocalAutomorphism>& gens);

/* dim_k m_A / m_A^2 of the truncated invariant ring, by linear algebra:
 * filter the kernel basis to the maximal ideal m_A, span m_A^2 by
 * pairwise products closed under multiplication by m_A, and count the
 * residual k-dimension.  The kernel's artifact span is quotiented out of
 * both sides first: free kernel generators are canonical only up to that
 * torsion, and directions a p-power kills carry no residue content.
 * `generators` are representatives of a basis of m_A / m_A^2 (by
 * Nakayama, ideal generators of m_A).  The verdict at this single
 * truncation is Regular iff embedding_dim equals the Krull dimension d;
 * an embedding dimension below d means the window is too coarse to see
 * all parameters and yields Undetermined. */
struct EmbeddingDim {
  int dim = 0;           /* Krull dimension d of B (= dim A) */
  int embedding_dim = 0; /* dim_k m_A / m_A^2 at the truncation */
  Verdict verdict = Verdict::Undetermined;
  std::vector<Series> generators;
};
EmbeddingDim invar_embedding_dim(const InvariantKernel& k);

/* Combined report at two truncations.  `s_fine` carries the automorphism
 * at truncation N + delta_trunc; the report computes kernel and
 * embedding dimension at the working truncation N (via restriction) and
 * again at N + delta_trunc, and downgrades the verdict to Undetermined
 * unless the two agree.  Truncation can understate relations, so
 * stability across the pair is the practical criterion. */
struct InvariantRingReport {
  InvariantKernel kernel; /* at the working truncation N */
  std::vector<Series> algebra_generators;
  int dim = 0;
  int embedding_dim = 0;
  int embedding_dim_fine = 0;
  Verdict verdict = Verdict::Undetermined;
  bool stable = false;
  int delta_trunc = 0;
};
InvariantRingReport invar_report(const LocalAutomorphism& s_fine,
                                 int delta_trunc = 4);

/* The two-branch disjunction of the main regularity criterion:
 * I_sigma = (sigma(pi) - pi) means the difference itself generates (and
 * is then a unit times pi^delta); the alternative is that the
 * difference lies one power higher, in (pi^{delta+1}). */
enum class CondII { None, GeneratedByPiDifference, DifferenceInHigherPower };
const char* cond_ii_name(CondII c);

/* Hypothesis check for the regularity criterion: find a regular
 * parameter pi with (i) I_sigma = (pi^delta) and (ii) the disjunction
 * above.  Inclusion I_sigma <= (pi^delta) is read off pi-adic
 * valuations; the converse membership pi^delta in I_sigma is decided
 * degreewise by exact linear algebra over the coefficient base (the
 * ideal is spanned at truncation by monomial multiples of its
 * generators).  Candidates default to default_pi_candidates. */
struct TheoremCheck {
  bool applicable = false;
  Series pi; /* defined only when cond_i held for some candidate */
  i64 delta = 0;
  bool cond_i = false;
  CondII cond_ii = CondII::None;
  std::string witness; /* per-candidate diagnostic lines */
};
TheoremCheck invar_check_theorem(const LocalAutomorphism& s,
                                 const std::vector<Series>& candidate_pis = {});
/* the variables, and the base uniformizer over a DVR */
std::vector<Series> default_pi_candidates(const LocalAutomorphism& s);

/* Case I(b), totally wildly ramified: the norm
 * lambda = prod_i sigma^i(pi) is an invariant generator of the height-one
 * prime under pi.  Requires sigma(pi) - pi = u pi^delta with u a unit of
 * B (WrongCase otherwise).  The certificate checks sigma(lambda) =
 * lambda at precision, lambda ~ pi^p, and re-derives the residue trace
 * form whose unit value makes the reduction Abar = Bbar surjective. */
struct NormUniformizer {
  Series lambda;
  Series unit;    /* lambda / pi^p, a unit of B */
  Series trace_s; /* residue trace-form constant, a unit of Bbar */
  int trace_samples = 0;
};
NormUniformizer invar_norm_uniformizer(const LocalAutomorphism& s,
                                       const PiAdicContext& P);

/* Case II(b), fiercely ramified: successive approximation of an
 * invariant regular parameter lambda = (unit) * pi.  Step 1 multiplies
 * by a unit u_1 with theta(u_1)/u_1 = -[ (sigma(pi)-pi) / pi^{delta+1} ];
 * step n >= 2 rebases the pi-adic context at the current lambda and
 * multiplies by 1 + a lambda^{n-1} where theta(a) = -[ defect /
 * lambda^{delta+n} ].  Each step certifies one more order of invariance;
 * the loop ends when the defect vanishes at precision.  A residue
 * equation with no solution contradicts the hypotheses upstream and
 * raises HypothesisViolated; PrecisionLoss is raised if precision is
 * exhausted before the defect vanishes. */
struct FierceUniformizer {
  Series lambda;
  Series unit; /* lambda / pi, a unit of B */
  int steps = 0;
};
FierceUniformizer invar_fierce_uniformizer(const LocalAutomorphism& s,
                                           const PiAdicContext& P);

/* Completion of the fierce case: Abar = A/(lambda) is the kernel of the
 * residue derivation, so a regular parameter system of that kernel ring
 * (first adapted parameter to the p-th power, the others unchanged)
 * lifts to invariant elements of B by the same successive
 * approximation; lambda is now exactly invariant, so no rebasing is
 * needed.  Together with lambda the lifts give d = dim B generators of
 * the maximal ideal of A. */
struct FierceGenerators {
  Series lambda;
  std::vector<Series> params; /* invariant lifts, sigma(y) = y at precision */
  std::vector<int> steps;     /* correction steps taken per parameter */
};
FierceGenerators invar_fierce_complete(const LocalAutomorphism& s,
                                       const PiAdicContext& P,
                                       const Series& lambda);

}  // namespace wildquot
