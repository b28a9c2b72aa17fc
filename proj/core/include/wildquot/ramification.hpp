#pragma once

#include <optional>
#include <vector>

#include "wildquot/automorphism.hpp"
#include "wildquot/derivation.hpp"
#include "wildquot/series.hpp"

namespace wildquot {

/* Ramification type of the degree-p extension Frac(B) / Frac(B)^sigma at
 * the pi-adic valuation:
 *   Unramified: delta = 0 (residue extension Galois of degree p);
 *   TameTotal:  e = p with residue characteristic != p;
 *   WildTotal:  e = p with residue characteristic p;
 *   Fierce:     e = 1 and the residue extension is purely inseparable. */
enum class RamTag { Unramified, TameTotal, WildTotal, Fierce };

/* The residue derivation attached to a fierce extension:
 * theta(xbar) = (sigma(x) - x) / pi^delta mod pi, a nonzero derivation
 * of Lbar with kernel exactly Kbar and theta^p = a * theta.  `a` is
 * computed when some theta(x_i) is a unit (it then lies in the modeled
 * integral part of Lbar); otherwise it is left unset. */
struct FierceDerivation {
  Derivation theta;
  std::optional<Series> a;
};

struct RamificationReport {
  RamTag tag = RamTag::Unramified;
  DeltaReport delta;
  long long residue_char = 0;
  /* (sigma(pi) - pi) / pi^delta mod pi; nonzero exactly in the total
   * cases.  Defined whenever delta >= 1. */
  Series theta_pi_of_pi;
  std::optional<FierceDerivation> fierce;
};

const char* ram_tag_name(RamTag t);

/* The additive map x -> (sigma(x) - x) / pi^delta mod pi on the modeled
 * integral elements; requires an exactly-known delta. */
Series ram_theta_tilde(const LocalAutomorphism& s, const PiAdicContext& P,
                       const Series& x);

/* Classification along P's uniformizer:
 *   delta = 0                    -> Unramified
 *   theta_tilde(pi) != 0         -> total; tame iff residue char != p
 *   theta_tilde(pi) == 0, delta>0 -> Fierce (with the residue derivation).
 * Throws PrecisionLoss when delta or the deciding valuation cannot be
 * certified, CrossCheckFailed when the numerics contradict a theorem
 * (tame with delta != 1, or a fierce signature in residue
 * characteristic 0). */
RamificationReport ram_classify(const LocalAutomorphism& s,
                                const PiAdicContext& P);

/* Approximation of x by an invariant element: given
 * v(sigma(x) - x) >= delta + n, returns y with y = x mod pi^n built
 * digit by digit through the kernel of the residue derivation.  Each
 * digit is lifted from Kbar, so sigma(y) - y gains one order of
 * invariance over a generic element; exact inputs short-circuit to x.
 * Requires the fierce case and an invariant-at-precision uniformizer. */
Series ram_invariant_approx(const LocalAutomorphism& s,
                            const PiAdicContext& P, const Series& x, int n);

/* Trace form of a totally wildly ramified extension with delta >= 2.
 * `s` is the residue element with Tr(x * pi^{-(p-1)(delta-1)}) =
 * s * xbar mod pi, computed from the closed form -[sigma(pi)-pi]^{p-1}
 * and cross-checked against direct trace sums for sampled x and against
 * the annihilation identities Tr(pi^i P'(pi)^{-1}) = 0 (i < p-1), = 1
 * (i = p-1).  Mismatches raise CrossCheckFailed. */
struct TraceFormReport {
  Series s;            /* in the residue ring of P */
  long long delta = 0;
  long long m = 0;     /* the twist (p-1)(delta-1) */
  int samples = 0;     /* direct-trace cross-check sample count */
};
TraceFormReport ram_trace_form(const LocalAutomorphism& s,
                               const PiAdicContext& P);

}  // namespace wildquot
