#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wildquot/series.hpp"

namespace wildquot {

/* Result of checking sigma^p = id on the truncated model.  The check is
 * exact up to the intrinsic precision of the model: composing maps whose
 * images carry base-ring constants leaves degree-t coefficients certified
 * mod u^{min_prec}-style bounds, which the certificate reports. */
struct OrderCertificate {
  bool ok = false;
  i64 p = 0;
  int checked_deg = -1;  /* composite compared up to this total degree */
  int min_prec = 0;      /* weakest coefficient precision entering the comparison */
  std::string failure;   /* empty when ok */
};

/* An order-p automorphism of B = R[[x_1..x_d]] (truncated): a coefficient
 * action on R (trivial when absent) plus one image per variable.  The
 * order is verified at construction; NotOrderP is raised otherwise. */
class LocalAutomorphism {
 public:
  static LocalAutomorphism make(CtxHandle B, std::vector<Series> images, i64 p);
  static LocalAutomorphism make(CtxHandle B, DvrAutomorphism base,
                                std::vector<Series> images, i64 p);

  const CtxHandle& ctx() const { return B_; }
  i64 p() const { return p_; }
  bool trivial_on_base() const { return !base_.has_value(); }
  const DvrAutomorphism& base() const;
  const std::vector<Series>& images() const { return images_; }
  const OrderCertificate& certificate() const { return cert_; }

  Series apply(const Series& f) const;
  Series apply_iter(const Series& f, i64 k) const;
  RElem apply_base(const RElem& c) const;

  /* the same automorphism on a coarser truncation of the same ring */
  LocalAutomorphism restricted(const CtxHandle& coarser) const;

 private:
  CtxHandle B_;
  std::optional<DvrAutomorphism> base_;
  std::vector<Series> images_;
  i64 p_ = 0;
  OrderCertificate cert_;
};

/* sigma^p = id check without constructing; used by the CLI for reporting */
OrderCertificate verify_order(const CtxHandle& B,
                              const std::optional<DvrAutomorphism>& base,
                              const std::vector<Series>& images, i64 p);

/* Generators of I_sigma = (sigma(x_i) - x_i, sigma(u) - u).  Differences
 * sigma(f) - f for arbitrary f lie in this ideal (see the note in the
 * implementation), so valuation minima over these generators are minima
 * over the whole ideal. */
struct IsigmaGens {
  std::vector<Series> gens;
  std::vector<std::string> names; /* "x", "y", ..., "u" */
};
IsigmaGens isigma(const LocalAutomorphism& s);

/* delta = v_pi(I_sigma), with the per-generator readings and the reading
 * of sigma(pi) - pi (which is >= delta automatically). */
struct DeltaReport {
  i64 delta = 0;
  bool exact = true;
  std::vector<Valuation> gen_vals;
  std::vector<std::string> gen_names;
  Valuation pi_val; /* v(sigma(pi) - pi) */
};
DeltaReport autom_delta(const LocalAutomorphism& s, const PiAdicContext& P);

/* Trichotomy for d = 1 over a DVR base: is I_sigma generated by a power
 * of the uniformizer?  With f = sigma(x) - x = sum a_i x^i,
 * mu = v(sigma(u) - u), nu = min_i v(a_i):
 *   Case I  : mu <= nu          => I = (u^mu)
 *   Case II : v(a_0) = nu < mu  => I = (u^nu)
 *   otherwise not a power of u; (mu, nu, v(a_0)) is the witness. */
enum class PrincipalityCase { CaseI, CaseII, NotPrincipal };

struct PrincipalityReport {
  PrincipalityCase kind = PrincipalityCase::NotPrincipal;
  bool sigma_trivial_on_base = false;
  Valuation mu;   /* meaningful only when sigma acts on R */
  Valuation nu;
  Valuation v_a0;
  i64 power = -1; /* I = (u^power) in Cases I/II */
};
PrincipalityReport principality(const LocalAutomorphism& s);

/* Families with order p by construction (still re-verified):
 *   translation: sigma(x) = x + (sigma_R(g) - g) for a constant g in R
 *     (telescoping makes sigma^p exact);
 *   scaling: sigma(x) = (sigma_R(w)/w) x for a unit w in R (the cocycle
 *     has norm 1);
 *   conjugation: phi^{-1} o sigma o phi for a coordinate change phi. */
LocalAutomorphism translation_family(CtxHandle B, const DvrAutomorphism& base,
                                     const RElem& g);
LocalAutomorphism scaling_family(CtxHandle B, const DvrAutomorphism& base,
                                 const RElem& w);
LocalAutomorphism conjugation(const LocalAutomorphism& s,
                              const std::vector<Series>& phi);

}  // namespace wildquot
