#include "wildquot/ramification.hpp"

#include <string>
#include <utility>
#include <vector>

#include "wildquot/errors.hpp"

namespace wildquot {

namespace {

void check_ctx(const LocalAutomorphism& s, const PiAdicContext& P) {
  if (!s.ctx()->same(*P.B()))
    throw MixedContext(
        "automorphism and pi-adic structure live on different rings");
}

i64 exact_delta(const LocalAutomorphism& s, const PiAdicContext& P,
                DeltaReport* out) {
  DeltaReport d = autom_delta(s, P);
  if (!d.exact)
    throw PrecisionLoss(
        "delta = v(I_sigma) is not certified exactly at this precision");
  if (out) *out = d;
  return d.delta;
}

}  // namespace

const char* ram_tag_name(RamTag t) {
  switch (t) {
    case RamTag::Unramified: return "Unramified";
    case RamTag::TameTotal: return "TameTotal";
    case RamTag::WildTotal: return "WildTotal";
    case RamTag::Fierce: return "Fierce";
  }
  return "?";
}

Series ram_theta_tilde(const LocalAutomorphism& s, const PiAdicContext& P,
                       const Series& x) {
  check_ctx(s, P);
  i64 delta = exact_delta(s, P, nullptr);
  return P.reduce_shifted(s.apply(x) - x, delta);
}

RamificationReport ram_classify(const LocalAutomorphism& s,
                                const PiAdicContext& P) {
  check_ctx(s, P);
  RamificationReport rep;
  exact_delta(s, P, &rep.delta);
  const i64 delta = rep.delta.delta;
  rep.residue_char = P.residue_char();

  if (delta == 0) {
    rep.tag = RamTag::Unramified;
    return rep;
  }

  rep.theta_pi_of_pi = P.reduce_shifted(s.apply(P.pi()) - P.pi(), delta);

  /* Total iff v(sigma(pi) - pi) = delta; fierce iff it exceeds delta. */
  const Valuation pv = rep.delta.pi_val;
  bool total;
  if (pv.exact && pv.value == delta) {
    total = true;
  } else if (pv.ge(delta + 1)) {
    total = false;
  } else {
    throw PrecisionLoss(
        "v(sigma(pi) - pi) cannot be separated from delta at this precision");
  }

  if (total) {
    rep.tag = (rep.residue_char != s.p()) ? RamTag::TameTotal
                                          : RamTag::WildTotal;
    if (rep.tag == RamTag::TameTotal && delta != 1)
      throw CrossCheckFailed(
          "tame total ramification forces delta = 1, computed delta = " +
          std::to_string(delta));
    return rep;
  }

  if (rep.residue_char != s.p())
    throw CrossCheckFailed(
        "fierce signature (delta >= 1, theta(pi) = 0) in residue "
        "characteristic " +
        std::to_string(rep.residue_char));

  /* The residue derivation theta(xbar) = (sigma(x) - x)/pi^delta mod pi;
   * in the fierce case the value is independent of the chosen lift. */
  const CtxHandle& bar = P.bar();
  std::vector<Series> vals;
  vals.reserve(bar->nvars());
  bool seen_nonzero = false;
  for (int b = 0; b < bar->nvars(); ++b) {
    Series gen = P.lift(Series::variable(bar, b));
    Series v = P.reduce_shifted(s.apply(gen) - gen, delta);
    seen_nonzero = seen_nonzero || !v.is_zero();
    vals.push_back(std::move(v));
  }
  if (!seen_nonzero)
    throw PrecisionLoss(
        "the residue derivation of a fierce extension vanished at working "
        "precision");

  FierceDerivation fd{Derivation::make(bar, std::move(vals)), std::nullopt};
  try {
    fd.a = deriv_check_plie(fd.theta);
  } catch (const HypothesisViolated&) {
    /* no variable carries a unit theta-value in this presentation, so the
     * proportionality coefficient is not representable integrally */
  }
  if (fd.a && !fd.theta.apply(*fd.a).is_zero())
    throw CrossCheckFailed(
        "the proportionality coefficient of the residue derivation escapes "
        "its kernel");

  rep.tag = RamTag::Fierce;
  rep.fierce = std::move(fd);
  return rep;
}

Series ram_invariant_approx(const LocalAutomorphism& s,
                            const PiAdicContext& P, const Series& x, int n) {
  check_ctx(s, P);
  if (!x.defined() || !x.ctx()->same(*P.B()))
    throw MixedContext("x must live on the ring of the pi-adic structure");
  if (n < 1) throw WrongShape("invariant approximation needs n >= 1");

  RamificationReport rep = ram_classify(s, P);
  if (rep.tag != RamTag::Fierce)
    throw WrongCase(
        std::string("invariant approximation applies to the fierce case, "
                    "not ") +
        ram_tag_name(rep.tag));
  const i64 delta = rep.delta.delta;

  Series diff = s.apply(x) - x;
  Valuation dv = P.pival(diff);
  if (!dv.ge(delta + n))
    throw HypothesisViolated("need v(sigma(x) - x) >= delta + n = " +
                             std::to_string(delta + n) + ", certified only " +
                             dv.str());
  /* already invariant at precision: the certified defect bound above is
   * the whole promise, and no digits need to be built */
  if (diff.is_zero()) return x;
  if (!rep.delta.pi_val.ge(delta + n))
    throw HypothesisViolated(
        "the uniformizer is not invariant to order delta + n");

  /* The hypothesis forces xbar into the kernel of the residue derivation. */
  if (!rep.fierce->theta.apply(P.reduce(x)).is_zero())
    throw Inconsistent(
        "residue of x escapes the kernel of the residue derivation");

  Series y = P.lift(P.reduce(x));
  for (int j = 2; j <= n; ++j) {
    Series a = P.divide(x - y, j - 1);
    y = y + P.lift(P.reduce(a)) * P.pi().pow(static_cast<u64>(j - 1));
  }
  if (!P.pival(x - y).ge(n))
    throw Inconsistent("digit peeling lost the congruence y = x mod pi^n");
  return y;
}

TraceFormReport ram_trace_form(const LocalAutomorphism& s,
                               const PiAdicContext& P) {
  check_ctx(s, P);
  RamificationReport rep = ram_classify(s, P);
  if (rep.tag != RamTag::WildTotal)
    throw WrongCase(
        std::string("the trace form is defined for totally wildly ramified "
                    "extensions, not ") +
        ram_tag_name(rep.tag));
  const i64 p = s.p();
  const i64 delta = rep.delta.delta;
  if (delta < 2) throw WrongCase("the trace form needs delta >= 2");
  const i64 m = (p - 1) * (delta - 1);

  std::vector<Series> sig_pi(static_cast<size_t>(p));
  sig_pi[0] = P.pi();
  for (i64 j = 1; j < p; ++j)
    sig_pi[static_cast<size_t>(j)] = s.apply(sig_pi[static_cast<size_t>(j - 1)]);

  auto shifted_unit = [&](const Series& f, const std::string& what) {
    Valuation v = P.pival(f);
    if (v.exact && v.value == delta) return P.divide(f, delta);
    if (v.ge(delta + 1))
      throw CrossCheckFailed("v(" + what + ") = " + v.str() + ", expected " +
                             std::to_string(delta));
    throw PrecisionLoss("v(" + what + ") uncertified at this precision");
  };

  /* v(sigma^i(pi) - pi) = delta with leading units scaling linearly in i */
  TraceFormReport out;
  out.delta = delta;
  out.m = m;
  Series brL;
  for (i64 i = 1; i < p; ++i) {
    Series lam = sig_pi[static_cast<size_t>(i)] - sig_pi[0];
    Series br = P.reduce(
        shifted_unit(lam, "sigma^" + std::to_string(i) + "(pi) - pi"));
    if (i == 1) {
      brL = br;
    } else if (!br.equal(brL.scaled_int(i))) {
      throw CrossCheckFailed(
          "leading units of sigma^i(pi) - pi do not scale linearly in i");
    }
  }
  out.s = -brL.pow(static_cast<u64>(p - 1));

  /* Units W_j = sigma^j(pi)/pi and U_j = sigma^j(P'(pi))/pi^{(p-1)delta} */
  std::vector<Series> W(static_cast<size_t>(p)), Winv_m(static_cast<size_t>(p)),
      Uinv(static_cast<size_t>(p));
  for (i64 j = 0; j < p; ++j) {
    W[static_cast<size_t>(j)] =
        (j == 0) ? Series::one(P.B())
                 : Series::one(P.B()) + P.divide(sig_pi[static_cast<size_t>(j)] - sig_pi[0], 1);
    Winv_m[static_cast<size_t>(j)] =
        W[static_cast<size_t>(j)].inv().pow(static_cast<u64>(m));
    Series U = Series::one(P.B());
    for (i64 i = 1; i < p; ++i) {
      Series factor = sig_pi[static_cast<size_t>(j)] -
                      sig_pi[static_cast<size_t>((j + i) % p)];
      U = U * shifted_unit(factor, "sigma^j(pi) - sigma^{j+i}(pi)");
    }
    if (j == 0 && !P.reduce(U).equal(out.s))
      throw CrossCheckFailed(
          "[P'(pi)] disagrees with -[sigma(pi) - pi]^{p-1}");
    Uinv[static_cast<size_t>(j)] = U.inv();
  }

  /* Tr(pi^i P'(pi)^{-1}) = 0 for i <= p-2 and = 1 for i = p-1: with the
   * pi-powers factored out this reads sum_j W_j^i U_j^{-1} = 0 resp.
   * pi^{(p-1)(delta-1)}. */
  for (i64 i = 0; i < p; ++i) {
    Series D = Series::zero(P.B());
    for (i64 j = 0; j < p; ++j)
      D = D + W[static_cast<size_t>(j)].pow(static_cast<u64>(i)) *
                  Uinv[static_cast<size_t>(j)];
    if (i <= p - 2) {
      if (!D.is_zero())
        throw CrossCheckFailed("Tr(pi^" + std::to_string(i) +
                               " / P'(pi)) is not zero");
    } else if (!D.equal(P.pi().pow(static_cast<u64>(m)))) {
      throw CrossCheckFailed("Tr(pi^{p-1} / P'(pi)) is not one");
    }
  }

  /* Sampled direct traces: Tr(x pi^{-m}) = s xbar mod pi. */
  std::vector<Series> samples;
  samples.push_back(Series::one(P.B()));
  Series allv = Series::one(P.B());
  for (int i = 0; i < P.B()->nvars(); ++i) {
    samples.push_back(Series::variable(P.B(), i));
    allv = allv + Series::variable(P.B(), i);
  }
  samples.push_back(allv);
  for (const Series& x : samples) {
    Series S = Series::zero(P.B());
    Series sx = x;
    for (i64 j = 0; j < p; ++j) {
      S = S + sx * Winv_m[static_cast<size_t>(j)];
      if (j + 1 < p) sx = s.apply(sx);
    }
    Valuation v = P.pival(S);
    if (!v.ge(m)) {
      if (v.exact)
        throw CrossCheckFailed("direct trace sum has valuation " + v.str() +
                               " below the twist " + std::to_string(m));
      throw PrecisionLoss("direct trace valuation uncertified");
    }
    if (!P.reduce_shifted(S, m).equal(out.s * P.reduce(x)))
      throw CrossCheckFailed("direct trace disagrees with the closed form");
    ++out.samples;
  }
  return out;
}

}  // namespace wildquot
