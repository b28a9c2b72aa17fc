#include "wildquot/invariants.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "wildquot/derivation.hpp"
#include "wildquot/errors.hpp"
#include "wildquot/linalg.hpp"

namespace wildquot {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Regular: return "Regular";
    case Verdict::NotRegular: return "NotRegular";
    default: return "Undetermined";
  }
}

const char* cond_ii_name(CondII c) {
  switch (c) {
    case CondII::GeneratedByPiDifference: return "GeneratedByPiDifference";
    case CondII::DifferenceInHigherPower: return "DifferenceInHigherPower";
    default: return "None";
  }
}

namespace {

i64 normm(i64 x, i64 q) {
  x %= q;
  return x < 0 ? x + q : x;
}

/* shape of the flattening of a truncated ring into (Z/q)^{size*len} */
struct Flat {
  i64 p = 2;
  int M = 1; /* 1 for a field: coordinates live mod p */
  int len = 1;
  int size = 0;
  int dim = 0;
};

Flat flat_of(const CtxHandle& ctx) {
  const auto& R = ctx->base();
  Flat fl;
  fl.p = R->p();
  fl.M = R->is_field() ? 1 : R->M();
  fl.len = R->coeff_len();
  fl.size = ctx->size();
  fl.dim = fl.size * fl.len;
  return fl;
}

/* Flattened coordinates of f.  Linear algebra on stored coordinates is
 * only exact when every coefficient is known at the full precision cap,
 * so anything less is refused rather than silently zero-filled. */
Vec flatten_exact(const Series& f, const char* who) {
  const auto& ctx = f.ctx();
  const auto& R = ctx->base();
  const int size = ctx->size(), len = R->coeff_len(), cap = R->cap();
  if (f.valid_deg() < ctx->N())
    throw PrecisionLoss(std::string(who) + ": input trusted only through degree " +
                        std::to_string(f.valid_deg()) + " of " + std::to_string(ctx->N()));
  Vec v(static_cast<size_t>(size) * len, 0);
  for (int t = 0; t < size; ++t) {
    const RElem& c = f.coeff(t);
    if (c.prec < cap)
      throw PrecisionLoss(std::string(who) + ": coefficient of " + ctx->monomial_str(t) +
                          " known only mod u^" + std::to_string(c.prec));
    const int n = std::min<int>(len, static_cast<int>(c.c.size()));
    for (int j = 0; j < n; ++j) v[static_cast<size_t>(t) * len + j] = c.c[j];
  }
  return v;
}

Series unflatten(const CtxHandle& ctx, const Vec& v) {
  const auto& R = ctx->base();
  const int size = ctx->size(), len = R->coeff_len();
  Series f = Series::zero(ctx);
  for (int t = 0; t < size; ++t) {
    std::vector<i64> c(v.begin() + static_cast<size_t>(t) * len,
                       v.begin() + static_cast<size_t>(t + 1) * len);
    f.coeff(t) = R->from_coords(std::move(c));
  }
  return f;
}

/* module basis element: the monomial #t with coefficient u^j (resp. the
 * j-th power basis element of the field) */
Series basis_elem(const CtxHandle& ctx, int t, int j) {
  const auto& R = ctx->base();
  std::vector<i64> e(R->coeff_len(), 0);
  e[j] = 1;
  Series f = Series::zero(ctx);
  f.coeff(t) = R->from_coords(std::move(e));
  return f;
}

Howell make_howell(Mat rows, const Flat& fl) {
  if (rows.empty()) rows.push_back(Vec(fl.dim, 0));
  return Howell(std::move(rows), fl.p, fl.M, fl.dim);
}

bool is_nonzero_vec(const Vec& v) {
  for (i64 x : v)
    if (x) return true;
  return false;
}

/* Adopt the window-visible polynomial as the chosen parameter.  Updates
 * built through residue solves inherit a conservative "content may
 * continue past the window" marking, under which sigma-images can only
 * be bounded, not evaluated.  A parameter is ours to choose, so fix the
 * truncated polynomial itself; the correction loops re-verify their
 * convergence requirements against this choice on every pass. */
Series choose_poly(const Series& f) { return f.truncate_above(f.valid_deg()); }

InvariantKernel kernel_common(const CtxHandle& ctx,
                              const std::vector<const LocalAutomorphism*>& gens) {
  const Flat fl = flat_of(ctx);
  Mat mat(gens.size() * static_cast<size_t>(fl.dim), Vec(fl.dim, 0));
  for (int t = 0; t < fl.size; ++t)
    for (int j = 0; j < fl.len; ++j) {
      const int b = t * fl.len + j;
      const Series e = basis_elem(ctx, t, j);
      for (size_t gi = 0; gi < gens.size(); ++gi) {
        const Vec w = flatten_exact(gens[gi]->apply(e) - e, "invariant kernel");
        for (int r = 0; r < fl.dim; ++r) mat[gi * fl.dim + r][b] = w[r];
      }
    }
  const auto ker = kernel_mod_pM(mat, fl.p, fl.M, fl.dim);

  struct Item {
    int low;
    Vec v;
    Series s;
    int ord;
  };
  std::vector<Item> full, arts;
  for (const auto& kg : ker) {
    Series s = unflatten(ctx, kg.v);
    Item it{s.low_degree(), kg.v, std::move(s), kg.order_exp};
    (kg.order_exp >= fl.M ? full : arts).push_back(std::move(it));
  }
  const auto by_low_then_lex = [](const Item& a, const Item& b) {
    return a.low != b.low ? a.low < b.low : a.v < b.v;
  };
  std::sort(full.begin(), full.end(), by_low_then_lex);
  std::sort(arts.begin(), arts.end(), by_low_then_lex);

  InvariantKernel out;
  out.ctx = ctx;
  out.rank_by_degree.assign(ctx->N() + 1, 0);
  for (auto& it : full) {
    out.rank_by_degree[std::min(it.low, ctx->N())] += 1;
    out.basis.push_back(std::move(it.s));
  }
  for (auto& it : arts) {
    out.artifacts.push_back(std::move(it.s));
    out.artifact_orders.push_back(it.ord);
  }
  return out;
}

}  // namespace

InvariantKernel invar_kernel(const LocalAutomorphism& s) {
  return kernel_common(s.ctx(), {&s});
}

InvariantKernel invar_kernel_group(const std::vector<LocalAutomorphism>& gens) {
  if (gens.empty()) throw Inconsistent("invariant kernel of an empty family");
  std::vector<const LocalAutomorphism*> ptrs;
  for (const auto& g : gens) {
    if (!g.ctx()->same(*gens.front().ctx()))
      throw MixedContext("invariant kernel: generators live in different rings");
    ptrs.push_back(&g);
  }
  return kernel_common(gens.front().ctx(), ptrs);
}

EmbeddingDim invar_embedding_dim(const InvariantKernel& k) {
  const CtxHandle& ctx = k.ctx;
  const auto& R = ctx->base();
  const Flat fl = flat_of(ctx);
  const i64 q = R->coeff_modulus();
  const int d = ctx->dim();
  const int nfun = R->is_field() ? R->ext_degree() : 1;

  /* the maximal ideal of the (truncated) invariant ring: kill the
   * residue functionals of the constant term with integer scalars, so
   * that everything stays inside the coefficient module */
  std::vector<Vec> mg;
  mg.reserve(k.basis.size());
  for (const auto& s : k.basis) mg.push_back(flatten_exact(s, "embedding dimension"));
  for (int i = 0; i < nfun; ++i) {
    int piv = -1;
    i64 pval = 0;
    for (size_t g = 0; g < mg.size(); ++g) {
      const i64 x = normm(mg[g][i], fl.p);
      if (x) {
        piv = static_cast<int>(g);
        pval = x;
        break;
      }
    }
    if (piv < 0) continue;
    i64 inv = 1;
    for (i64 c = 1; c < fl.p; ++c)
      if (normm(pval * c, fl.p) == 1) {
        inv = c;
        break;
      }
    std::vector<Vec> next;
    next.reserve(mg.size());
    for (size_t g = 0; g < mg.size(); ++g) {
      if (static_cast<int>(g) == piv) continue;
      Vec w = mg[g];
      const i64 c = normm(normm(w[i], fl.p) * inv, fl.p);
      if (c)
        for (int r = 0; r < fl.dim; ++r) w[r] = normm(w[r] - c * mg[piv][r], q);
      if (is_nonzero_vec(w)) next.push_back(std::move(w));
    }
    if (!R->is_field()) {
      Vec w = mg[piv];
      for (auto& x : w) x = normm(x * fl.p, q);
      if (is_nonzero_vec(w)) next.push_back(std::move(w));
    }
    mg = std::move(next);
  }

  /* Free generators straightened out of the kernel are only canonical up
   * to its torsion part: a p-power multiple of a torsion element vanishes
   * outright, so such directions carry no ring content, yet the
   * straightening may fold them into otherwise clean generators.  Adding
   * the torsion span to both sides of the quotient below cancels that
   * ambiguity instead of letting it masquerade as residue content. */
  Mat noise;
  noise.reserve(k.artifacts.size());
  for (const auto& s : k.artifacts)
    noise.push_back(flatten_exact(s, "embedding dimension"));

  /* the square of the maximal ideal, as an ideal: pairwise products,
   * closed under further multiplication by the ideal generators */
  const auto mulvec = [&](const Vec& a, const Vec& b) {
    return flatten_exact(unflatten(ctx, a) * unflatten(ctx, b), "embedding dimension");
  };
  Mat prods = noise;
  for (size_t i = 0; i < mg.size(); ++i)
    for (size_t j = i; j < mg.size(); ++j) prods.push_back(mulvec(mg[i], mg[j]));
  Howell H2 = make_howell(std::move(prods), fl);
  const int max_rounds = fl.dim * fl.M + 2;
  for (int round = 0; round < max_rounds; ++round) {
    Mat nxt = H2.rows();
    for (const Vec& r : H2.rows())
      for (const Vec& g : mg) nxt.push_back(mulvec(r, g));
    Howell H2b = make_howell(std::move(nxt), fl);
    if (H2b.log_size() == H2.log_size()) break;
    H2 = std::move(H2b);
  }

  Mat mall = H2.rows();
  for (const Vec& g : mg) mall.push_back(g);
  const Howell Hm = make_howell(std::move(mall), fl);

  /* p * m lies in the ideal square, so the quotient is an elementary
   * abelian p-group and its size exponent is the residue dimension */
  const i64 logdiff = Hm.log_size() - H2.log_size();
  if (logdiff % nfun != 0)
    throw Inconsistent("embedding dimension: residue-field dimension mismatch");
  EmbeddingDim out;
  out.dim = d;
  out.embedding_dim = static_cast<int>(logdiff / nfun);
  out.verdict = out.embedding_dim == d
                    ? Verdict::Regular
                    : (out.embedding_dim > d ? Verdict::NotRegular : Verdict::Undetermined);

  /* representatives: greedy over the ideal generators, lowest degree
   * first, extending the span until all of m is recovered */
  struct Cand {
    int low;
    Vec v;
  };
  std::vector<Cand> cands;
  cands.reserve(mg.size());
  for (const Vec& g : mg) cands.push_back({unflatten(ctx, g).low_degree(), g});
  std::sort(cands.begin(), cands.end(),
            [](const Cand& a, const Cand& b) { return a.low != b.low ? a.low < b.low : a.v < b.v; });
  Howell H = H2;
  for (const auto& c : cands) {
    if (H.log_size() == Hm.log_size()) break;
    if (H.contains(c.v)) continue;
    out.generators.push_back(unflatten(ctx, c.v));
    Mat rr = H.rows();
    rr.push_back(c.v);
    H = make_howell(std::move(rr), fl);
  }
  return out;
}

InvariantRingReport invar_report(const LocalAutomorphism& s_fine, int delta_trunc) {
  if (delta_trunc < 1) throw Inconsistent("stability window must be positive");
  const CtxHandle& fine = s_fine.ctx();
  const int N = fine->N() - delta_trunc;
  if (N < 1)
    throw PrecisionLoss("truncation " + std::to_string(fine->N()) +
                        " leaves no room for a stability window of " +
                        std::to_string(delta_trunc));
  const CtxHandle coarse = fine->with_truncation(N);
  const LocalAutomorphism s = s_fine.restricted(coarse);
  InvariantKernel k = invar_kernel(s);
  const InvariantKernel kf = invar_kernel(s_fine);
  const EmbeddingDim ed = invar_embedding_dim(k);
  const EmbeddingDim edf = invar_embedding_dim(kf);

  InvariantRingReport rep;
  rep.kernel = std::move(k);
  rep.algebra_generators = ed.generators;
  rep.dim = ed.dim;
  rep.embedding_dim = ed.embedding_dim;
  rep.embedding_dim_fine = edf.embedding_dim;
  rep.stable = ed.verdict == edf.verdict && ed.embedding_dim == edf.embedding_dim;
  rep.verdict = rep.stable ? ed.verdict : Verdict::Undetermined;
  rep.delta_trunc = delta_trunc;
  return rep;
}

std::vector<Series> default_pi_candidates(const LocalAutomorphism& s) {
  const CtxHandle& B = s.ctx();
  std::vector<Series> out;
  if (!B->base()->is_field()) out.push_back(Series::uniformizer(B));
  for (int i = 0; i < B->nvars(); ++i) out.push_back(Series::variable(B, i));
  return out;
}

TheoremCheck invar_check_theorem(const LocalAutomorphism& s,
                                 const std::vector<Series>& candidate_pis) {
  const CtxHandle& B = s.ctx();
  const Flat fl = flat_of(B);
  const std::vector<Series> cands =
      candidate_pis.empty() ? default_pi_candidates(s) : candidate_pis;
  const IsigmaGens ig = isigma(s);

  /* the ideal at truncation is the coefficient-module span of monomial
   * multiples of its generators; membership is then a Howell test */
  Mat rows;
  for (const Series& g : ig.gens)
    for (int t = 0; t < fl.size; ++t)
      for (int j = 0; j < fl.len; ++j)
        rows.push_back(flatten_exact(basis_elem(B, t, j) * g, "ideal membership"));
  const Howell HI = make_howell(std::move(rows), fl);

  std::ostringstream w;
  TheoremCheck best;
  bool have_best = false;
  for (const Series& pi : cands) {
    const std::string ps = pi.str();
    std::optional<PiAdicContext> P;
    try {
      P.emplace(PiAdicContext::make(B, pi));
    } catch (const NotRegularParameter& e) {
      w << "pi=" << ps << ": rejected, not a regular parameter (" << e.what() << ")\n";
      continue;
    } catch (const PrecisionLoss& e) {
      w << "pi=" << ps << ": rejected, " << e.what() << "\n";
      continue;
    }
    try {
      const DeltaReport dr = autom_delta(s, *P);
      if (!dr.exact) {
        w << "pi=" << ps << ": generator valuation only bounded below by " << dr.delta
          << ", skipping\n";
        continue;
      }
      const i64 delta = dr.delta;
      const bool memb = HI.contains(flatten_exact(pi.pow(static_cast<u64>(delta)),
                                                  "ideal membership"));
      w << "pi=" << ps << ": delta=" << delta << " (";
      for (size_t i = 0; i < dr.gen_vals.size(); ++i)
        w << (i ? ", " : "") << "v(" << dr.gen_names[i] << ")=" << dr.gen_vals[i].str();
      w << "); pi^delta in I_sigma: " << (memb ? "yes" : "no") << "\n";
      if (!memb) continue;

      const Series diff = s.apply(pi) - pi;
      CondII c2 = CondII::None;
      const Series qd = P->divide(diff, delta);
      const Valuation qv = B->base()->val(qd.constant_term());
      if (qv.exact && qv.value == 0) {
        c2 = CondII::GeneratedByPiDifference;
        w << "pi=" << ps << ": sigma(pi)-pi = unit * pi^" << delta << "\n";
      } else if (P->pival(diff).ge(delta + 1)) {
        c2 = CondII::DifferenceInHigherPower;
        w << "pi=" << ps << ": v(sigma(pi)-pi) >= " << delta + 1 << "\n";
      } else {
        w << "pi=" << ps << ": condition (ii) fails; [sigma(pi)-pi]/pi^" << delta
          << " is a non-unit not divisible by pi -- recording the gap rather than"
             " assuming it cannot occur\n";
      }
      if (c2 == CondII::None) {
        if (!have_best) {
          best.pi = pi;
          best.delta = delta;
          best.cond_i = true;
          have_best = true;
        }
        continue;
      }
      TheoremCheck out;
      out.applicable = true;
      out.pi = pi;
      out.delta = delta;
      out.cond_i = true;
      out.cond_ii = c2;
      out.witness = w.str();
      return out;
    } catch (const PrecisionLoss& e) {
      w << "pi=" << ps << ": " << e.what() << "\n";
      continue;
    }
  }
  TheoremCheck out = have_best ? best : TheoremCheck{};
  out.applicable = false;
  out.witness = w.str();
  return out;
}

NormUniformizer invar_norm_uniformizer(const LocalAutomorphism& s,
                                       const PiAdicContext& P) {
  const RamificationReport rep = ram_classify(s, P);
  if (rep.tag != RamTag::WildTotal)
    throw WrongCase(std::string("norm uniformizer requires total wild ramification; "
                                "classified ") +
                    ram_tag_name(rep.tag));
  const i64 delta = rep.delta.delta;
  const Series& pi = P.pi();
  const Series diff = s.apply(pi) - pi;
  const Series qd = P.divide(diff, delta);
  const Valuation qv = P.B()->base()->val(qd.constant_term());
  if (!(qv.exact && qv.value == 0))
    throw WrongCase("sigma(pi) - pi must be a unit multiple of pi^delta for the norm "
                    "construction");

  const i64 p = s.p();
  Series lambda = pi;
  for (i64 i = 1; i < p; ++i) lambda = lambda * s.apply_iter(pi, i);
  if (!(s.apply(lambda) - lambda).is_zero())
    throw PrecisionLoss("the norm is invariant only up to the truncation tail at this "
                        "precision");
  const Valuation lv = P.pival(lambda);
  if (!(lv.exact && lv.value == p))
    throw CrossCheckFailed("norm valuation: expected exactly p, read " + lv.str());
  const Series unit = P.divide(lambda, p);
  const Valuation uv = P.B()->base()->val(unit.constant_term());
  if (!(uv.exact && uv.value == 0)) throw CrossCheckFailed("norm / pi^p is not a unit");

  const TraceFormReport tf = ram_trace_form(s, P);
  const Series cmp = -(P.reduce(qd).pow(static_cast<u64>(p - 1)));
  if (!tf.s.equal(cmp))
    throw CrossCheckFailed("trace form does not match the leading-unit power");
  const Valuation tv = tf.s.ctx()->base()->val(tf.s.constant_term());
  if (!(tv.exact && tv.value == 0))
    throw CrossCheckFailed("trace form is not a unit; the residue reduction would not "
                           "be surjective");
  return {lambda, unit, tf.s, tf.samples};
}

FierceUniformizer invar_fierce_uniformizer(const LocalAutomorphism& s,
                                           const PiAdicContext& P) {
  RamificationReport rep = ram_classify(s, P);
  if (rep.tag != RamTag::Fierce)
    throw WrongCase(std::string("fierce uniformizer requires a fierce extension; "
                                "classified ") +
                    ram_tag_name(rep.tag));
  const i64 delta = rep.delta.delta;
  const CtxHandle& B = P.B();
  const i64 maxn = B->base()->cap() + B->N() + 2;

  PiAdicContext cur = P;
  NormalizedFrame fr = deriv_normalize(rep.fierce->theta);
  Series lambda = P.pi();
  int steps = 0;
  for (i64 n = 1; n <= maxn;) {
    const Series diff = s.apply(lambda) - lambda;
    if (diff.is_zero()) return {lambda, P.divide(lambda, 1), steps};
    const Valuation dv = cur.pival(diff);
    if (!dv.exact)
      throw PrecisionLoss("defect valuation not certified at this precision");
    if (dv.value < delta + n)
      throw HypothesisViolated("invariance order regressed during the correction loop");
    if (dv.value > delta + n) {
      n = dv.value - delta;
      continue;
    }
    const Series cbar = cur.reduce_shifted(diff, delta + n);
    try {
      if (n == 1) {
        /* the first defect sits at the same level as a * (sigma(pi)-pi),
         * so the correction must be multiplicative: a unit with
         * prescribed logarithmic derivative */
        lambda = choose_poly(cur.lift(deriv_solve_logderiv(fr, -cbar)) * lambda);
      } else {
        const Series abar = deriv_solve_exact(fr, -cbar);
        lambda = choose_poly(
            lambda * (Series::one(B) + cur.lift(abar) * lambda.pow(static_cast<u64>(n - 1))));
      }
    } catch (const Inconsistent& e) {
      throw HypothesisViolated(std::string("residue equation unsolvable: ") + e.what());
    } catch (const NotInImage& e) {
      throw HypothesisViolated(std::string("residue equation unsolvable: ") + e.what());
    }
    ++steps;
    ++n;
    cur = PiAdicContext::make(B, lambda);
    rep = ram_classify(s, cur);
    if (rep.tag != RamTag::Fierce || rep.delta.delta != delta)
      throw HypothesisViolated("classification is not stable under the uniformizer "
                               "update");
    fr = deriv_normalize(rep.fierce->theta);
  }
  throw PrecisionLoss("the defect did not vanish within the precision window");
}

FierceGenerators invar_fierce_complete(const LocalAutomorphism& s,
                                       const PiAdicContext& P, const Series& lambda) {
  const CtxHandle& B = s.ctx();
  if (!P.B()->same(*B) || !lambda.ctx()->same(*B))
    throw MixedContext("fierce completion: mismatched rings");
  if (!(s.apply(lambda) - lambda).is_zero())
    throw HypothesisViolated("the uniformizer is not invariant at precision");

  /* rebase at the invariant uniformizer: with sigma(lambda) = lambda the
   * additive corrections a * lambda^n pick up no cross-term from the
   * uniformizer itself, so one fixed frame serves every step */
  const PiAdicContext PL = PiAdicContext::make(B, lambda);
  const RamificationReport rep = ram_classify(s, PL);
  if (rep.tag != RamTag::Fierce)
    throw WrongCase(std::string("fierce completion requires a fierce extension; "
                                "classified ") +
                    ram_tag_name(rep.tag));
  const i64 delta = rep.delta.delta;
  const NormalizedFrame fr = deriv_normalize(rep.fierce->theta);
  const i64 p = s.p();
  const i64 maxn = B->base()->cap() + B->N() + 2;

  std::vector<Series> zbars;
  zbars.push_back(fr.new_params[0].pow(static_cast<u64>(p)));
  for (size_t i = 1; i < fr.new_params.size(); ++i) zbars.push_back(fr.new_params[i]);

  FierceGenerators out;
  out.lambda = lambda;
  for (const Series& zb : zbars) {
    if (!in_kernel(fr, zb))
      throw HypothesisViolated("adapted parameter escaped the kernel of the residue "
                               "derivation");
    Series y = choose_poly(PL.lift(zb));
    int st = 0;
    bool done = false;
    for (i64 n = 1; n <= maxn;) {
      const Series diff = s.apply(y) - y;
      if (diff.is_zero()) {
        done = true;
        break;
      }
      const Valuation dv = PL.pival(diff);
      if (!dv.exact)
        throw PrecisionLoss("defect valuation not certified at this precision");
      if (dv.value < delta + n)
        throw HypothesisViolated("invariance order regressed during the lifting loop");
      if (dv.value > delta + n) {
        n = dv.value - delta;
        continue;
      }
      const Series cbar = PL.reduce_shifted(diff, delta + n);
      Series abar;
      try {
        abar = deriv_solve_exact(fr, -cbar);
      } catch (const NotInImage& e) {
        throw HypothesisViolated(std::string("residue equation unsolvable: ") + e.what());
      } catch (const Inconsistent& e) {
        throw HypothesisViolated(std::string("residue equation unsolvable: ") + e.what());
      }
      y = choose_poly(y + PL.lift(abar) * lambda.pow(static_cast<u64>(n)));
      ++st;
      ++n;
    }
    if (!done) throw PrecisionLoss("the lift did not stabilize within the precision window");
    out.params.push_back(std::move(y));
    out.steps.push_back(st);
  }
  return out;
}

}  // namespace wildquot
