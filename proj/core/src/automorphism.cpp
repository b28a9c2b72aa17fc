#include "wildquot/automorphism.hpp"

#include <algorithm>

#include "wildquot/errors.hpp"

namespace wildquot {

namespace {

constexpr i64 kInf = i64{1} << 40;

std::vector<Series> compose_images(const CtxHandle& B,
                                   const std::optional<DvrAutomorphism>& base,
                                   const std::vector<Series>& outer_imgs,
                                   i64 outer_base_iters,
                                   const std::vector<Series>& inner_imgs) {
  /* (sigma_outer o sigma_inner)(x_i) = sigma_outer(inner_imgs[i]) */
  std::vector<Series> out;
  out.reserve(inner_imgs.size());
  for (const auto& s : inner_imgs) {
    if (base)
      out.push_back(subst_mapped(s, outer_imgs, B, [&](const RElem& c) {
        return base->apply_iter(c, outer_base_iters);
      }));
    else
      out.push_back(subst_mapped(s, outer_imgs, B,
                                 [](const RElem& c) { return c; }));
  }
  return out;
}

}  // namespace

OrderCertificate verify_order(const CtxHandle& B,
                              const std::optional<DvrAutomorphism>& base,
                              const std::vector<Series>& images, i64 p) {
  OrderCertificate cert;
  cert.p = p;
  if (!zmod::is_prime(p)) {
    cert.failure = "order must be prime";
    return cert;
  }
  if (static_cast<int>(images.size()) != B->nvars()) {
    cert.failure = "expected one image per variable";
    return cert;
  }
  if (base && base->order() != p) {
    cert.failure = "coefficient action has the wrong order";
    return cert;
  }
  for (const auto& img : images) {
    if (!img.ctx()->same(*B)) {
      cert.failure = "image lies in a different context";
      return cert;
    }
    if (B->base()->is_unit(img.constant_term())) {
      cert.failure = "an image escapes the maximal ideal";
      return cert;
    }
  }

  /* iterate: it_j = sigma^j(x_i); sigma^{j+1}(x_i) = sigma^j(images[i]) */
  std::vector<Series> it = images;
  bool identity_now = true;
  for (int i = 0; i < B->nvars(); ++i)
    if (!it[i].equal(Series::variable(B, i))) identity_now = false;
  if (identity_now && !(base && !base->is_identity())) {
    cert.failure = "the map is the identity";
    return cert;
  }
  for (i64 j = 1; j < p; ++j)
    it = compose_images(B, base, images, 1, it);

  cert.checked_deg = B->N();
  cert.min_prec = B->base()->cap();
  for (int i = 0; i < B->nvars(); ++i) {
    cert.checked_deg = std::min(cert.checked_deg, it[i].valid_deg());
    for (int idx = 0; idx < B->size(); ++idx)
      if (B->degree(idx) <= it[i].valid_deg())
        cert.min_prec = std::min(cert.min_prec, it[i].coeff(idx).prec);
    if (!it[i].equal(Series::variable(B, i))) {
      cert.failure = "sigma^p does not fix " + B->vars()[i] +
                     " at the model precision";
      return cert;
    }
  }
  cert.ok = true;
  return cert;
}

LocalAutomorphism LocalAutomorphism::make(CtxHandle B, std::vector<Series> images,
                                          i64 p) {
  LocalAutomorphism s;
  s.B_ = std::move(B);
  s.images_ = std::move(images);
  s.p_ = p;
  s.cert_ = verify_order(s.B_, std::nullopt, s.images_, p);
  if (!s.cert_.ok) throw NotOrderP("order check failed: " + s.cert_.failure);
  return s;
}

LocalAutomorphism LocalAutomorphism::make(CtxHandle B, DvrAutomorphism base,
                                          std::vector<Series> images, i64 p) {
  if (base.is_identity()) return make(std::move(B), std::move(images), p);
  LocalAutomorphism s;
  s.B_ = std::move(B);
  if (!base.ring()->same(*s.B_->base()))
    throw MixedContext("coefficient action lives on a different ring");
  if (!base.verified())
    throw OrderNotVerified("coefficient action must carry a verified order");
  s.base_ = std::move(base);
  s.images_ = std::move(images);
  s.p_ = p;
  s.cert_ = verify_order(s.B_, s.base_, s.images_, p);
  if (!s.cert_.ok) throw NotOrderP("order check failed: " + s.cert_.failure);
  return s;
}

const DvrAutomorphism& LocalAutomorphism::base() const {
  if (!base_) throw WrongShape("automorphism acts trivially on the base ring");
  return *base_;
}

Series LocalAutomorphism::apply(const Series& f) const {
  if (base_) return subst(f, images_, *base_);
  return subst(f, images_);
}

Series LocalAutomorphism::apply_iter(const Series& f, i64 k) const {
  Series g = f;
  for (i64 j = 0; j < ((k % p_) + p_) % p_; ++j) g = apply(g);
  return g;
}

RElem LocalAutomorphism::apply_base(const RElem& c) const {
  return base_ ? base_->apply(c) : c;
}

LocalAutomorphism LocalAutomorphism::restricted(const CtxHandle& coarser) const {
  std::vector<Series> imgs;
  imgs.reserve(images_.size());
  for (const auto& s : images_) imgs.push_back(s.restricted(coarser));
  if (base_) return make(coarser, *base_, std::move(imgs), p_);
  return make(coarser, std::move(imgs), p_);
}

IsigmaGens isigma(const LocalAutomorphism& s) {
  /* Any sigma(f) - f lies in (sigma(x_i) - x_i, sigma(u) - u): writing f
   * as a polynomial in u and the x_i, sigma(f) - f telescopes into sums
   * of terms m1*(sigma(t) - t)*m2 where t is a single variable or u and
   * m1, m2 are monomial tails, each term a multiple of one generator.
   * Valuation minima over the generators are therefore minima over the
   * ideal, and the reading v(sigma(pi) - pi) >= delta comes for free. */
  const auto& B = s.ctx();
  IsigmaGens out;
  for (int i = 0; i < B->nvars(); ++i) {
    out.gens.push_back(s.images()[i] - Series::variable(B, i));
    out.names.push_back(B->vars()[i]);
  }
  if (!s.trivial_on_base()) {
    const auto& R = *B->base();
    RElem du = R.sub(s.base().u_image(), R.uniformizer());
    out.gens.push_back(Series::constant(B, du));
    out.names.push_back("u");
  }
  return out;
}

DeltaReport autom_delta(const LocalAutomorphism& s, const PiAdicContext& P) {
  if (!P.B()->same(*s.ctx()))
    throw MixedContext("delta: pi-adic context for a different ring");
  IsigmaGens gens = isigma(s);
  DeltaReport rep;
  rep.gen_names = gens.names;
  i64 best = kInf;
  for (const auto& g : gens.gens) {
    Valuation v = P.pival(g);
    rep.gen_vals.push_back(v);
    best = std::min(best, v.value);
  }
  /* delta is certified iff some exact reading attains the minimum (an
   * ambiguous reading at the same level only bounds from below) */
  bool exact = false;
  for (const auto& v : rep.gen_vals)
    if (v.exact && v.value == best) exact = true;
  rep.delta = best;
  rep.exact = exact;
  rep.pi_val = P.pival(s.apply(P.pi()) - P.pi());
  return rep;
}

PrincipalityReport principality(const LocalAutomorphism& s) {
  const auto& B = s.ctx();
  const auto& R = *B->base();
  if (B->nvars() != 1)
    throw WrongShape("the trichotomy is stated for one series variable");
  if (R.is_field())
    throw WrongShape("the trichotomy is stated over a DVR base");

  PrincipalityReport rep;
  rep.sigma_trivial_on_base = s.trivial_on_base();
  if (rep.sigma_trivial_on_base) {
    rep.mu = Valuation::at_least(kInf);
  } else {
    RElem du = R.sub(s.base().u_image(), R.uniformizer());
    rep.mu = R.val(du);
    if (!rep.mu.exact)
      throw PrecisionLoss("mu = v(sigma(u) - u) is not certified");
    if (rep.mu.value < 2)
      throw NotOrderP("an order-p coefficient action has v(sigma(u) - u) >= 2");
  }

  Series f = s.images()[0] - Series::variable(B, 0);
  auto Pu = PiAdicContext::make(B, Series::uniformizer(B));
  rep.nu = Pu.pival(f);
  rep.v_a0 = R.val(f.constant_term());

  /* Case I: mu <= nu.  An exact mu plus any reading nu >= mu decides,
   * since an at_least(b) reading with b >= mu already certifies nu >= mu. */
  if (!rep.sigma_trivial_on_base && rep.mu.value <= rep.nu.value) {
    rep.kind = PrincipalityCase::CaseI;
    rep.power = rep.mu.value;
    return rep;
  }
  /* now nu < mu (or sigma fixes R); nu must be certified */
  if (!rep.nu.exact)
    throw PrecisionLoss("nu = v(sigma(x) - x) is not certified");
  if (rep.v_a0.exact && rep.v_a0.value == rep.nu.value) {
    rep.kind = PrincipalityCase::CaseII;
    rep.power = rep.nu.value;
    return rep;
  }
  if (!rep.v_a0.exact && rep.v_a0.value <= rep.nu.value)
    throw PrecisionLoss("v(a_0) is not certified at the decisive level");
  rep.kind = PrincipalityCase::NotPrincipal;
  return rep;
}

LocalAutomorphism translation_family(CtxHandle B, const DvrAutomorphism& base,
                                     const RElem& g) {
  const auto& R = *B->base();
  RElem t = R.sub(base.apply(g), g);
  if (B->nvars() != 1)
    throw WrongShape("the translation family is stated for one variable");
  Series img = Series::variable(B, 0) + Series::constant(B, t);
  return LocalAutomorphism::make(std::move(B), base, {img}, base.order());
}

LocalAutomorphism scaling_family(CtxHandle B, const DvrAutomorphism& base,
                                 const RElem& w) {
  const auto& R = *B->base();
  if (!R.is_unit(w)) throw NotAUnit("the scaling family needs a unit w");
  if (B->nvars() != 1)
    throw WrongShape("the scaling family is stated for one variable");
  RElem c = R.mul(base.apply(w), R.inv(w));
  Series img = Series::variable(B, 0).scaled(c);
  return LocalAutomorphism::make(std::move(B), base, {img}, base.order());
}

LocalAutomorphism conjugation(const LocalAutomorphism& s,
                              const std::vector<Series>& phi) {
  const auto& B = s.ctx();
  if (static_cast<int>(phi.size()) != B->nvars())
    throw Error("conjugation: expected one component per variable");
  auto psi = invert_map(phi);
  std::vector<Series> images;
  images.reserve(phi.size());
  for (const auto& comp : phi) {
    Series mapped = s.apply(comp);    /* sigma(phi_i) */
    images.push_back(subst(mapped, psi)); /* phi^{-1}(sigma(phi_i)) */
  }
  if (s.trivial_on_base())
    return LocalAutomorphism::make(B, std::move(images), s.p());
  return LocalAutomorphism::make(B, s.base(), std::move(images), s.p());
}

}  // namespace wildquot
