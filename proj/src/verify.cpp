#include "iwk1/verify.hpp"

#include <algorithm>
#include <sstream>

namespace iwk1 {

std::string Verify::label(const Quotient& Q, int uid) {
  std::ostringstream os;
  os << "U" << (uid < 10 ? "0" : "") << uid << "_o" << Q.sub(uid).order;
  return os.str();
}

std::string Verify::witness_string(const Membership& m) const {
  std::ostringstream os;
  if (m.member) {
    os << "combo";
    int shown = 0;
    for (auto& [i, c] : m.witness) {
      if (shown++ == 6) {
        os << " ...";
        break;
      }
      os << " " << i << ":" << c;
    }
  } else {
    os << "residual";
    int shown = 0;
    for (size_t i = 0; i < m.residual.size(); ++i) {
      if (!m.residual[i]) continue;
      if (shown++ == 6) {
        os << " ...";
        break;
      }
      os << " [" << i << "]=" << m.residual[i];
    }
  }
  return os.str();
}

template <class V>
std::string Verify::residual_string(const V& v) const {
  std::ostringstream os;
  os << "residual";
  int shown = 0;
  for (size_t i = 0; i < v.c.size(); ++i) {
    if (!v.c[i]) continue;
    if (shown++ == 6) {
      os << " ...";
      break;
    }
    os << " [" << i << "]=" << v.c[i];
  }
  return os.str();
}

CheckReport Verify::check_A(const Tuple& t) const {
  const Quotient& Q = A_->Q();
  CheckReport rep;
  rep.level = Q.level();
  rep.k = A_->kres();
  if ((int)t.comp.size() != Q.n_subgroups())
    fail(errc::invalid_input, "check_A: tuple has wrong number of components");

  // (A1)
  for (int Vid = 0; Vid < Q.n_subgroups(); ++Vid)
    for (int Uid = 0; Uid < Q.n_subgroups(); ++Uid) {
      if (Uid == Vid || !Q.subset(Uid, Vid)) continue;
      bool commutators_in_U = true;
      for (int c : Q.sub(Vid).comm)
        if (!Q.sub(Uid).mask[c]) commutators_in_U = false;
      if (!commutators_in_U) continue;
      SubAbVec lhs = A_->tau_VU(Vid, Uid, t.comp[Vid]);
      SubAbVec rhs = A_->pi_VU(Vid, Uid, t.comp[Uid]);
      SubAbVec diff = A_->sub(lhs, rhs);
      unsigned prec = std::min(A_->kres(), A_->value_prec(diff));
      CheckItem it;
      it.condition = "A1";
      it.subgroups = {label(Q, Uid), label(Q, Vid)};
      it.certified_precision = prec;
      it.pass = A_->is_zero_at(diff, prec);
      if (!it.pass) it.witness = residual_string(diff);
      rep.add(std::move(it));
    }

  // (A2)
  for (int Uid = 0; Uid < Q.n_subgroups(); ++Uid) {
    bool pass = true;
    unsigned prec = A_->kres();
    std::string wit;
    for (int g = 0; g < Q.order() && pass; ++g) {
      int tid = Q.conj_subgroup(g, Uid);
      AbelVec lhs = t.comp[tid];
      AbelVec rhs = A_->conj_translate(g, t.comp[Uid]);
      AbelVec diff = A_->sub(lhs, rhs);
      prec = std::min(prec, std::min(A_->kres(), A_->value_prec(diff)));
      if (!A_->is_zero_at(diff, std::min(prec, A_->value_prec(diff)))) {
        pass = false;
        wit = "g=" + std::to_string(g) + " " + residual_string(diff);
      }
    }
    CheckItem it;
    it.condition = "A2";
    it.subgroups = {label(Q, Uid)};
    it.pass = pass;
    it.certified_precision = prec;
    it.witness = wit;
    rep.add(std::move(it));
  }

  // (A3)
  for (int Uid = 0; Uid < Q.n_subgroups(); ++Uid) {
    AbelVec a = t.comp[Uid];
    CheckItem it;
    it.condition = "A3";
    it.subgroups = {label(Q, Uid)};
    try {
      AbelVec ai = A_->descale_integral(a);
      Membership m = A_->in_sigma_N_image(ai);
      it.pass = m.member;
      it.certified_precision = m.cert;
      it.witness = witness_string(m);
    } catch (const Error& e) {
      it.pass = false;
      it.certified_precision = 0;
      it.witness = std::string("not integral: ") + e.what();
    }
    rep.add(std::move(it));
  }
  return rep;
}

CheckReport Verify::check_M(const Tuple& t) const {
  const Quotient& Q = A_->Q();
  CheckReport rep;
  rep.level = Q.level();
  rep.k = A_->kres();
  if ((int)t.comp.size() != Q.n_subgroups())
    fail(errc::invalid_input, "check_M: tuple has wrong number of components");
  for (auto& c : t.comp)
    if (!A_->ais_unit(c)) fail(errc::not_a_unit, "check_M: component is not a unit");

  // (M1) and (M1a)
  for (int Vid = 0; Vid < Q.n_subgroups(); ++Vid) {
    bool vab = (i64)Q.sub(Vid).n_uclasses == Q.sub(Vid).ab.size;
    for (int Uid = 0; Uid < Q.n_subgroups(); ++Uid) {
      if (Uid == Vid || !Q.subset(Uid, Vid)) continue;
      bool commutators_in_U = true;
      for (int c : Q.sub(Vid).comm)
        if (!Q.sub(Uid).mask[c]) commutators_in_U = false;
      if (!commutators_in_U) continue;
      {
        SubAbVec lhs = K_->nu_VU(Vid, Uid, t.comp[Vid]);
        SubAbVec rhs = A_->pi_VU(Vid, Uid, t.comp[Uid]);
        SubAbVec diff = A_->sub(lhs, rhs);
        unsigned prec = std::min(A_->kres(), A_->value_prec(diff));
        CheckItem it;
        it.condition = "M1";
        it.subgroups = {label(Q, Uid), label(Q, Vid)};
        it.certified_precision = prec;
        it.pass = A_->is_zero_at(diff, prec);
        if (!it.pass) it.witness = residual_string(diff);
        rep.add(std::move(it));
      }
      if (vab) {
        AbelVec lhs = K_->norm_abelian(Vid, Uid, t.comp[Vid]);
        AbelVec diff = A_->sub(lhs, t.comp[Uid]);
        unsigned prec = std::min(A_->kres(), A_->value_prec(diff));
        CheckItem it;
        it.condition = "M1a";
        it.subgroups = {label(Q, Uid), label(Q, Vid)};
        it.certified_precision = prec;
        it.pass = A_->is_zero_at(diff, prec);
        if (!it.pass) it.witness = residual_string(diff);
        rep.add(std::move(it));
      }
    }
  }

  // (M2)
  for (int Uid = 0; Uid < Q.n_subgroups(); ++Uid) {
    bool pass = true;
    unsigned prec = A_->kres();
    std::string wit;
    for (int g = 0; g < Q.order() && pass; ++g) {
      int tid = Q.conj_subgroup(g, Uid);
      AbelVec diff = A_->sub(t.comp[tid], A_->conj_translate(g, t.comp[Uid]));
      prec = std::min(prec, std::min(A_->kres(), A_->value_prec(diff)));
      if (!A_->is_zero_at(diff, prec)) {
        pass = false;
        wit = "g=" + std::to_string(g) + " " + residual_string(diff);
      }
    }
    CheckItem it;
    it.condition = "M2";
    it.subgroups = {label(Q, Uid)};
    it.pass = pass;
    it.certified_precision = prec;
    it.witness = wit;
    rep.add(std::move(it));
  }

  // (M3): index-p pairs
  for (int Vid = 0; Vid < Q.n_subgroups(); ++Vid)
    for (int Uid = 0; Uid < Q.n_subgroups(); ++Uid) {
      if (Uid == Vid || !Q.subset(Uid, Vid)) continue;
      if (Q.index_in(Uid, Vid) != (int)A_->p()) continue;
      AbelVec diff = A_->sub(A_->ver_ring(Vid, Uid, t.comp[Vid]), t.comp[Uid]);
      Membership m = A_->in_sigma_pair_image(Vid, Uid, diff);
      CheckItem it;
      it.condition = "M3";
      it.subgroups = {label(Q, Uid), label(Q, Vid)};
      it.pass = m.member;
      it.certified_precision = m.cert;
      it.witness = witness_string(m);
      rep.add(std::move(it));
    }

  // (M3a)
  for (int Uid = 0; Uid < Q.n_subgroups(); ++Uid) {
    AbelVec res = L_->m3a_residual(t, Uid);
    CheckItem it;
    it.condition = "M3a";
    it.subgroups = {label(Q, Uid)};
    it.certified_precision = 1;
    it.pass = A_->is_zero_at(res, 1);
    if (!it.pass) it.witness = residual_string(res);
    rep.add(std::move(it));
  }

  // (M4): V in C(G,Z)
  for (int Vid : Q.cyclic_ids()) {
    AbelVec lhs = L_->alpha_U(t.comp[Vid]);
    AbelVec prod = A_->aone(Vid);
    for (int wid : Q.sub(Vid).pcv) {
      AbelVec aw = L_->alpha_U(t.comp[wid]);
      AbelVec paw = A_->phi_ab(aw);
      prod = A_->amul(prod, L_->restrict_abelian(paw, Vid));  // W' = V
    }
    AbelVec diff = A_->sub(lhs, prod);
    Membership m = A_->in_p_sigma_image(diff);
    CheckItem it;
    it.condition = "M4";
    it.subgroups = {label(Q, Vid)};
    it.pass = m.member;
    it.certified_precision = m.cert;
    it.witness = witness_string(m);
    rep.add(std::move(it));
  }
  return rep;
}

GroupVec Verify::random_one_unit(Rng& rng) const {
  const Quotient& Q = A_->Q();
  GroupVec j = A_->gzero();
  for (int e = 0; e < Q.order(); ++e)
    for (unsigned s = 0; s < A_->f(); ++s) j.c[(size_t)e * A_->f() + s] = rng.below(A_->O().mod().m);
  CoeffElt a = A_->gaug(j);
  j = A_->sub(j, A_->gelt(Q.one(), a));  // augmentation 0: j in Jac
  return A_->add(A_->gone(), j);
}

GroupVec Verify::random_unit(Rng& rng) const {
  const Quotient& Q = A_->Q();
  GroupVec x = random_one_unit(rng);
  x = A_->gmulv(x, A_->gelt((int)rng.below(Q.order()), A_->O().one()));
  u64 r = 1 + rng.below(A_->p() - 1);
  CoeffElt zeta = A_->O().teichmuller(A_->O().from_int(r));
  return A_->scalar_mul(x, zeta);
}

ClassVec Verify::random_class(Rng& rng) const {
  ClassVec f = A_->czero(A_->Q().id_G());
  for (auto& x : f.c) x = rng.below(A_->O().mod().m);
  return f;
}

CheckReport Verify::diagram_harness(Rng& rng, const HarnessOptions& opt) const {
  const Quotient& Q = A_->Q();
  CheckReport rep;
  rep.level = Q.level();
  rep.k = A_->kres();

  // additive side: beta round-trips and Psi membership
  for (int s = 0; s < opt.samples; ++s) {
    ClassVec f = random_class(rng);
    Tuple bt = A_->beta(f);
    CheckReport ra = check_A(bt);
    CheckItem it;
    it.condition = "image-beta:check_A";
    it.pass = ra.ok;
    it.certified_precision = A_->kres();
    rep.add(std::move(it));

    ClassVec back = A_->descale_integral(A_->delta_section(A_->pr_cyc(bt)));
    CheckItem it2;
    it2.condition = "inverse:delta.pr_cyc.beta=id";
    unsigned prec = std::min(A_->kres(), A_->value_prec(back));
    it2.certified_precision = prec;
    it2.pass = A_->equal_at(back, f, prec);
    rep.add(std::move(it2));

    Tuple bt2 = A_->beta(back);
    CheckItem it3;
    it3.condition = "iso-additive:beta.delta=id_on_image";
    it3.pass = true;
    it3.certified_precision = prec;
    for (int uid = 0; uid < Q.n_subgroups(); ++uid)
      it3.pass = it3.pass && A_->equal_at(bt2.comp[uid], bt.comp[uid], prec);
    rep.add(std::move(it3));
  }

  // multiplicative side
  for (int s = 0; s < opt.samples; ++s) {
    GroupVec x = random_unit(rng);
    Tuple th = K_->theta(x);
    CheckReport rm = check_M(th);
    CheckItem it;
    it.condition = "image-theta:check_M";
    it.pass = rm.ok;
    it.certified_precision = A_->kres();
    if (!rm.ok)
      for (auto& fi : rm.items)
        if (!fi.pass) { it.witness = fi.condition + "@" + (fi.subgroups.empty() ? "" : fi.subgroups[0]); break; }
    rep.add(std::move(it));

    // beta-L square
    ClassVec lg = L_->log_unit(K_->teichmuller_decompose(x).second);
    ClassVec ph = A_->phi_class(lg);
    ph.scale += 1;
    ClassVec Lx_raw = opt.mutate_skip_phi_in_L ? lg : A_->sub(lg, ph);
    CheckItem it2;
    it2.condition = "beta-L:scriptL.theta=beta.L";
    try {
      ClassVec Lx = A_->descale_integral(Lx_raw);
      Tuple lhs = L_->script_L(th);
      Tuple rhs = A_->beta(Lx);
      bool pass = true;
      unsigned prec = A_->kres();
      for (int uid = 0; uid < Q.n_subgroups(); ++uid) {
        unsigned pr = std::min({A_->kres(), A_->value_prec(lhs.comp[uid]), A_->value_prec(rhs.comp[uid])});
        prec = std::min(prec, pr);
        pass = pass && A_->equal_at(lhs.comp[uid], rhs.comp[uid], pr);
      }
      it2.pass = pass;
      it2.certified_precision = prec;
    } catch (const Error& e) {
      it2.pass = false;
      it2.witness = e.what();
    }
    rep.add(std::move(it2));

    // Lemma LG
    {
      Tuple sl = L_->script_L(th);
      AbelVec yG = th.comp[Q.id_G()];
      AbelVec arg = A_->amul(A_->apow(yG, A_->p()), A_->ainvert(A_->phi_ab(yG)));
      AbelVec lg2 = L_->log_1p(arg);
      lg2.scale += 1;
      unsigned prec = std::min({A_->kres(), A_->value_prec(sl.comp[Q.id_G()]), A_->value_prec(lg2)});
      CheckItem it3;
      it3.condition = "LG:scriptL_G=(1/p)log(y^p/phi(y))";
      it3.certified_precision = prec;
      it3.pass = A_->equal_at(sl.comp[Q.id_G()], lg2, prec);
      rep.add(std::move(it3));
    }

    // exact-sequence checkables
    {
      ClassVec Lx = L_->integral_log_L(x);
      CheckItem it4;
      it4.condition = "exactsequ:omega.L=1";
      it4.certified_precision = std::min(A_->kres(), A_->value_prec(Lx));
      it4.pass = (A_->omega(Lx) == 0);
      rep.add(std::move(it4));
    }
  }

  // L(zeta * g) = 0
  {
    CoeffElt zeta = A_->O().teichmuller(A_->O().from_int(1 + rng.below(A_->p() - 1)));
    GroupVec zg = A_->scalar_mul(A_->gelt((int)rng.below(Q.order()), A_->O().one()), zeta);
    ClassVec Lzg = L_->integral_log_L(zg);
    CheckItem it;
    it.condition = "exactsequ:L(zeta*g)=0";
    it.certified_precision = std::min(A_->kres(), A_->value_prec(Lzg));
    it.pass = A_->is_zero_at(Lzg, it.certified_precision);
    rep.add(std::move(it));
  }

  return rep;
}

}  // namespace iwk1
