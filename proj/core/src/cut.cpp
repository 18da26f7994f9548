#include <algorithm>
#include <stdexcept>

#include "hyll/kernel.hpp"
#include "hyll/print.hpp"

// Structural cut elimination.  reduce_cut implements the binary case
// analysis on the last rules of the two premises; reduce_cut_bang handles
// unrestricted cuts by recursion on the right derivation.  The measure is
// lexicographic: cut-formula size, then cut kind (linear < unrestricted),
// then the heights of the derivations.

namespace hyll {

namespace {

bool is_right_rule(RuleTag t) {
  switch (t) {
    case RuleTag::TensorR:
    case RuleTag::OneR:
    case RuleTag::LimpR:
    case RuleTag::TopR:
    case RuleTag::WithR:
    case RuleTag::OplusR:
    case RuleTag::ForallR:
    case RuleTag::ExistsR:
    case RuleTag::BangR:
    case RuleTag::AtR:
    case RuleTag::DownR: return true;
    default: return false;
  }
}

int find_equal(const std::vector<Judgement>& delta, const Judgement& a, Domain domain) {
  for (int i = static_cast<int>(delta.size()) - 1; i >= 0; --i)
    if (judgement_equal(delta[i], a, domain)) return i;
  return -1;
}

Proof reduce_cut(const Judgement& a, Proof d1, int idx2, Proof d2);
Proof reduce_cut_bang(const Judgement& a, Proof d1, Proof d2);

Sequent merged_conclusion(const Judgement&, const Proof& d1, int idx2, const Proof& d2) {
  Sequent out = d2->conclusion;
  std::vector<Judgement> delta = d1->conclusion.delta;
  for (int k = 0; k < static_cast<int>(d2->conclusion.delta.size()); ++k)
    if (k != idx2) delta.push_back(d2->conclusion.delta[k]);
  out.delta = std::move(delta);
  return out;
}

// Premise-entry adjustments: lift a derivation into a premise that may
// have introduced parameters or unrestricted hypotheses.
Proof adjust_into(const Proof& d, const Sequent& node, const Sequent& premise) {
  Proof out = d;
  int dt = premise.tscope - node.tscope;
  int dw = premise.wscope - node.wscope;
  if (dt > 0 || dw > 0)
    out = shift_params_proof(out, node.tscope, std::max(dt, 0), node.wscope, std::max(dw, 0));
  if (premise.gamma.size() > node.gamma.size()) {
    std::vector<Judgement> extra(premise.gamma.begin() + node.gamma.size(), premise.gamma.end());
    out = weaken(out, extra);
  }
  return out;
}

// d2's last rule does not act on the cut hypothesis: rebuild the node over
// the merged context and push the cut into the premises holding it.
Proof right_commute(const Judgement& a, const Proof& d1, int idx2, const Proof& d2) {
  const Sequent& s2 = d2->conclusion;
  const Domain D = s2.domain;
  const int n1 = static_cast<int>(d1->conclusion.delta.size());
  auto remap = [&](int k) { return (k < idx2 ? k : k - 1) + n1; };

  RuleApp app = d2->rule;
  if (app.principal >= 0) app.principal = remap(app.principal);
  if (app.tag == RuleTag::TensorR || app.tag == RuleTag::LimpL) {
    bool a_in_split = false;
    std::vector<int> ns;
    for (int k : app.split) {
      if (k == idx2) {
        a_in_split = true;
        continue;
      }
      ns.push_back(remap(k));
    }
    if (a_in_split)
      for (int i = 0; i < n1; ++i) ns.push_back(i);
    app.split = std::move(ns);
  }

  Sequent conclusion = merged_conclusion(a, d1, idx2, d2);

  // which premises received the hypothesis
  std::vector<Proof> premises;
  premises.reserve(d2->premises.size());
  for (size_t i = 0; i < d2->premises.size(); ++i) {
    const Proof& e = d2->premises[i];
    bool has_a;
    switch (d2->rule.tag) {
      case RuleTag::TensorR:
      case RuleTag::LimpL: {
        bool in_split =
            std::find(d2->rule.split.begin(), d2->rule.split.end(), idx2) != d2->rule.split.end();
        has_a = (i == 0) == in_split;
        break;
      }
      default: has_a = true; break;  // single-premise and additive rules keep Delta
    }
    if (!has_a) {
      premises.push_back(e);
      continue;
    }
    int pos = find_equal(e->conclusion.delta, a, D);
    if (pos < 0) throw std::logic_error("cut: lost track of the hypothesis");
    Proof d1a = adjust_into(d1, s2, e->conclusion);
    premises.push_back(reduce_cut(a, d1a, pos, e));
  }
  return mk_proof(std::move(app), std::move(conclusion), std::move(premises));
}

// d2 acts on the cut hypothesis but d1 ends in a left rule or copy:
// rebuild d1's node, cutting d2 into the premises that keep the goal.
Proof left_commute(const Judgement& a, const Proof& d1, int idx2, const Proof& d2) {
  const Sequent& s1 = d1->conclusion;
  const Domain D = s1.domain;

  Sequent conclusion = d2->conclusion;
  {
    std::vector<Judgement> delta = s1.delta;
    for (int k = 0; k < static_cast<int>(d2->conclusion.delta.size()); ++k)
      if (k != idx2) delta.push_back(d2->conclusion.delta[k]);
    conclusion.delta = std::move(delta);
    conclusion.gamma = s1.gamma;
    conclusion.tscope = s1.tscope;
    conclusion.wscope = s1.wscope;
  }

  std::vector<Proof> premises;
  premises.reserve(d1->premises.size());
  for (size_t i = 0; i < d1->premises.size(); ++i) {
    const Proof& e = d1->premises[i];
    // every premise of a left rule or copy keeps the goal, except the
    // antecedent premise of -oL
    bool keeps_goal = !(d1->rule.tag == RuleTag::LimpL && i == 0);
    if (keeps_goal) {
      Proof d2a = adjust_into(d2, s1, e->conclusion);
      premises.push_back(reduce_cut(a, e, idx2, d2a));
    } else {
      premises.push_back(e);
    }
  }
  (void)D;
  return mk_proof(d1->rule, std::move(conclusion), std::move(premises));
}

Proof principal_reduce(const Judgement& a, const Proof& d1, int idx2, const Proof& d2) {
  const Domain D = d1->conclusion.domain;
  switch (a.prop->tag) {
    case PropTag::Tensor: {
      // *R against *L
      const Proof& dA = d1->premises[0];
      const Proof& dB = d1->premises[1];
      const Proof& e = d2->premises[0];
      Judgement ja{a.prop->left, a.world}, jb{a.prop->right, a.world};
      // in e the two components sit at idx2 and idx2+1
      int posB = idx2 + 1;
      if (posB >= static_cast<int>(e->conclusion.delta.size()) ||
          !judgement_equal(e->conclusion.delta[posB], jb, D))
        posB = find_equal(e->conclusion.delta, jb, D);
      Proof t1 = reduce_cut(jb, dB, posB, e);
      int posA = static_cast<int>(dB->conclusion.delta.size()) + idx2;
      if (!judgement_equal(t1->conclusion.delta[posA], ja, D))
        posA = find_equal(t1->conclusion.delta, ja, D);
      return reduce_cut(ja, dA, posA, t1);
    }
    case PropTag::One: return d2->premises[0];
    case PropTag::Limp: {
      // -oR against -oL
      const Proof& dr = d1->premises[0];  // Delta1, A ==> B
      const Proof& eA = d2->premises[0];  // Delta2a ==> A
      const Proof& eB = d2->premises[1];  // Delta2b, B ==> C
      Judgement ja{a.prop->left, a.world}, jb{a.prop->right, a.world};
      int posA = find_equal(dr->conclusion.delta, ja, D);
      Proof t1 = reduce_cut(ja, eA, posA, dr);  // Delta2a ++ Delta1 ==> B
      int posB = find_equal(eB->conclusion.delta, jb, D);
      return reduce_cut(jb, t1, posB, eB);
    }
    case PropTag::With: {
      int k = d2->rule.which;
      const Proof& dk = d1->premises[k - 1];
      Judgement jk{k == 1 ? a.prop->left : a.prop->right, a.world};
      return reduce_cut(jk, dk, idx2, d2->premises[0]);
    }
    case PropTag::Oplus: {
      int k = d1->rule.which;
      Judgement jk{k == 1 ? a.prop->left : a.prop->right, a.world};
      return reduce_cut(jk, d1->premises[0], idx2, d2->premises[k - 1]);
    }
    case PropTag::Bang: {
      Judgement ja{a.prop->left, a.world};
      return reduce_cut_bang(ja, d1->premises[0], d2->premises[0]);
    }
    case PropTag::ForallT: {
      const Term& tau = *d2->rule.term_witness;
      int level = d1->conclusion.tscope;
      Proof dr = subst_param_t_proof(d1->premises[0], level, tau);
      Judgement ja{open_term(a.prop->left, tau), a.world};
      return reduce_cut(ja, dr, idx2, d2->premises[0]);
    }
    case PropTag::ForallW: {
      const WorldExpr& tau = *d2->rule.world_witness;
      int level = d1->conclusion.wscope;
      Proof dr = subst_param_w_proof(d1->premises[0], level, tau);
      Judgement ja{open_world(a.prop->left, tau), a.world};
      return reduce_cut(ja, dr, idx2, d2->premises[0]);
    }
    case PropTag::ExistsT: {
      const Term& tau = *d1->rule.term_witness;
      int level = d2->conclusion.tscope;
      Proof e = subst_param_t_proof(d2->premises[0], level, tau);
      Judgement ja{open_term(a.prop->left, tau), a.world};
      return reduce_cut(ja, d1->premises[0], idx2, e);
    }
    case PropTag::ExistsW: {
      const WorldExpr& tau = *d1->rule.world_witness;
      int level = d2->conclusion.wscope;
      Proof e = subst_param_w_proof(d2->premises[0], level, tau);
      Judgement ja{open_world(a.prop->left, tau), a.world};
      return reduce_cut(ja, d1->premises[0], idx2, e);
    }
    case PropTag::At: {
      Judgement ja{a.prop->left, a.prop->world};
      return reduce_cut(ja, d1->premises[0], idx2, d2->premises[0]);
    }
    case PropTag::Down: {
      Judgement ja = d1->premises[0]->conclusion.goal;
      return reduce_cut(ja, d1->premises[0], idx2, d2->premises[0]);
    }
    default: throw std::logic_error("principal cut on a connective without left rule");
  }
}

Proof reduce_cut(const Judgement& a, Proof d1, int idx2, Proof d2) {
  const Domain D = d2->conclusion.domain;

  // init on either side collapses immediately
  if (d2->rule.tag == RuleTag::Init) return d1;
  if (d2->rule.tag == RuleTag::OneR || d2->rule.tag == RuleTag::BangR)
    throw std::logic_error("cut hypothesis in an empty context");

  bool principal2;
  switch (d2->rule.tag) {
    case RuleTag::TensorL:
    case RuleTag::OneL:
    case RuleTag::LimpL:
    case RuleTag::ZeroL:
    case RuleTag::WithL:
    case RuleTag::OplusL:
    case RuleTag::ForallL:
    case RuleTag::ExistsL:
    case RuleTag::BangL:
    case RuleTag::AtL:
    case RuleTag::DownL: principal2 = d2->rule.principal == idx2; break;
    default: principal2 = false; break;
  }

  if (!principal2) return right_commute(a, d1, idx2, d2);

  // d2 is principal on the cut hypothesis
  if (d1->rule.tag == RuleTag::Init) return d2;
  if (d1->rule.tag == RuleTag::ZeroL) {
    // absorb: the zero hypothesis closes the merged sequent
    Sequent conclusion = merged_conclusion(a, d1, idx2, d2);
    conclusion.gamma = d1->conclusion.gamma;
    RuleApp app{RuleTag::ZeroL};
    app.principal = d1->rule.principal;
    return mk_proof(app, std::move(conclusion), {});
  }
  if (is_right_rule(d1->rule.tag)) return principal_reduce(a, d1, idx2, d2);
  (void)D;
  return left_commute(a, d1, idx2, d2);
}

Proof reduce_cut_bang(const Judgement& a, Proof d1, Proof d2) {
  const Domain D = d2->conclusion.domain;
  if (gamma_member(d1->conclusion.gamma, a, D)) return d2;  // ambient copy remains

  Sequent conclusion = d2->conclusion;
  {
    std::vector<Judgement> g;
    for (const auto& h : conclusion.gamma)
      if (!judgement_equal(h, a, D)) g.push_back(h);
    conclusion.gamma = std::move(g);
  }

  if (d2->rule.tag == RuleTag::Copy && judgement_equal(*d2->rule.copied, a, D)) {
    Proof e = reduce_cut_bang(a, d1, d2->premises[0]);
    int pos = find_equal(e->conclusion.delta, a, D);
    if (pos < 0) throw std::logic_error("cut!: copied hypothesis missing");
    return reduce_cut(a, d1, pos, e);
  }

  std::vector<Proof> premises;
  premises.reserve(d2->premises.size());
  for (const auto& e : d2->premises) {
    Proof d1a = adjust_into(d1, d2->conclusion, e->conclusion);
    // adjust_into weakens by trailing gamma entries; recompute against the
    // premise as seen without the cut hypothesis
    premises.push_back(reduce_cut_bang(a, d1a, e));
  }
  return mk_proof(d2->rule, std::move(conclusion), std::move(premises));
}

Proof eliminate(const Proof& p) {
  std::vector<Proof> premises;
  premises.reserve(p->premises.size());
  for (const auto& q : p->premises) premises.push_back(eliminate(q));

  if (p->rule.tag == RuleTag::Cut) {
    const Judgement& a = *p->rule.cut_judgement;
    Proof e1 = premises[0];
    Proof e2 = premises[1];
    int pos = find_equal(e2->conclusion.delta, a, p->conclusion.domain);
    if (pos < 0) throw std::logic_error("cut: hypothesis not in right premise");
    return reduce_cut(a, e1, pos, e2);
  }
  if (p->rule.tag == RuleTag::CutBang) {
    const Judgement& a = *p->rule.cut_judgement;
    return reduce_cut_bang(a, premises[0], premises[1]);
  }
  return mk_proof(p->rule, p->conclusion, std::move(premises));
}

}  // namespace

Proof cut_eliminate(const Proof& p) { return eliminate(p); }

}  // namespace hyll
