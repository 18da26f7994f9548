#include <stdexcept>

#include "hyll/focusing.hpp"
#include "hyll/print.hpp"

// Forgetting the focusing structure yields an unfocused proof.  The erased
// linear context is laid out as [delta..., omega..., focus?]; every erased
// node computes its kernel rule positions against that layout.

namespace hyll {

Sequent erase_focused_sequent(const FocSequent& s) {
  Sequent out;
  out.domain = s.domain;
  out.tscope = s.tscope;
  out.wscope = s.wscope;
  for (const auto& j : s.gamma) out.gamma.push_back({erase_neg(j.prop), j.world});
  for (const auto& j : s.delta) out.delta.push_back({erase_neg(j.prop), j.world});
  for (const auto& j : s.omega) out.delta.push_back({erase_pos(j.prop), j.world});
  switch (s.form) {
    case FocForm::Active:
      out.goal = s.goal.stable ? Judgement{erase_pos(s.goal.stable_goal), s.goal.world}
                               : Judgement{erase_neg(s.goal.active_goal), s.goal.world};
      break;
    case FocForm::LeftFocus:
      out.delta.push_back({erase_neg(s.lfocus.prop), s.lfocus.world});
      out.goal = {erase_pos(s.goal.stable_goal), s.goal.world};
      break;
    case FocForm::RightFocus: out.goal = {erase_pos(s.rfocus.prop), s.rfocus.world}; break;
  }
  return out;
}

namespace {

Proof erase_rec(const FocProof& p) {
  const FocSequent& s = p->conclusion;
  const Sequent es = erase_focused_sequent(s);
  const int ndelta = static_cast<int>(s.delta.size());
  const int focus_pos = ndelta + static_cast<int>(s.omega.size());  // LeftFocus layout

  auto kids = [&](std::initializer_list<int> ix) {
    std::vector<Proof> out;
    for (int i : ix) out.push_back(erase_rec(p->premises[i]));
    return out;
  };

  switch (p->rule.tag) {
    // decisions
    case FTag::Lf:
    case FTag::Rf: return erase_rec(p->premises[0]);
    case FTag::Cplf: {
      RuleApp app{RuleTag::Copy};
      app.copied = Judgement{erase_neg(s.gamma[p->rule.principal].prop),
                             s.gamma[p->rule.principal].world};
      return mk_proof(app, es, kids({0}));
    }

    // silent shifts and zone moves
    case FTag::ShiftL:
    case FTag::ShiftR:
    case FTag::ShiftLA:
    case FTag::AtomL:
    case FTag::ShiftRA:
    case FTag::AtomR: return erase_rec(p->premises[0]);

    // initial rules
    case FTag::Li:
    case FTag::Ri: return mk_proof({RuleTag::Init}, es, {});

    // under left focus: principal is the focus at the end of the layout
    case FTag::WithL: {
      RuleApp app{RuleTag::WithL};
      app.principal = focus_pos;
      app.which = p->rule.which;
      return mk_proof(app, es, kids({0}));
    }
    case FTag::LimpL: {
      RuleApp app{RuleTag::LimpL};
      app.principal = focus_pos;
      app.split = p->rule.split;  // delta positions coincide in the layout
      return mk_proof(app, es, kids({0, 1}));
    }
    case FTag::ForallL: {
      RuleApp app{RuleTag::ForallL};
      app.principal = focus_pos;
      app.term_witness = p->rule.term_witness;
      app.world_witness = p->rule.world_witness;
      return mk_proof(app, es, kids({0}));
    }
    case FTag::DownLF: {
      RuleApp app{RuleTag::DownL};
      app.principal = focus_pos;
      return mk_proof(app, es, kids({0}));
    }
    case FTag::AtLF: {
      RuleApp app{RuleTag::AtL};
      app.principal = focus_pos;
      return mk_proof(app, es, kids({0}));
    }

    // under right focus
    case FTag::TensorR: {
      RuleApp app{RuleTag::TensorR};
      app.split = p->rule.split;
      return mk_proof(app, es, kids({0, 1}));
    }
    case FTag::OplusR: {
      RuleApp app{RuleTag::OplusR};
      app.which = p->rule.which;
      return mk_proof(app, es, kids({0}));
    }
    case FTag::ExistsR: {
      RuleApp app{RuleTag::ExistsR};
      app.term_witness = p->rule.term_witness;
      app.world_witness = p->rule.world_witness;
      return mk_proof(app, es, kids({0}));
    }
    case FTag::BangR: return mk_proof({RuleTag::BangR}, es, kids({0}));
    case FTag::DownRF: return mk_proof({RuleTag::DownR}, es, kids({0}));
    case FTag::AtRF: return mk_proof({RuleTag::AtR}, es, kids({0}));
    case FTag::OneR: return mk_proof({RuleTag::OneR}, es, {});

    // active left: principal is the omega item offset past delta
    case FTag::TensorL: {
      RuleApp app{RuleTag::TensorL};
      app.principal = ndelta + p->rule.principal;
      return mk_proof(app, es, kids({0}));
    }
    case FTag::OneL: {
      RuleApp app{RuleTag::OneL};
      app.principal = ndelta + p->rule.principal;
      return mk_proof(app, es, kids({0}));
    }
    case FTag::OplusL: {
      RuleApp app{RuleTag::OplusL};
      app.principal = ndelta + p->rule.principal;
      return mk_proof(app, es, kids({0, 1}));
    }
    case FTag::DownLA: {
      RuleApp app{RuleTag::DownL};
      app.principal = ndelta + p->rule.principal;
      return mk_proof(app, es, kids({0}));
    }
    case FTag::AtLA: {
      RuleApp app{RuleTag::AtL};
      app.principal = ndelta + p->rule.principal;
      return mk_proof(app, es, kids({0}));
    }
    case FTag::ExistsL: {
      RuleApp app{RuleTag::ExistsL};
      app.principal = ndelta + p->rule.principal;
      return mk_proof(app, es, kids({0}));
    }
    case FTag::BangL: {
      RuleApp app{RuleTag::BangL};
      app.principal = ndelta + p->rule.principal;
      return mk_proof(app, es, kids({0}));
    }
    case FTag::ZeroL: {
      RuleApp app{RuleTag::ZeroL};
      app.principal = ndelta + p->rule.principal;
      return mk_proof(app, es, {});
    }

    // active goal side
    case FTag::WithR: return mk_proof({RuleTag::WithR}, es, kids({0, 1}));
    case FTag::TopR: return mk_proof({RuleTag::TopR}, es, {});
    case FTag::LimpR: return mk_proof({RuleTag::LimpR}, es, kids({0}));
    case FTag::DownRA: return mk_proof({RuleTag::DownR}, es, kids({0}));
    case FTag::AtRA: return mk_proof({RuleTag::AtR}, es, kids({0}));
    case FTag::ForallR: return mk_proof({RuleTag::ForallR}, es, kids({0}));
  }
  throw std::logic_error("erase: unhandled focused rule");
}

}  // namespace

Proof erase(const FocProof& p) { return erase_rec(p); }

}  // namespace hyll
