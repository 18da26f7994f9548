#include "hyll/focusing.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "hyll/print.hpp"

namespace hyll {

bool pos_judgement_equal(const PosJudgement& a, const PosJudgement& b, Domain d) {
  return world_equal(a.world, b.world, d) && pos_equal(a.prop, b.prop, d);
}

bool neg_judgement_equal(const NegJudgement& a, const NegJudgement& b, Domain d) {
  return world_equal(a.world, b.world, d) && neg_equal(a.prop, b.prop, d);
}

bool is_neutral(const FocSequent& s) {
  return s.form == FocForm::Active && s.omega.empty() && s.goal.stable;
}

const char* ftag_name(FTag t) {
  switch (t) {
    case FTag::Li: return "li";
    case FTag::ShiftL: return "negL";
    case FTag::WithL: return "&L";
    case FTag::LimpL: return "-oL";
    case FTag::ForallL: return "faL";
    case FTag::DownLF: return "dnLF";
    case FTag::AtLF: return "atLF";
    case FTag::Ri: return "ri";
    case FTag::ShiftR: return "posR";
    case FTag::TensorR: return "*R";
    case FTag::OplusR: return "+R";
    case FTag::ExistsR: return "exR";
    case FTag::BangR: return "!R";
    case FTag::DownRF: return "dnRF";
    case FTag::AtRF: return "atRF";
    case FTag::OneR: return "1R";
    case FTag::TensorL: return "*L";
    case FTag::OneL: return "1L";
    case FTag::OplusL: return "+L";
    case FTag::DownLA: return "dnLA";
    case FTag::AtLA: return "atLA";
    case FTag::ExistsL: return "exL";
    case FTag::BangL: return "!L";
    case FTag::ShiftLA: return "posL";
    case FTag::AtomL: return "lp";
    case FTag::ZeroL: return "0L";
    case FTag::WithR: return "&R";
    case FTag::TopR: return "topR";
    case FTag::LimpR: return "-oR";
    case FTag::DownRA: return "dnRA";
    case FTag::AtRA: return "atRA";
    case FTag::ForallR: return "faR";
    case FTag::ShiftRA: return "negR";
    case FTag::AtomR: return "rp";
    case FTag::Lf: return "lf";
    case FTag::Cplf: return "cplf";
    case FTag::Rf: return "rf";
  }
  return "?";
}

std::optional<FTag> ftag_from_name(const std::string& name) {
  static const std::map<std::string, FTag> table = [] {
    std::map<std::string, FTag> m;
    for (int i = 0; i <= static_cast<int>(FTag::Rf); ++i) {
      FTag t = static_cast<FTag>(i);
      m[ftag_name(t)] = m.count(ftag_name(t)) ? m[ftag_name(t)] : t;
    }
    return m;
  }();
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

FocProof mk_foc_proof(FocApp rule, FocSequent conclusion, std::vector<FocProof> premises) {
  FocProofNode n;
  n.rule = std::move(rule);
  n.conclusion = std::move(conclusion);
  n.premises = std::move(premises);
  return std::make_shared<const FocProofNode>(std::move(n));
}

std::string to_string(const FocSequent& s) {
  std::ostringstream os;
  for (size_t i = 0; i < s.gamma.size(); ++i) {
    if (i) os << ", ";
    os << to_string(s.gamma[i].prop) << " @ " << to_string(s.gamma[i].world);
  }
  os << " ; ";
  for (size_t i = 0; i < s.delta.size(); ++i) {
    if (i) os << ", ";
    os << to_string(s.delta[i].prop) << " @ " << to_string(s.delta[i].world);
  }
  switch (s.form) {
    case FocForm::Active:
      os << " ; ";
      for (size_t i = 0; i < s.omega.size(); ++i) {
        if (i) os << ", ";
        os << to_string(s.omega[i].prop) << " @ " << to_string(s.omega[i].world);
      }
      if (s.goal.stable)
        os << " ==> . ; " << to_string(s.goal.stable_goal) << " @ " << to_string(s.goal.world);
      else
        os << " ==> " << to_string(s.goal.active_goal) << " @ " << to_string(s.goal.world) << " ; .";
      break;
    case FocForm::LeftFocus:
      os << " ; [" << to_string(s.lfocus.prop) << " @ " << to_string(s.lfocus.world) << "] ==> "
         << to_string(s.goal.stable_goal) << " @ " << to_string(s.goal.world);
      break;
    case FocForm::RightFocus:
      os << " ==> [" << to_string(s.rfocus.prop) << " @ " << to_string(s.rfocus.world) << "]";
      break;
  }
  return os.str();
}

// --- equality ----------------------------------------------------------------

static std::string pos_key(const PosJudgement& j, Domain d) {
  return canonical_prop(erase_pos(j.prop), d) + "#P @ " + to_string(world_nf(j.world, d));
}

static std::string neg_key(const NegJudgement& j, Domain d) {
  return canonical_prop(erase_neg(j.prop), d) + "#N @ " + to_string(world_nf(j.world, d));
}

std::string foc_sequent_key(const FocSequent& s) {
  // canonical erased props are polarity-faithful here: shifts are placed
  // deterministically, so the erased text plus polarity marker is a key
  std::ostringstream os;
  std::vector<std::string> g, d2, o;
  for (const auto& j : s.gamma) g.push_back(neg_key(j, s.domain));
  for (const auto& j : s.delta) d2.push_back(neg_key(j, s.domain));
  for (const auto& j : s.omega) o.push_back(pos_key(j, s.domain));
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  std::sort(d2.begin(), d2.end());
  std::sort(o.begin(), o.end());
  os << "G[";
  for (auto& k : g) os << k << ";";
  os << "] D[";
  for (auto& k : d2) os << k << ";";
  os << "] O[";
  for (auto& k : o) os << k << ";";
  os << "] ";
  switch (s.form) {
    case FocForm::Active:
      if (s.goal.stable)
        os << "==> . ; " << pos_key({s.goal.stable_goal, s.goal.world}, s.domain);
      else
        os << "==> " << neg_key({s.goal.active_goal, s.goal.world}, s.domain) << " ; .";
      break;
    case FocForm::LeftFocus:
      os << "[" << neg_key(s.lfocus, s.domain)
         << "] ==> " << pos_key({s.goal.stable_goal, s.goal.world}, s.domain);
      break;
    case FocForm::RightFocus: os << "==> [" << pos_key(s.rfocus, s.domain) << "]"; break;
  }
  os << " <" << s.tscope << "," << s.wscope << ">";
  return os.str();
}

bool foc_sequent_equal(const FocSequent& a, const FocSequent& b) {
  if (a.domain != b.domain || a.form != b.form) return false;
  return foc_sequent_key(a) == foc_sequent_key(b);
}

// NOTE: shifts make the erased-prop key ambiguous only if two distinct
// polarized props erase identically at the same polarity; polarization is
// deterministic from the erased prop, and every prop in a focused sequent
// arises from polarize_*, so the key is faithful.

FocSequent canonicalize_foc_params(const FocSequent& s) {
  // reuse the kernel canonicalizer over the erased sequent's params by
  // scanning in a fixed order: delta, omega, goal/focus, gamma
  Sequent probe;
  probe.domain = s.domain;
  for (const auto& j : s.delta) probe.delta.push_back({erase_neg(j.prop), j.world});
  for (const auto& j : s.omega) probe.delta.push_back({erase_pos(j.prop), j.world});
  switch (s.form) {
    case FocForm::Active:
      probe.goal = s.goal.stable ? Judgement{erase_pos(s.goal.stable_goal), s.goal.world}
                                 : Judgement{erase_neg(s.goal.active_goal), s.goal.world};
      break;
    case FocForm::LeftFocus:
      probe.delta.push_back({erase_neg(s.lfocus.prop), s.lfocus.world});
      probe.goal = {erase_pos(s.goal.stable_goal), s.goal.world};
      break;
    case FocForm::RightFocus: probe.goal = {erase_pos(s.rfocus.prop), s.rfocus.world}; break;
  }
  for (const auto& j : s.gamma) probe.gamma.push_back({erase_neg(j.prop), j.world});
  probe.tscope = s.tscope;
  probe.wscope = s.wscope;

  // first-occurrence renumbering of parameters, applied directly on the
  // polarized structures
  struct Scan {
    std::map<int, int> tmap, wmap;
    void term(const Term& t) {
      if (t->tag == TermTag::Param && !tmap.count(t->index))
        tmap[t->index] = static_cast<int>(tmap.size());
      if (t->tag == TermTag::Fn)
        for (const auto& a : t->args) term(a);
    }
    void world(const WorldExpr& e) {
      switch (e->tag) {
        case WorldTag::Param:
          if (!wmap.count(e->index)) wmap[e->index] = static_cast<int>(wmap.size());
          return;
        case WorldTag::Compose:
          world(e->left);
          world(e->right);
          return;
        case WorldTag::RateRef: term(*e->rate_term); return;
        default: return;
      }
    }
    void prop(const Prop& p) {
      switch (p->tag) {
        case PropTag::Atom:
          for (const auto& a : p->args) term(a);
          return;
        case PropTag::One:
        case PropTag::Top:
        case PropTag::Zero: return;
        case PropTag::Tensor:
        case PropTag::Limp:
        case PropTag::With:
        case PropTag::Oplus:
          prop(p->left);
          prop(p->right);
          return;
        case PropTag::At:
          world(p->world);
          prop(p->left);
          return;
        default: prop(p->left); return;
      }
    }
  } scan;
  for (const auto& j : probe.delta) {
    scan.prop(j.prop);
    scan.world(j.world);
  }
  scan.prop(probe.goal.prop);
  scan.world(probe.goal.world);
  for (const auto& j : probe.gamma) {
    scan.prop(j.prop);
    scan.world(j.world);
  }

  const int off_t = s.tscope + 16;
  const int off_w = s.wscope + 16;

  // params are only renamed, never substituted with structure, so a pure
  // renaming pass suffices; unseen params are parked above the offset
  auto rename_term = [&](const Term& t) {
    std::function<Term(const Term&)> go = [&](const Term& x) -> Term {
      switch (x->tag) {
        case TermTag::Param: {
          auto it = scan.tmap.find(x->index);
          return Term::param(it == scan.tmap.end() ? x->index + off_t : it->second);
        }
        case TermTag::Fn: {
          std::vector<Term> args;
          for (const auto& a : x->args) args.push_back(go(a));
          return Term::fn(x->symbol, std::move(args));
        }
        default: return x;
      }
    };
    return go(t);
  };
  std::function<WorldExpr(const WorldExpr&)> rename_world = [&](const WorldExpr& e) -> WorldExpr {
    switch (e->tag) {
      case WorldTag::Param: {
        auto it = scan.wmap.find(e->index);
        return w_param(it == scan.wmap.end() ? e->index + off_w : it->second);
      }
      case WorldTag::Compose: return w_compose(rename_world(e->left), rename_world(e->right));
      case WorldTag::RateRef: return w_rate_ref(rename_term(*e->rate_term));
      default: return e;
    }
  };
  std::function<Pos(const Pos&)> rp;
  std::function<Neg(const Neg&)> rn;
  rp = [&](const Pos& p) -> Pos {
    switch (p->tag) {
      case PosTag::Atom: {
        std::vector<Term> args;
        for (const auto& a : p->args) args.push_back(rename_term(a));
        return pos_atom(p->pred, std::move(args));
      }
      case PosTag::One: return p;
      case PosTag::Zero: return p;
      case PosTag::Tensor: return pos_tensor(rp(p->a), rp(p->b));
      case PosTag::Oplus: return pos_oplus(rp(p->a), rp(p->b));
      case PosTag::Bang: return pos_bang(rn(p->n));
      case PosTag::ExistsT: return pos_exists_t(rp(p->a));
      case PosTag::ExistsW: return pos_exists_w(rp(p->a));
      case PosTag::Down: return pos_down(rp(p->a));
      case PosTag::At: return pos_at(rp(p->a), rename_world(p->world));
      case PosTag::OfNeg: return pos_of_neg(rn(p->n));
    }
    return p;
  };
  rn = [&](const Neg& n) -> Neg {
    switch (n->tag) {
      case NegTag::Atom: {
        std::vector<Term> args;
        for (const auto& a : n->args) args.push_back(rename_term(a));
        return neg_atom(n->pred, std::move(args));
      }
      case NegTag::Top: return n;
      case NegTag::With: return neg_with(rn(n->a), rn(n->b));
      case NegTag::Limp: return neg_limp(rp(n->p), rn(n->a));
      case NegTag::ForallT: return neg_forall_t(rn(n->a));
      case NegTag::ForallW: return neg_forall_w(rn(n->a));
      case NegTag::Down: return neg_down(rn(n->a));
      case NegTag::At: return neg_at(rn(n->a), rename_world(n->world));
      case NegTag::OfPos: return neg_of_pos(rp(n->p));
    }
    return n;
  };

  FocSequent out = s;
  for (auto& j : out.gamma) {
    j.prop = rn(j.prop);
    j.world = rename_world(j.world);
  }
  for (auto& j : out.delta) {
    j.prop = rn(j.prop);
    j.world = rename_world(j.world);
  }
  for (auto& j : out.omega) {
    j.prop = rp(j.prop);
    j.world = rename_world(j.world);
  }
  if (out.form == FocForm::LeftFocus) {
    out.lfocus.prop = rn(out.lfocus.prop);
    out.lfocus.world = rename_world(out.lfocus.world);
  }
  if (out.form == FocForm::RightFocus) {
    out.rfocus.prop = rp(out.rfocus.prop);
    out.rfocus.world = rename_world(out.rfocus.world);
  }
  if (out.goal.active_goal) out.goal.active_goal = rn(out.goal.active_goal);
  if (out.goal.stable_goal) out.goal.stable_goal = rp(out.goal.stable_goal);
  out.goal.world = rename_world(out.goal.world);
  out.tscope = static_cast<int>(scan.tmap.size());
  out.wscope = static_cast<int>(scan.wmap.size());
  return out;
}

// --- apply_focused --------------------------------------------------------

namespace {

FocApplyResult ffail(std::string msg) {
  FocApplyResult r;
  r.error = std::move(msg);
  return r;
}

FocApplyResult fdone(std::vector<FocSequent> ps) {
  FocApplyResult r;
  r.ok = true;
  r.premises = std::move(ps);
  return r;
}

bool split_foc_delta(const FocSequent& s, const std::vector<int>& split,
                     std::vector<NegJudgement>& first, std::vector<NegJudgement>& second,
                     std::string& err) {
  std::vector<bool> take(s.delta.size(), false);
  for (int i : split) {
    if (i < 0 || i >= static_cast<int>(s.delta.size())) {
      err = "split index out of range";
      return false;
    }
    if (take[i]) {
      err = "duplicate split index";
      return false;
    }
    take[i] = true;
  }
  for (int k = 0; k < static_cast<int>(s.delta.size()); ++k)
    (take[k] ? first : second).push_back(s.delta[k]);
  return true;
}

bool foc_term_witness_ok(const Term& t, int tscope) {
  return term_closed(t, 0) && max_term_param(t) < tscope;
}

bool foc_world_witness_ok(const WorldExpr& e, int tscope, int wscope) {
  switch (e->tag) {
    case WorldTag::Identity:
    case WorldTag::Lit: return true;
    case WorldTag::Var:
    case WorldTag::BVar: return false;
    case WorldTag::Param: return e->index < wscope;
    case WorldTag::Compose:
      return foc_world_witness_ok(e->left, tscope, wscope) &&
             foc_world_witness_ok(e->right, tscope, wscope);
    case WorldTag::RateRef:
      return term_closed(*e->rate_term, 0) && max_term_param(*e->rate_term) < tscope;
  }
  return false;
}

}  // namespace

FocApplyResult apply_focused(const FocSequent& s, const FocApp& app) {
  const Domain D = s.domain;
  switch (app.tag) {
    // ---- decisions -------------------------------------------------------
    case FTag::Lf: {
      if (!is_neutral(s)) return ffail("lf: not a neutral sequent");
      if (app.principal < 0 || app.principal >= static_cast<int>(s.delta.size()))
        return ffail("lf: bad principal");
      const NegJudgement& n = s.delta[app.principal];
      if (is_shifted_pos_atom(n.prop)) return ffail("lf: focus on a shifted positive atom");
      FocSequent p = s;
      p.form = FocForm::LeftFocus;
      p.lfocus = n;
      p.delta.erase(p.delta.begin() + app.principal);
      return fdone({p});
    }
    case FTag::Cplf: {
      if (!is_neutral(s)) return ffail("cplf: not a neutral sequent");
      if (app.principal < 0 || app.principal >= static_cast<int>(s.gamma.size()))
        return ffail("cplf: bad principal");
      FocSequent p = s;
      p.form = FocForm::LeftFocus;
      p.lfocus = s.gamma[app.principal];
      return fdone({p});
    }
    case FTag::Rf: {
      if (!is_neutral(s)) return ffail("rf: not a neutral sequent");
      if (is_shifted_neg_atom(s.goal.stable_goal))
        return ffail("rf: focus on a shifted negative atom");
      FocSequent p = s;
      p.form = FocForm::RightFocus;
      p.rfocus = {s.goal.stable_goal, s.goal.world};
      return fdone({p});
    }

    // ---- left focus --------------------------------------------------------
    case FTag::Li: {
      if (s.form != FocForm::LeftFocus) return ffail("li: not under left focus");
      if (s.lfocus.prop->tag != NegTag::Atom) return ffail("li: focus not a negative atom");
      if (!s.delta.empty()) return ffail("li: leftover linear context");
      const Pos& g = s.goal.stable_goal;
      if (g->tag != PosTag::OfNeg || g->n->tag != NegTag::Atom)
        return ffail("li: goal not a shifted negative atom");
      if (g->n->pred != s.lfocus.prop->pred || !(g->n->args == s.lfocus.prop->args))
        return ffail("li: atom mismatch");
      if (!world_equal(s.lfocus.world, s.goal.world, D)) return ffail("li: world mismatch");
      return fdone({});
    }
    case FTag::ShiftL: {
      if (s.form != FocForm::LeftFocus) return ffail("negL: not under left focus");
      if (s.lfocus.prop->tag != NegTag::OfPos) return ffail("negL: focus not a shift");
      FocSequent p = s;
      p.form = FocForm::Active;
      p.omega = {{s.lfocus.prop->p, s.lfocus.world}};
      p.lfocus = {};
      return fdone({p});
    }
    case FTag::WithL: {
      if (s.form != FocForm::LeftFocus || s.lfocus.prop->tag != NegTag::With)
        return ffail("&L: focus not a with");
      if (app.which != 1 && app.which != 2) return ffail("&L: which must be 1 or 2");
      FocSequent p = s;
      p.lfocus.prop = app.which == 1 ? s.lfocus.prop->a : s.lfocus.prop->b;
      return fdone({p});
    }
    case FTag::LimpL: {
      if (s.form != FocForm::LeftFocus || s.lfocus.prop->tag != NegTag::Limp)
        return ffail("-oL: focus not an implication");
      std::vector<NegJudgement> d1, d2;
      std::string err;
      if (!split_foc_delta(s, app.split, d1, d2, err)) return ffail("-oL: " + err);
      FocSequent p1 = s;
      p1.form = FocForm::RightFocus;
      p1.delta = std::move(d1);
      p1.omega.clear();
      p1.rfocus = {s.lfocus.prop->p, s.lfocus.world};
      p1.lfocus = {};
      FocSequent p2 = s;
      p2.delta = std::move(d2);
      p2.lfocus.prop = s.lfocus.prop->a;
      return fdone({p1, p2});
    }
    case FTag::ForallL: {
      if (s.form != FocForm::LeftFocus) return ffail("faL: not under left focus");
      FocSequent p = s;
      if (s.lfocus.prop->tag == NegTag::ForallT) {
        if (!app.term_witness || !foc_term_witness_ok(*app.term_witness, s.tscope))
          return ffail("faL: bad term witness");
        p.lfocus.prop = open_term_neg(s.lfocus.prop->a, *app.term_witness);
      } else if (s.lfocus.prop->tag == NegTag::ForallW) {
        if (!app.world_witness || !foc_world_witness_ok(*app.world_witness, s.tscope, s.wscope))
          return ffail("faL: bad world witness");
        p.lfocus.prop = open_world_neg(s.lfocus.prop->a, *app.world_witness);
      } else {
        return ffail("faL: focus not a universal");
      }
      return fdone({p});
    }
    case FTag::DownLF: {
      if (s.form != FocForm::LeftFocus || s.lfocus.prop->tag != NegTag::Down)
        return ffail("dnLF: focus not dn");
      FocSequent p = s;
      p.lfocus.prop = open_world_neg(s.lfocus.prop->a, s.lfocus.world);
      return fdone({p});
    }
    case FTag::AtLF: {
      if (s.form != FocForm::LeftFocus || s.lfocus.prop->tag != NegTag::At)
        return ffail("atLF: focus not at");
      FocSequent p = s;
      p.lfocus = {s.lfocus.prop->a, s.lfocus.prop->world};
      return fdone({p});
    }

    // ---- right focus -------------------------------------------------------
    case FTag::Ri: {
      if (s.form != FocForm::RightFocus) return ffail("ri: not under right focus");
      if (s.rfocus.prop->tag != PosTag::Atom) return ffail("ri: focus not a positive atom");
      if (s.delta.size() != 1) return ffail("ri: context must be a single shifted atom");
      const Neg& h = s.delta[0].prop;
      if (h->tag != NegTag::OfPos || h->p->tag != PosTag::Atom)
        return ffail("ri: hypothesis not a shifted positive atom");
      if (h->p->pred != s.rfocus.prop->pred || !(h->p->args == s.rfocus.prop->args))
        return ffail("ri: atom mismatch");
      if (!world_equal(s.delta[0].world, s.rfocus.world, D)) return ffail("ri: world mismatch");
      return fdone({});
    }
    case FTag::ShiftR: {
      if (s.form != FocForm::RightFocus || s.rfocus.prop->tag != PosTag::OfNeg)
        return ffail("posR: focus not a shift");
      FocSequent p = s;
      p.form = FocForm::Active;
      p.goal = {false, s.rfocus.prop->n, nullptr, s.rfocus.world};
      p.rfocus = {};
      return fdone({p});
    }
    case FTag::TensorR: {
      if (s.form != FocForm::RightFocus || s.rfocus.prop->tag != PosTag::Tensor)
        return ffail("*R: focus not a tensor");
      std::vector<NegJudgement> d1, d2;
      std::string err;
      if (!split_foc_delta(s, app.split, d1, d2, err)) return ffail("*R: " + err);
      FocSequent p1 = s, p2 = s;
      p1.delta = std::move(d1);
      p1.rfocus = {s.rfocus.prop->a, s.rfocus.world};
      p2.delta = std::move(d2);
      p2.rfocus = {s.rfocus.prop->b, s.rfocus.world};
      return fdone({p1, p2});
    }
    case FTag::OplusR: {
      if (s.form != FocForm::RightFocus || s.rfocus.prop->tag != PosTag::Oplus)
        return ffail("+R: focus not a plus");
      if (app.which != 1 && app.which != 2) return ffail("+R: which must be 1 or 2");
      FocSequent p = s;
      p.rfocus.prop = app.which == 1 ? s.rfocus.prop->a : s.rfocus.prop->b;
      return fdone({p});
    }
    case FTag::ExistsR: {
      if (s.form != FocForm::RightFocus) return ffail("exR: not under right focus");
      FocSequent p = s;
      if (s.rfocus.prop->tag == PosTag::ExistsT) {
        if (!app.term_witness || !foc_term_witness_ok(*app.term_witness, s.tscope))
          return ffail("exR: bad term witness");
        p.rfocus.prop = open_term_pos(s.rfocus.prop->a, *app.term_witness);
      } else if (s.rfocus.prop->tag == PosTag::ExistsW) {
        if (!app.world_witness || !foc_world_witness_ok(*app.world_witness, s.tscope, s.wscope))
          return ffail("exR: bad world witness");
        p.rfocus.prop = open_world_pos(s.rfocus.prop->a, *app.world_witness);
      } else {
        return ffail("exR: focus not an existential");
      }
      return fdone({p});
    }
    case FTag::BangR: {
      if (s.form != FocForm::RightFocus || s.rfocus.prop->tag != PosTag::Bang)
        return ffail("!R: focus not a bang");
      if (!s.delta.empty()) return ffail("!R: linear context must be empty");
      FocSequent p = s;
      p.form = FocForm::Active;
      p.goal = {false, s.rfocus.prop->n, nullptr, s.rfocus.world};
      p.rfocus = {};
      return fdone({p});
    }
    case FTag::DownRF: {
      if (s.form != FocForm::RightFocus || s.rfocus.prop->tag != PosTag::Down)
        return ffail("dnRF: focus not dn");
      FocSequent p = s;
      p.rfocus.prop = open_world_pos(s.rfocus.prop->a, s.rfocus.world);
      return fdone({p});
    }
    case FTag::AtRF: {
      if (s.form != FocForm::RightFocus || s.rfocus.prop->tag != PosTag::At)
        return ffail("atRF: focus not at");
      FocSequent p = s;
      p.rfocus = {s.rfocus.prop->a, s.rfocus.prop->world};
      return fdone({p});
    }
    case FTag::OneR: {
      if (s.form != FocForm::RightFocus || s.rfocus.prop->tag != PosTag::One)
        return ffail("1R: focus not 1");
      if (!s.delta.empty()) return ffail("1R: linear context must be empty");
      return fdone({});
    }

    // ---- active, left zone ---------------------------------------------------
    default: break;
  }

  // active rules share the omega-index plumbing
  if (s.form != FocForm::Active) return ffail("active rule outside the active phase");
  auto omega_item = [&](PosTag want, const char* who) -> std::optional<PosJudgement> {
    if (app.principal < 0 || app.principal >= static_cast<int>(s.omega.size())) return std::nullopt;
    const PosJudgement& it = s.omega[app.principal];
    if (it.prop->tag != want) return std::nullopt;
    (void)who;
    return it;
  };

  switch (app.tag) {
    case FTag::TensorL: {
      auto it = omega_item(PosTag::Tensor, "*L");
      if (!it) return ffail("*L: principal not a tensor");
      FocSequent p = s;
      p.omega[app.principal] = {it->prop->a, it->world};
      p.omega.insert(p.omega.begin() + app.principal + 1, PosJudgement{it->prop->b, it->world});
      return fdone({p});
    }
    case FTag::OneL: {
      auto it = omega_item(PosTag::One, "1L");
      if (!it) return ffail("1L: principal not 1");
      FocSequent p = s;
      p.omega.erase(p.omega.begin() + app.principal);
      return fdone({p});
    }
    case FTag::OplusL: {
      auto it = omega_item(PosTag::Oplus, "+L");
      if (!it) return ffail("+L: principal not a plus");
      FocSequent p1 = s, p2 = s;
      p1.omega[app.principal] = {it->prop->a, it->world};
      p2.omega[app.principal] = {it->prop->b, it->world};
      return fdone({p1, p2});
    }
    case FTag::DownLA: {
      auto it = omega_item(PosTag::Down, "dnLA");
      if (!it) return ffail("dnLA: principal not dn");
      FocSequent p = s;
      p.omega[app.principal] = {open_world_pos(it->prop->a, it->world), it->world};
      return fdone({p});
    }
    case FTag::AtLA: {
      auto it = omega_item(PosTag::At, "atLA");
      if (!it) return ffail("atLA: principal not at");
      FocSequent p = s;
      p.omega[app.principal] = {it->prop->a, it->prop->world};
      return fdone({p});
    }
    case FTag::ExistsL: {
      if (app.principal < 0 || app.principal >= static_cast<int>(s.omega.size()))
        return ffail("exL: bad principal");
      const PosJudgement& it = s.omega[app.principal];
      FocSequent p = s;
      if (it.prop->tag == PosTag::ExistsT) {
        p.omega[app.principal] = {open_term_pos(it.prop->a, Term::param(s.tscope)), it.world};
        p.tscope = s.tscope + 1;
      } else if (it.prop->tag == PosTag::ExistsW) {
        p.omega[app.principal] = {open_world_pos(it.prop->a, w_param(s.wscope)), it.world};
        p.wscope = s.wscope + 1;
      } else {
        return ffail("exL: principal not an existential");
      }
      return fdone({p});
    }
    case FTag::BangL: {
      auto it = omega_item(PosTag::Bang, "!L");
      if (!it) return ffail("!L: principal not a bang");
      FocSequent p = s;
      p.omega.erase(p.omega.begin() + app.principal);
      p.gamma.push_back({it->prop->n, it->world});
      return fdone({p});
    }
    case FTag::ShiftLA: {
      auto it = omega_item(PosTag::OfNeg, "posL");
      if (!it) return ffail("posL: principal not a shift");
      FocSequent p = s;
      p.omega.erase(p.omega.begin() + app.principal);
      p.delta.push_back({it->prop->n, it->world});
      return fdone({p});
    }
    case FTag::AtomL: {
      auto it = omega_item(PosTag::Atom, "lp");
      if (!it) return ffail("lp: principal not a positive atom");
      FocSequent p = s;
      p.omega.erase(p.omega.begin() + app.principal);
      p.delta.push_back({neg_of_pos(it->prop), it->world});
      return fdone({p});
    }
    case FTag::ZeroL: {
      auto it = omega_item(PosTag::Zero, "0L");
      if (!it) return ffail("0L: principal not 0");
      return fdone({});
    }

    // ---- active, goal side -----------------------------------------------------
    case FTag::WithR: {
      if (s.goal.stable || s.goal.active_goal->tag != NegTag::With)
        return ffail("&R: goal not a with");
      FocSequent p1 = s, p2 = s;
      p1.goal.active_goal = s.goal.active_goal->a;
      p2.goal.active_goal = s.goal.active_goal->b;
      return fdone({p1, p2});
    }
    case FTag::TopR: {
      if (s.goal.stable || s.goal.active_goal->tag != NegTag::Top)
        return ffail("topR: goal not top");
      return fdone({});
    }
    case FTag::LimpR: {
      if (s.goal.stable || s.goal.active_goal->tag != NegTag::Limp)
        return ffail("-oR: goal not an implication");
      FocSequent p = s;
      p.omega.push_back({s.goal.active_goal->p, s.goal.world});
      p.goal.active_goal = s.goal.active_goal->a;
      return fdone({p});
    }
    case FTag::DownRA: {
      if (s.goal.stable || s.goal.active_goal->tag != NegTag::Down)
        return ffail("dnRA: goal not dn");
      FocSequent p = s;
      p.goal.active_goal = open_world_neg(s.goal.active_goal->a, s.goal.world);
      return fdone({p});
    }
    case FTag::AtRA: {
      if (s.goal.stable || s.goal.active_goal->tag != NegTag::At)
        return ffail("atRA: goal not at");
      FocSequent p = s;
      p.goal.world = s.goal.active_goal->world;
      p.goal.active_goal = s.goal.active_goal->a;
      return fdone({p});
    }
    case FTag::ForallR: {
      if (s.goal.stable) return ffail("faR: goal not active");
      FocSequent p = s;
      if (s.goal.active_goal->tag == NegTag::ForallT) {
        p.goal.active_goal = open_term_neg(s.goal.active_goal->a, Term::param(s.tscope));
        p.tscope = s.tscope + 1;
      } else if (s.goal.active_goal->tag == NegTag::ForallW) {
        p.goal.active_goal = open_world_neg(s.goal.active_goal->a, w_param(s.wscope));
        p.wscope = s.wscope + 1;
      } else {
        return ffail("faR: goal not a universal");
      }
      return fdone({p});
    }
    case FTag::ShiftRA: {
      if (s.goal.stable || s.goal.active_goal->tag != NegTag::OfPos)
        return ffail("negR: goal not a shift");
      FocSequent p = s;
      p.goal = {true, nullptr, s.goal.active_goal->p, s.goal.world};
      return fdone({p});
    }
    case FTag::AtomR: {
      if (s.goal.stable || s.goal.active_goal->tag != NegTag::Atom)
        return ffail("rp: goal not a negative atom");
      FocSequent p = s;
      p.goal = {true, nullptr, pos_of_neg(s.goal.active_goal), s.goal.world};
      return fdone({p});
    }
    default: return ffail("unknown focused rule");
  }
}

// --- checking -------------------------------------------------------------

namespace {

bool fcheck_rec(const FocProof& p, std::vector<int>& path, CheckReport& report) {
  FocApplyResult r = apply_focused(p->conclusion, p->rule);
  if (!r.ok) {
    report = {false, path, ftag_name(p->rule.tag), r.error};
    return false;
  }
  if (r.premises.size() != p->premises.size()) {
    report = {false, path, ftag_name(p->rule.tag),
              "expected " + std::to_string(r.premises.size()) + " premises, have " +
                  std::to_string(p->premises.size())};
    return false;
  }
  for (size_t i = 0; i < r.premises.size(); ++i) {
    if (!foc_sequent_equal(r.premises[i], p->premises[i]->conclusion)) {
      report = {false, path, ftag_name(p->rule.tag),
                "premise " + std::to_string(i) + " mismatch: expected `" +
                    to_string(r.premises[i]) + "` got `" +
                    to_string(p->premises[i]->conclusion) + "`"};
      return false;
    }
    path.push_back(static_cast<int>(i));
    if (!fcheck_rec(p->premises[i], path, report)) return false;
    path.pop_back();
  }
  return true;
}

}  // namespace

CheckReport check_focused(const FocProof& p) {
  CheckReport report;
  std::vector<int> path;
  fcheck_rec(p, path, report);
  return report;
}

}  // namespace hyll
