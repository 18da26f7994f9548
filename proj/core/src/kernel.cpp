#include "hyll/kernel.hpp"

#include <algorithm>
#include <map>

#include "hyll/print.hpp"

namespace hyll {

const char* rule_name(RuleTag t) {
  switch (t) {
    case RuleTag::Init: return "init";
    case RuleTag::Copy: return "copy";
    case RuleTag::TensorR: return "*R";
    case RuleTag::TensorL: return "*L";
    case RuleTag::OneR: return "1R";
    case RuleTag::OneL: return "1L";
    case RuleTag::LimpR: return "-oR";
    case RuleTag::LimpL: return "-oL";
    case RuleTag::TopR: return "topR";
    case RuleTag::ZeroL: return "0L";
    case RuleTag::WithR: return "&R";
    case RuleTag::WithL: return "&L";
    case RuleTag::OplusR: return "+R";
    case RuleTag::OplusL: return "+L";
    case RuleTag::ForallR: return "faR";
    case RuleTag::ForallL: return "faL";
    case RuleTag::ExistsR: return "exR";
    case RuleTag::ExistsL: return "exL";
    case RuleTag::BangR: return "!R";
    case RuleTag::BangL: return "!L";
    case RuleTag::AtR: return "atR";
    case RuleTag::AtL: return "atL";
    case RuleTag::DownR: return "dnR";
    case RuleTag::DownL: return "dnL";
    case RuleTag::Cut: return "cut";
    case RuleTag::CutBang: return "cut!";
  }
  return "?";
}

std::optional<RuleTag> rule_from_name(const std::string& name) {
  static const std::map<std::string, RuleTag> table = [] {
    std::map<std::string, RuleTag> m;
    for (int i = 0; i <= static_cast<int>(RuleTag::CutBang); ++i) {
      RuleTag t = static_cast<RuleTag>(i);
      m[rule_name(t)] = t;
    }
    return m;
  }();
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

Proof mk_proof(RuleApp rule, Sequent conclusion, std::vector<Proof> premises) {
  ProofNode n;
  n.rule = std::move(rule);
  n.conclusion = std::move(conclusion);
  n.premises = std::move(premises);
  return std::make_shared<const ProofNode>(std::move(n));
}

std::string to_string(const CheckReport& r) {
  if (r.ok) return "ok";
  std::string out = "FAIL at [";
  for (size_t i = 0; i < r.path.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(r.path[i]);
  }
  out += "] rule " + r.rule + ": " + r.reason;
  return out;
}

// --- apply_rule ----------------------------------------------------------

namespace {

ApplyResult fail(std::string msg) {
  ApplyResult r;
  r.error = std::move(msg);
  return r;
}

ApplyResult done(std::vector<Sequent> ps) {
  ApplyResult r;
  r.ok = true;
  r.premises = std::move(ps);
  return r;
}

bool valid_delta_index(const Sequent& s, int i) {
  return i >= 0 && i < static_cast<int>(s.delta.size());
}

std::vector<Judgement> delta_without(const std::vector<Judgement>& d, int i) {
  std::vector<Judgement> out;
  out.reserve(d.size() - 1);
  for (int k = 0; k < static_cast<int>(d.size()); ++k)
    if (k != i) out.push_back(d[k]);
  return out;
}

// Splits delta (minus the principal) into premise-1 / premise-2 parts.
bool split_delta(const Sequent& s, const std::vector<int>& split, int principal,
                 std::vector<Judgement>& first, std::vector<Judgement>& second,
                 std::string& err) {
  std::vector<bool> take(s.delta.size(), false);
  for (int i : split) {
    if (!valid_delta_index(s, i) || i == principal) {
      err = "split index out of range";
      return false;
    }
    if (take[i]) {
      err = "duplicate split index";
      return false;
    }
    take[i] = true;
  }
  for (int k = 0; k < static_cast<int>(s.delta.size()); ++k) {
    if (k == principal) continue;
    (take[k] ? first : second).push_back(s.delta[k]);
  }
  return true;
}

bool world_witness_ok(const WorldExpr& e, int tscope, int wscope) {
  switch (e->tag) {
    case WorldTag::Identity:
    case WorldTag::Lit: return true;
    case WorldTag::Var:
    case WorldTag::BVar: return false;
    case WorldTag::Param: return e->index < wscope;
    case WorldTag::Compose:
      return world_witness_ok(e->left, tscope, wscope) &&
             world_witness_ok(e->right, tscope, wscope);
    case WorldTag::RateRef:
      return term_closed(*e->rate_term, 0) && max_term_param(*e->rate_term) < tscope;
  }
  return false;
}

bool term_witness_ok(const Term& t, int tscope) {
  return term_closed(t, 0) && max_term_param(t) < tscope;
}

}  // namespace

ApplyResult apply_rule(const Sequent& s, const RuleApp& app) {
  const Domain D = s.domain;
  const Judgement& goal = s.goal;

  auto with_goal = [&](Judgement g) {
    Sequent p = s;
    p.goal = std::move(g);
    return p;
  };

  switch (app.tag) {
    case RuleTag::Init: {
      if (goal.prop->tag != PropTag::Atom) return fail("init: goal not atomic");
      if (s.delta.size() != 1) return fail("init: linear context must be the goal alone");
      if (!judgement_equal(s.delta[0], goal, D))
        return fail("init: hypothesis differs from goal");
      return done({});
    }
    case RuleTag::Copy: {
      if (!app.copied) return fail("copy: missing judgement");
      if (!gamma_member(s.gamma, *app.copied, D)) return fail("copy: not in Gamma");
      Sequent p = s;
      p.delta.push_back(*app.copied);
      return done({p});
    }
    case RuleTag::TensorR: {
      if (goal.prop->tag != PropTag::Tensor) return fail("*R: goal not a tensor");
      std::vector<Judgement> d1, d2;
      std::string err;
      if (!split_delta(s, app.split, -1, d1, d2, err)) return fail("*R: " + err);
      Sequent p1 = s, p2 = s;
      p1.delta = std::move(d1);
      p1.goal = {goal.prop->left, goal.world};
      p2.delta = std::move(d2);
      p2.goal = {goal.prop->right, goal.world};
      return done({p1, p2});
    }
    case RuleTag::TensorL: {
      if (!valid_delta_index(s, app.principal)) return fail("*L: bad principal");
      const Judgement& j = s.delta[app.principal];
      if (j.prop->tag != PropTag::Tensor) return fail("*L: principal not a tensor");
      Sequent p = s;
      p.delta[app.principal] = {j.prop->left, j.world};
      p.delta.insert(p.delta.begin() + app.principal + 1, Judgement{j.prop->right, j.world});
      return done({p});
    }
    case RuleTag::OneR: {
      if (goal.prop->tag != PropTag::One) return fail("1R: goal not 1");
      if (!s.delta.empty()) return fail("1R: linear context must be empty");
      return done({});
    }
    case RuleTag::OneL: {
      if (!valid_delta_index(s, app.principal)) return fail("1L: bad principal");
      if (s.delta[app.principal].prop->tag != PropTag::One) return fail("1L: principal not 1");
      Sequent p = s;
      p.delta = delta_without(s.delta, app.principal);
      return done({p});
    }
    case RuleTag::LimpR: {
      if (goal.prop->tag != PropTag::Limp) return fail("-oR: goal not -o");
      Sequent p = s;
      p.delta.push_back({goal.prop->left, goal.world});
      p.goal = {goal.prop->right, goal.world};
      return done({p});
    }
    case RuleTag::LimpL: {
      if (!valid_delta_index(s, app.principal)) return fail("-oL: bad principal");
      const Judgement j = s.delta[app.principal];
      if (j.prop->tag != PropTag::Limp) return fail("-oL: principal not -o");
      std::vector<Judgement> d1, d2;
      std::string err;
      if (!split_delta(s, app.split, app.principal, d1, d2, err)) return fail("-oL: " + err);
      Sequent p1 = s, p2 = s;
      p1.delta = std::move(d1);
      p1.goal = {j.prop->left, j.world};
      p2.delta = std::move(d2);
      p2.delta.push_back({j.prop->right, j.world});
      return done({p1, p2});
    }
    case RuleTag::TopR: {
      if (goal.prop->tag != PropTag::Top) return fail("topR: goal not top");
      return done({});
    }
    case RuleTag::ZeroL: {
      if (!valid_delta_index(s, app.principal)) return fail("0L: bad principal");
      if (s.delta[app.principal].prop->tag != PropTag::Zero) return fail("0L: principal not 0");
      return done({});
    }
    case RuleTag::WithR: {
      if (goal.prop->tag != PropTag::With) return fail("&R: goal not &");
      return done({with_goal({goal.prop->left, goal.world}),
                   with_goal({goal.prop->right, goal.world})});
    }
    case RuleTag::WithL: {
      if (!valid_delta_index(s, app.principal)) return fail("&L: bad principal");
      const Judgement& j = s.delta[app.principal];
      if (j.prop->tag != PropTag::With) return fail("&L: principal not &");
      if (app.which != 1 && app.which != 2) return fail("&L: which must be 1 or 2");
      Sequent p = s;
      p.delta[app.principal] = {app.which == 1 ? j.prop->left : j.prop->right, j.world};
      return done({p});
    }
    case RuleTag::OplusR: {
      if (goal.prop->tag != PropTag::Oplus) return fail("+R: goal not +");
      if (app.which != 1 && app.which != 2) return fail("+R: which must be 1 or 2");
      return done({with_goal({app.which == 1 ? goal.prop->left : goal.prop->right, goal.world})});
    }
    case RuleTag::OplusL: {
      if (!valid_delta_index(s, app.principal)) return fail("+L: bad principal");
      const Judgement& j = s.delta[app.principal];
      if (j.prop->tag != PropTag::Oplus) return fail("+L: principal not +");
      Sequent p1 = s, p2 = s;
      p1.delta[app.principal] = {j.prop->left, j.world};
      p2.delta[app.principal] = {j.prop->right, j.world};
      return done({p1, p2});
    }
    case RuleTag::ForallR: {
      Sequent p = s;
      if (goal.prop->tag == PropTag::ForallT) {
        p.goal = {open_term(goal.prop->left, Term::param(s.tscope)), goal.world};
        p.tscope = s.tscope + 1;
      } else if (goal.prop->tag == PropTag::ForallW) {
        p.goal = {open_world(goal.prop->left, w_param(s.wscope)), goal.world};
        p.wscope = s.wscope + 1;
      } else {
        return fail("faR: goal not a universal");
      }
      return done({p});
    }
    case RuleTag::ForallL: {
      if (!valid_delta_index(s, app.principal)) return fail("faL: bad principal");
      const Judgement& j = s.delta[app.principal];
      Sequent p = s;
      if (j.prop->tag == PropTag::ForallT) {
        if (!app.term_witness) return fail("faL: missing term witness");
        if (!term_witness_ok(*app.term_witness, s.tscope)) return fail("faL: ill-scoped witness");
        p.delta[app.principal] = {open_term(j.prop->left, *app.term_witness), j.world};
      } else if (j.prop->tag == PropTag::ForallW) {
        if (!app.world_witness) return fail("faL: missing world witness");
        if (!world_witness_ok(*app.world_witness, s.tscope, s.wscope))
          return fail("faL: ill-scoped world witness");
        p.delta[app.principal] = {open_world(j.prop->left, *app.world_witness), j.world};
      } else {
        return fail("faL: principal not a universal");
      }
      return done({p});
    }
    case RuleTag::ExistsR: {
      Sequent p = s;
      if (goal.prop->tag == PropTag::ExistsT) {
        if (!app.term_witness) return fail("exR: missing term witness");
        if (!term_witness_ok(*app.term_witness, s.tscope)) return fail("exR: ill-scoped witness");
        p.goal = {open_term(goal.prop->left, *app.term_witness), goal.world};
      } else if (goal.prop->tag == PropTag::ExistsW) {
        if (!app.world_witness) return fail("exR: missing world witness");
        if (!world_witness_ok(*app.world_witness, s.tscope, s.wscope))
          return fail("exR: ill-scoped world witness");
        p.goal = {open_world(goal.prop->left, *app.world_witness), goal.world};
      } else {
        return fail("exR: goal not an existential");
      }
      return done({p});
    }
    case RuleTag::ExistsL: {
      if (!valid_delta_index(s, app.principal)) return fail("exL: bad principal");
      const Judgement& j = s.delta[app.principal];
      Sequent p = s;
      if (j.prop->tag == PropTag::ExistsT) {
        p.delta[app.principal] = {open_term(j.prop->left, Term::param(s.tscope)), j.world};
        p.tscope = s.tscope + 1;
      } else if (j.prop->tag == PropTag::ExistsW) {
        p.delta[app.principal] = {open_world(j.prop->left, w_param(s.wscope)), j.world};
        p.wscope = s.wscope + 1;
      } else {
        return fail("exL: principal not an existential");
      }
      return done({p});
    }
    case RuleTag::BangR: {
      if (goal.prop->tag != PropTag::Bang) return fail("!R: goal not !");
      if (!s.delta.empty()) return fail("!R: linear context must be empty");
      return done({with_goal({goal.prop->left, goal.world})});
    }
    case RuleTag::BangL: {
      if (!valid_delta_index(s, app.principal)) return fail("!L: bad principal");
      const Judgement j = s.delta[app.principal];
      if (j.prop->tag != PropTag::Bang) return fail("!L: principal not !");
      Sequent p = s;
      p.delta = delta_without(s.delta, app.principal);
      p.gamma.push_back({j.prop->left, j.world});
      return done({p});
    }
    case RuleTag::AtR: {
      if (goal.prop->tag != PropTag::At) return fail("atR: goal not at");
      return done({with_goal({goal.prop->left, goal.prop->world})});
    }
    case RuleTag::AtL: {
      if (!valid_delta_index(s, app.principal)) return fail("atL: bad principal");
      const Judgement& j = s.delta[app.principal];
      if (j.prop->tag != PropTag::At) return fail("atL: principal not at");
      Sequent p = s;
      p.delta[app.principal] = {j.prop->left, j.prop->world};
      return done({p});
    }
    case RuleTag::DownR: {
      if (goal.prop->tag != PropTag::Down) return fail("dnR: goal not dn");
      return done({with_goal({open_world(goal.prop->left, goal.world), goal.world})});
    }
    case RuleTag::DownL: {
      if (!valid_delta_index(s, app.principal)) return fail("dnL: bad principal");
      const Judgement& j = s.delta[app.principal];
      if (j.prop->tag != PropTag::Down) return fail("dnL: principal not dn");
      Sequent p = s;
      p.delta[app.principal] = {open_world(j.prop->left, j.world), j.world};
      return done({p});
    }
    case RuleTag::Cut: {
      if (!app.cut_judgement) return fail("cut: missing cut judgement");
      const Judgement& a = *app.cut_judgement;
      std::vector<Judgement> d1, d2;
      std::string err;
      if (!split_delta(s, app.split, -1, d1, d2, err)) return fail("cut: " + err);
      Sequent p1 = s, p2 = s;
      p1.delta = std::move(d1);
      p1.goal = a;
      p2.delta = std::move(d2);
      p2.delta.push_back(a);
      return done({p1, p2});
    }
    case RuleTag::CutBang: {
      if (!app.cut_judgement) return fail("cut!: missing cut judgement");
      const Judgement& a = *app.cut_judgement;
      Sequent p1 = s, p2 = s;
      p1.delta.clear();
      p1.goal = a;
      p2.gamma.push_back(a);
      return done({p1, p2});
    }
  }
  return fail("unknown rule");
}

// --- checking -------------------------------------------------------------

namespace {

bool check_rec(const Proof& p, bool allow_cut, std::vector<int>& path, CheckReport& report) {
  const RuleApp& app = p->rule;
  if (!allow_cut && (app.tag == RuleTag::Cut || app.tag == RuleTag::CutBang)) {
    report = {false, path, rule_name(app.tag), "cut node in a cut-free proof"};
    return false;
  }
  ApplyResult r = apply_rule(p->conclusion, app);
  if (!r.ok) {
    report = {false, path, rule_name(app.tag), r.error};
    return false;
  }
  if (r.premises.size() != p->premises.size()) {
    report = {false, path, rule_name(app.tag),
              "expected " + std::to_string(r.premises.size()) + " premises, have " +
                  std::to_string(p->premises.size())};
    return false;
  }
  for (size_t i = 0; i < r.premises.size(); ++i) {
    if (!sequent_equal(r.premises[i], p->premises[i]->conclusion)) {
      report = {false, path, rule_name(app.tag),
                "premise " + std::to_string(i) + " mismatch: expected `" +
                    to_string(r.premises[i]) + "` got `" +
                    to_string(p->premises[i]->conclusion) + "`"};
      return false;
    }
    path.push_back(static_cast<int>(i));
    if (!check_rec(p->premises[i], allow_cut, path, report)) return false;
    path.pop_back();
  }
  return true;
}

}  // namespace

CheckReport check_proof(const Proof& p, bool allow_cut) {
  CheckReport report;
  std::vector<int> path;
  check_rec(p, allow_cut, path, report);
  return report;
}

int count_cuts(const Proof& p) {
  int n = (p->rule.tag == RuleTag::Cut || p->rule.tag == RuleTag::CutBang) ? 1 : 0;
  for (const auto& q : p->premises) n += count_cuts(q);
  return n;
}

// --- identity expansion ----------------------------------------------------

namespace {

// Builds a node by applying `app` to `s`; premises are built from the
// computed premise sequents.  Fails loudly: identity expansion only ever
// applies rules that fit.
Proof node(const Sequent& s, RuleApp app, const std::vector<std::function<Proof(const Sequent&)>>& ks) {
  ApplyResult r = apply_rule(s, app);
  if (!r.ok) throw std::logic_error(std::string("internal rule failure: ") + r.error);
  if (r.premises.size() != ks.size()) throw std::logic_error("premise arity mismatch");
  std::vector<Proof> ps;
  ps.reserve(ks.size());
  for (size_t i = 0; i < ks.size(); ++i) ps.push_back(ks[i](r.premises[i]));
  return mk_proof(std::move(app), s, std::move(ps));
}

Proof expand(const Sequent& s);

// s is Gamma ; A @ w ==> A @ w; builds the cut-free identity proof.
Proof expand(const Sequent& s) {
  const Prop& a = s.goal.prop;
  auto rec = [](const Sequent& p) { return expand(p); };
  switch (a->tag) {
    case PropTag::Atom: return node(s, {RuleTag::Init}, {});
    case PropTag::One: {
      RuleApp l{RuleTag::OneL};
      l.principal = 0;
      return node(s, l, {[](const Sequent& p) { return node(p, {RuleTag::OneR}, {}); }});
    }
    case PropTag::Top: return node(s, {RuleTag::TopR}, {});
    case PropTag::Zero: {
      RuleApp l{RuleTag::ZeroL};
      l.principal = 0;
      return node(s, l, {});
    }
    case PropTag::Tensor: {
      RuleApp l{RuleTag::TensorL};
      l.principal = 0;
      return node(s, l, {[&](const Sequent& p) {
        RuleApp r{RuleTag::TensorR};
        r.split = {0};
        return node(p, r, {rec, rec});
      }});
    }
    case PropTag::Limp: {
      return node(s, {RuleTag::LimpR}, {[&](const Sequent& p) {
        RuleApp l{RuleTag::LimpL};
        l.principal = 0;
        l.split = {1};
        return node(p, l, {rec, rec});
      }});
    }
    case PropTag::With: {
      return node(s, {RuleTag::WithR},
                  {[&](const Sequent& p) {
                     RuleApp l{RuleTag::WithL};
                     l.principal = 0;
                     l.which = 1;
                     return node(p, l, {rec});
                   },
                   [&](const Sequent& p) {
                     RuleApp l{RuleTag::WithL};
                     l.principal = 0;
                     l.which = 2;
                     return node(p, l, {rec});
                   }});
    }
    case PropTag::Oplus: {
      RuleApp l{RuleTag::OplusL};
      l.principal = 0;
      return node(s, l,
                  {[&](const Sequent& p) {
                     RuleApp r{RuleTag::OplusR};
                     r.which = 1;
                     return node(p, r, {rec});
                   },
                   [&](const Sequent& p) {
                     RuleApp r{RuleTag::OplusR};
                     r.which = 2;
                     return node(p, r, {rec});
                   }});
    }
    case PropTag::Bang: {
      RuleApp l{RuleTag::BangL};
      l.principal = 0;
      return node(s, l, {[&](const Sequent& p) {
        return node(p, {RuleTag::BangR}, {[&](const Sequent& q) {
          RuleApp c{RuleTag::Copy};
          c.copied = Judgement{q.goal.prop, q.goal.world};
          return node(q, c, {rec});
        }});
      }});
    }
    case PropTag::ForallT:
    case PropTag::ForallW: {
      return node(s, {RuleTag::ForallR}, {[&](const Sequent& p) {
        RuleApp l{RuleTag::ForallL};
        l.principal = 0;
        if (a->tag == PropTag::ForallT) l.term_witness = Term::param(s.tscope);
        else l.world_witness = w_param(s.wscope);
        return node(p, l, {rec});
      }});
    }
    case PropTag::ExistsT:
    case PropTag::ExistsW: {
      RuleApp l{RuleTag::ExistsL};
      l.principal = 0;
      return node(s, l, {[&](const Sequent& p) {
        RuleApp r{RuleTag::ExistsR};
        if (a->tag == PropTag::ExistsT) r.term_witness = Term::param(s.tscope);
        else r.world_witness = w_param(s.wscope);
        return node(p, r, {rec});
      }});
    }
    case PropTag::At: {
      RuleApp l{RuleTag::AtL};
      l.principal = 0;
      return node(s, l, {[&](const Sequent& p) { return node(p, {RuleTag::AtR}, {rec}); }});
    }
    case PropTag::Down: {
      RuleApp l{RuleTag::DownL};
      l.principal = 0;
      return node(s, l, {[&](const Sequent& p) { return node(p, {RuleTag::DownR}, {rec}); }});
    }
  }
  throw std::logic_error("expand: unhandled connective");
}

}  // namespace

Proof identity_expand(const Prop& a, const WorldExpr& w, Domain domain,
                      std::vector<Judgement> gamma, int tscope, int wscope) {
  int tmax = -1, wmax = -1;
  max_prop_params(a, tmax, wmax);
  for (const auto& j : gamma) {
    max_prop_params(j.prop, tmax, wmax);
  }
  Sequent s;
  s.domain = domain;
  s.gamma = std::move(gamma);
  s.delta = {Judgement{a, w}};
  s.goal = {a, w};
  s.tscope = tscope >= 0 ? tscope : tmax + 1;
  s.wscope = wscope >= 0 ? wscope : wmax + 1;
  return expand(s);
}

// --- weaken / contract ------------------------------------------------------

Proof weaken(const Proof& p, const std::vector<Judgement>& extra) {
  Sequent c = p->conclusion;
  c.gamma.insert(c.gamma.end(), extra.begin(), extra.end());
  std::vector<Proof> ps;
  ps.reserve(p->premises.size());
  for (const auto& q : p->premises) ps.push_back(weaken(q, extra));
  return mk_proof(p->rule, std::move(c), std::move(ps));
}

Proof contract(const Proof& p, const Judgement& j) {
  Sequent c = p->conclusion;
  std::vector<Judgement> g;
  bool kept = false;
  for (const auto& h : c.gamma) {
    if (judgement_equal(h, j, c.domain)) {
      if (kept) continue;
      kept = true;
    }
    g.push_back(h);
  }
  c.gamma = std::move(g);
  std::vector<Proof> ps;
  ps.reserve(p->premises.size());
  for (const auto& q : p->premises) ps.push_back(contract(q, j));
  return mk_proof(p->rule, std::move(c), std::move(ps));
}

// --- inversion ---------------------------------------------------------------

std::vector<Sequent> invert(RuleTag tag, const Sequent& s) {
  RuleApp app{tag};
  auto find_principal = [&](std::initializer_list<PropTag> tags) {
    for (int i = 0; i < static_cast<int>(s.delta.size()); ++i)
      for (PropTag t : tags)
        if (s.delta[i].prop->tag == t) return i;
    return -1;
  };
  switch (tag) {
    case RuleTag::WithR:
    case RuleTag::TopR:
    case RuleTag::LimpR:
    case RuleTag::ForallR:
    case RuleTag::DownR:
    case RuleTag::AtR: break;  // goal-side; no principal needed
    case RuleTag::TensorL: app.principal = find_principal({PropTag::Tensor}); break;
    case RuleTag::OneL: app.principal = find_principal({PropTag::One}); break;
    case RuleTag::OplusL: app.principal = find_principal({PropTag::Oplus}); break;
    case RuleTag::ZeroL: app.principal = find_principal({PropTag::Zero}); break;
    case RuleTag::ExistsL: app.principal = find_principal({PropTag::ExistsT, PropTag::ExistsW}); break;
    case RuleTag::BangL: app.principal = find_principal({PropTag::Bang}); break;
    case RuleTag::DownL: app.principal = find_principal({PropTag::Down}); break;
    case RuleTag::AtL: app.principal = find_principal({PropTag::At}); break;
    default: throw std::invalid_argument(std::string("not an invertible rule: ") + rule_name(tag));
  }
  bool needs_principal = !(tag == RuleTag::WithR || tag == RuleTag::TopR || tag == RuleTag::LimpR ||
                           tag == RuleTag::ForallR || tag == RuleTag::DownR || tag == RuleTag::AtR);
  if (needs_principal && app.principal < 0)
    throw std::invalid_argument("principal formula absent");
  ApplyResult r = apply_rule(s, app);
  if (!r.ok) throw std::invalid_argument(r.error);
  return r.premises;
}

// --- parameter plumbing over proofs ------------------------------------------

namespace {

RuleApp map_app(const RuleApp& app, const std::function<Judgement(const Judgement&)>& fj,
                const std::function<Term(const Term&)>& ft,
                const std::function<WorldExpr(const WorldExpr&)>& fw) {
  RuleApp out = app;
  if (out.term_witness) out.term_witness = ft(*out.term_witness);
  if (out.world_witness) out.world_witness = fw(*out.world_witness);
  if (out.copied) out.copied = fj(*out.copied);
  if (out.cut_judgement) out.cut_judgement = fj(*out.cut_judgement);
  return out;
}

}  // namespace

Proof shift_params_proof(const Proof& p, int tf, int tb, int wf, int wb) {
  auto fj = [&](const Judgement& j) { return shift_params_judgement(j, tf, tb, wf, wb); };
  auto ft = [&](const Term& t) { return shift_params_in_term(t, tf, tb); };
  auto fw = [&](const WorldExpr& w) { return shift_params_world(w, tf, tb, wf, wb); };
  Sequent c = p->conclusion;
  for (auto& j : c.gamma) j = fj(j);
  for (auto& j : c.delta) j = fj(j);
  c.goal = fj(c.goal);
  if (c.tscope >= tf) c.tscope += tb;
  if (c.wscope >= wf) c.wscope += wb;
  std::vector<Proof> ps;
  for (const auto& q : p->premises) ps.push_back(shift_params_proof(q, tf, tb, wf, wb));
  return mk_proof(map_app(p->rule, fj, ft, fw), std::move(c), std::move(ps));
}

Proof subst_param_t_proof(const Proof& p, int level, const Term& image) {
  auto fj = [&](const Judgement& j) {
    return Judgement{subst_param_t(j.prop, level, image), subst_param_t_world(j.world, level, image)};
  };
  auto ft = [&](const Term& t) { return subst_param_in_term(t, level, image); };
  auto fw = [&](const WorldExpr& w) { return subst_param_t_world(w, level, image); };
  Sequent c = p->conclusion;
  for (auto& j : c.gamma) j = fj(j);
  for (auto& j : c.delta) j = fj(j);
  c.goal = fj(c.goal);
  c.tscope -= 1;
  std::vector<Proof> ps;
  for (const auto& q : p->premises) ps.push_back(subst_param_t_proof(q, level, image));
  return mk_proof(map_app(p->rule, fj, ft, fw), std::move(c), std::move(ps));
}

Proof subst_param_w_proof(const Proof& p, int level, const WorldExpr& image) {
  auto fj = [&](const Judgement& j) {
    return Judgement{subst_param_w(j.prop, level, image), subst_param_w_world(j.world, level, image)};
  };
  auto ft = [&](const Term& t) { return t; };
  auto fw = [&](const WorldExpr& w) { return subst_param_w_world(w, level, image); };
  Sequent c = p->conclusion;
  for (auto& j : c.gamma) j = fj(j);
  for (auto& j : c.delta) j = fj(j);
  c.goal = fj(c.goal);
  c.wscope -= 1;
  std::vector<Proof> ps;
  for (const auto& q : p->premises) ps.push_back(subst_param_w_proof(q, level, image));
  return mk_proof(map_app(p->rule, fj, ft, fw), std::move(c), std::move(ps));
}

}  // namespace hyll
