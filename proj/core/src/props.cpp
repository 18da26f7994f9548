#include "hyll/props.hpp"

#include <algorithm>
#include <functional>

namespace hyll {

static Prop mk(PropNode n) { return std::make_shared<const PropNode>(std::move(n)); }

Prop p_atom(bool positive, std::string pred, std::vector<Term> args) {
  PropNode n{PropTag::Atom};
  n.positive = positive;
  n.pred = std::move(pred);
  n.args = std::move(args);
  return mk(std::move(n));
}

static Prop binary(PropTag t, Prop a, Prop b) {
  PropNode n{t};
  n.left = std::move(a);
  n.right = std::move(b);
  return mk(std::move(n));
}

static Prop unary(PropTag t, Prop a) {
  PropNode n{t};
  n.left = std::move(a);
  return mk(std::move(n));
}

static Prop nullary(PropTag t) { return mk(PropNode{t}); }

Prop p_tensor(Prop a, Prop b) { return binary(PropTag::Tensor, std::move(a), std::move(b)); }
Prop p_one() { static Prop p = nullary(PropTag::One); return p; }
Prop p_limp(Prop a, Prop b) { return binary(PropTag::Limp, std::move(a), std::move(b)); }
Prop p_with(Prop a, Prop b) { return binary(PropTag::With, std::move(a), std::move(b)); }
Prop p_top() { static Prop p = nullary(PropTag::Top); return p; }
Prop p_oplus(Prop a, Prop b) { return binary(PropTag::Oplus, std::move(a), std::move(b)); }
Prop p_zero() { static Prop p = nullary(PropTag::Zero); return p; }
Prop p_bang(Prop a) { return unary(PropTag::Bang, std::move(a)); }
Prop p_forall_t(Prop body) { return unary(PropTag::ForallT, std::move(body)); }
Prop p_exists_t(Prop body) { return unary(PropTag::ExistsT, std::move(body)); }
Prop p_forall_w(Prop body) { return unary(PropTag::ForallW, std::move(body)); }
Prop p_exists_w(Prop body) { return unary(PropTag::ExistsW, std::move(body)); }
Prop p_down(Prop body) { return unary(PropTag::Down, std::move(body)); }

Prop p_at(Prop a, WorldExpr w) {
  PropNode n{PropTag::At};
  n.left = std::move(a);
  n.world = std::move(w);
  return mk(std::move(n));
}

Prop d_box(Prop a) {
  // dn u. faw w. (A at u.w); under the two binders u = 1, w = 0
  return p_down(p_forall_w(p_at(std::move(a), w_compose(w_bvar(1), w_bvar(0)))));
}

Prop d_dia(Prop a) {
  return p_down(p_exists_w(p_at(std::move(a), w_compose(w_bvar(1), w_bvar(0)))));
}

Prop d_rho(WorldExpr v, Prop a) {
  return p_down(p_at(std::move(a), w_compose(w_bvar(0), shift_world_expr(v, 1, 0))));
}

Prop d_bangbang(Prop a) { return p_forall_w(p_at(std::move(a), w_bvar(0))); }

Prop d_iff_limp(Prop a, Prop b) { return p_with(p_limp(a, b), p_limp(b, a)); }

Prop d_imp(Prop a, Prop b) { return p_limp(p_bang(std::move(a)), std::move(b)); }

// --- world expression traversal -----------------------------------------

template <typename FW, typename FT>
static WorldExpr map_world(const WorldExpr& e, int wdepth, FW&& fw, FT&& ft) {
  switch (e->tag) {
    case WorldTag::Identity:
    case WorldTag::Lit: return e;
    case WorldTag::Var: return e;
    case WorldTag::BVar:
    case WorldTag::Param: return fw(e, wdepth);
    case WorldTag::Compose: {
      WorldExpr l = map_world(e->left, wdepth, fw, ft);
      WorldExpr r = map_world(e->right, wdepth, fw, ft);
      if (l == e->left && r == e->right) return e;
      return w_compose(std::move(l), std::move(r));
    }
    case WorldTag::RateRef: {
      Term t = ft(*e->rate_term);
      if (t == *e->rate_term) return e;
      return w_rate_ref(t);
    }
  }
  return e;
}

WorldExpr shift_world_expr(const WorldExpr& e, int by, int cutoff) {
  return map_world(
      e, cutoff,
      [&](const WorldExpr& v, int d) {
        if (v->tag == WorldTag::BVar && v->index >= d) return w_bvar(v->index + by);
        return v;
      },
      [](const Term& t) { return t; });
}

WorldExpr subst_world_in_world(const WorldExpr& e, const WorldExpr& image, int wdepth) {
  return map_world(
      e, wdepth,
      [&](const WorldExpr& v, int d) {
        if (v->tag != WorldTag::BVar) return v;
        if (v->index == d) return shift_world_expr(image, d, 0);
        if (v->index > d) return w_bvar(v->index - 1);
        return v;
      },
      [](const Term& t) { return t; });
}

WorldExpr subst_term_in_world(const WorldExpr& e, const Term& image, int tdepth) {
  return map_world(
      e, 0, [](const WorldExpr& v, int) { return v; },
      [&](const Term& t) { return subst_term_in_term(t, image, tdepth); });
}

WorldExpr subst_param_w_world(const WorldExpr& e, int level, const WorldExpr& image) {
  return map_world(
      e, 0,
      [&](const WorldExpr& v, int d) {
        if (v->tag != WorldTag::Param) return v;
        if (v->index == level) return shift_world_expr(image, d, 0);
        if (v->index > level) return w_param(v->index - 1);
        return v;
      },
      [](const Term& t) { return t; });
}

WorldExpr subst_param_t_world(const WorldExpr& e, int level, const Term& image) {
  return map_world(
      e, 0, [](const WorldExpr& v, int) { return v; },
      [&](const Term& t) { return subst_param_in_term(t, level, image); });
}

WorldExpr shift_params_world(const WorldExpr& e, int tfrom, int tby, int wfrom, int wby) {
  return map_world(
      e, 0,
      [&](const WorldExpr& v, int) {
        if (v->tag == WorldTag::Param && v->index >= wfrom) return w_param(v->index + wby);
        return v;
      },
      [&](const Term& t) { return shift_params_in_term(t, tfrom, tby); });
}

// --- prop traversal -----------------------------------------------------
//
// One generic recursion parameterized by what happens to terms and worlds
// at each binder depth.  tdepth/wdepth count enclosing term/world binders.

namespace {
struct PropMap {
  // return replacement term for a term at depths (t, w)
  std::function<Term(const Term&, int, int)> on_term;
  std::function<WorldExpr(const WorldExpr&, int, int)> on_world;
};

Prop map_prop(const Prop& p, int td, int wd, const PropMap& m) {
  switch (p->tag) {
    case PropTag::Atom: {
      std::vector<Term> args;
      args.reserve(p->args.size());
      bool changed = false;
      for (const auto& a : p->args) {
        Term a2 = m.on_term(a, td, wd);
        changed = changed || !(a2 == a);
        args.push_back(std::move(a2));
      }
      if (!changed) return p;
      return p_atom(p->positive, p->pred, std::move(args));
    }
    case PropTag::One:
    case PropTag::Top:
    case PropTag::Zero: return p;
    case PropTag::Tensor:
    case PropTag::Limp:
    case PropTag::With:
    case PropTag::Oplus: {
      Prop l = map_prop(p->left, td, wd, m);
      Prop r = map_prop(p->right, td, wd, m);
      if (l == p->left && r == p->right) return p;
      PropNode n{p->tag};
      n.left = std::move(l);
      n.right = std::move(r);
      return mk(std::move(n));
    }
    case PropTag::Bang: {
      Prop l = map_prop(p->left, td, wd, m);
      if (l == p->left) return p;
      return p_bang(std::move(l));
    }
    case PropTag::ForallT:
    case PropTag::ExistsT: {
      Prop l = map_prop(p->left, td + 1, wd, m);
      if (l == p->left) return p;
      PropNode n{p->tag};
      n.left = std::move(l);
      return mk(std::move(n));
    }
    case PropTag::ForallW:
    case PropTag::ExistsW:
    case PropTag::Down: {
      Prop l = map_prop(p->left, td, wd + 1, m);
      if (l == p->left) return p;
      PropNode n{p->tag};
      n.left = std::move(l);
      return mk(std::move(n));
    }
    case PropTag::At: {
      Prop l = map_prop(p->left, td, wd, m);
      WorldExpr w = m.on_world(p->world, td, wd);
      if (l == p->left && w == p->world) return p;
      return p_at(std::move(l), std::move(w));
    }
  }
  return p;
}
}  // namespace

Prop subst_term_in_prop(const Prop& p, const Term& image, int tdepth) {
  PropMap m;
  m.on_term = [&](const Term& t, int td, int) { return subst_term_in_term(t, image, tdepth + td); };
  m.on_world = [&](const WorldExpr& w, int td, int) {
    return subst_term_in_world(w, image, tdepth + td);
  };
  return map_prop(p, 0, 0, m);
}

Prop subst_world_in_prop(const Prop& p, const WorldExpr& image, int wdepth) {
  PropMap m;
  m.on_term = [](const Term& t, int, int) { return t; };
  m.on_world = [&](const WorldExpr& w, int, int wd) {
    return subst_world_in_world(w, image, wdepth + wd);
  };
  return map_prop(p, 0, 0, m);
}

Prop open_term(const Prop& body, const Term& image) { return subst_term_in_prop(body, image, 0); }

Prop open_world(const Prop& body, const WorldExpr& image) {
  return subst_world_in_prop(body, image, 0);
}

Prop subst_param_t(const Prop& p, int level, const Term& image) {
  PropMap m;
  m.on_term = [&](const Term& t, int, int) { return subst_param_in_term(t, level, image); };
  m.on_world = [&](const WorldExpr& w, int, int) { return subst_param_t_world(w, level, image); };
  return map_prop(p, 0, 0, m);
}

Prop subst_param_w(const Prop& p, int level, const WorldExpr& image) {
  PropMap m;
  m.on_term = [](const Term& t, int, int) { return t; };
  m.on_world = [&](const WorldExpr& w, int, int) { return subst_param_w_world(w, level, image); };
  return map_prop(p, 0, 0, m);
}

Prop shift_params_prop(const Prop& p, int tfrom, int tby, int wfrom, int wby) {
  PropMap m;
  m.on_term = [&](const Term& t, int, int) { return shift_params_in_term(t, tfrom, tby); };
  m.on_world = [&](const WorldExpr& w, int, int) {
    return shift_params_world(w, tfrom, tby, wfrom, wby);
  };
  return map_prop(p, 0, 0, m);
}

// --- equality and measures ----------------------------------------------

bool prop_equal(const Prop& a, const Prop& b, Domain domain) {
  if (a == b) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case PropTag::Atom:
      return a->positive == b->positive && a->pred == b->pred && a->args == b->args;
    case PropTag::One:
    case PropTag::Top:
    case PropTag::Zero: return true;
    case PropTag::Tensor:
    case PropTag::Limp:
    case PropTag::With:
    case PropTag::Oplus:
      return prop_equal(a->left, b->left, domain) && prop_equal(a->right, b->right, domain);
    case PropTag::Bang:
    case PropTag::ForallT:
    case PropTag::ExistsT:
    case PropTag::ForallW:
    case PropTag::ExistsW:
    case PropTag::Down: return prop_equal(a->left, b->left, domain);
    case PropTag::At:
      return world_equal(a->world, b->world, domain) && prop_equal(a->left, b->left, domain);
  }
  return false;
}

int prop_size(const Prop& p) {
  switch (p->tag) {
    case PropTag::Atom:
    case PropTag::One:
    case PropTag::Top:
    case PropTag::Zero: return 1;
    case PropTag::Tensor:
    case PropTag::Limp:
    case PropTag::With:
    case PropTag::Oplus: return 1 + prop_size(p->left) + prop_size(p->right);
    default: return 1 + prop_size(p->left);
  }
}

static bool world_wf(const WorldExpr& e, int tdepth, int wdepth) {
  switch (e->tag) {
    case WorldTag::Identity:
    case WorldTag::Lit:
    case WorldTag::Var:
    case WorldTag::Param: return true;
    case WorldTag::BVar: return e->index < wdepth;
    case WorldTag::Compose: return world_wf(e->left, tdepth, wdepth) && world_wf(e->right, tdepth, wdepth);
    case WorldTag::RateRef: return term_closed(*e->rate_term, tdepth);
  }
  return false;
}

bool prop_wf(const Prop& p, int tdepth, int wdepth) {
  switch (p->tag) {
    case PropTag::Atom:
      return std::all_of(p->args.begin(), p->args.end(),
                         [&](const Term& t) { return term_closed(t, tdepth); });
    case PropTag::One:
    case PropTag::Top:
    case PropTag::Zero: return true;
    case PropTag::Tensor:
    case PropTag::Limp:
    case PropTag::With:
    case PropTag::Oplus: return prop_wf(p->left, tdepth, wdepth) && prop_wf(p->right, tdepth, wdepth);
    case PropTag::Bang: return prop_wf(p->left, tdepth, wdepth);
    case PropTag::ForallT:
    case PropTag::ExistsT: return prop_wf(p->left, tdepth + 1, wdepth);
    case PropTag::ForallW:
    case PropTag::ExistsW:
    case PropTag::Down: return prop_wf(p->left, tdepth, wdepth + 1);
    case PropTag::At: return world_wf(p->world, tdepth, wdepth) && prop_wf(p->left, tdepth, wdepth);
  }
  return false;
}

bool prop_pure(const Prop& p) {
  switch (p->tag) {
    case PropTag::Atom:
    case PropTag::One:
    case PropTag::Top:
    case PropTag::Zero: return true;
    case PropTag::Tensor:
    case PropTag::Limp:
    case PropTag::With:
    case PropTag::Oplus: return prop_pure(p->left) && prop_pure(p->right);
    case PropTag::Bang:
    case PropTag::ForallT:
    case PropTag::ExistsT: return prop_pure(p->left);
    case PropTag::ForallW:
    case PropTag::ExistsW:
    case PropTag::Down:
    case PropTag::At: return false;
  }
  return false;
}

void collect_prop_subterms(const Prop& p, std::vector<Term>& out) {
  switch (p->tag) {
    case PropTag::Atom:
      for (const auto& t : p->args) collect_subterms(t, out);
      return;
    case PropTag::One:
    case PropTag::Top:
    case PropTag::Zero: return;
    case PropTag::Tensor:
    case PropTag::Limp:
    case PropTag::With:
    case PropTag::Oplus:
      collect_prop_subterms(p->left, out);
      collect_prop_subterms(p->right, out);
      return;
    case PropTag::At:
    default: collect_prop_subterms(p->left, out); return;
  }
}

void collect_prop_worlds(const Prop& p, std::vector<WorldExpr>& out) {
  switch (p->tag) {
    case PropTag::Atom:
    case PropTag::One:
    case PropTag::Top:
    case PropTag::Zero: return;
    case PropTag::Tensor:
    case PropTag::Limp:
    case PropTag::With:
    case PropTag::Oplus:
      collect_prop_worlds(p->left, out);
      collect_prop_worlds(p->right, out);
      return;
    case PropTag::At:
      if (world_expr_closed(p->world)) out.push_back(p->world);
      collect_prop_worlds(p->left, out);
      return;
    default: collect_prop_worlds(p->left, out); return;
  }
}

static void max_world_params(const WorldExpr& e, int& tmax, int& wmax) {
  switch (e->tag) {
    case WorldTag::Param: wmax = std::max(wmax, e->index); return;
    case WorldTag::Compose:
      max_world_params(e->left, tmax, wmax);
      max_world_params(e->right, tmax, wmax);
      return;
    case WorldTag::RateRef: tmax = std::max(tmax, max_term_param(*e->rate_term)); return;
    default: return;
  }
}

void max_prop_params(const Prop& p, int& tmax, int& wmax) {
  switch (p->tag) {
    case PropTag::Atom:
      for (const auto& t : p->args) tmax = std::max(tmax, max_term_param(t));
      return;
    case PropTag::One:
    case PropTag::Top:
    case PropTag::Zero: return;
    case PropTag::Tensor:
    case PropTag::Limp:
    case PropTag::With:
    case PropTag::Oplus:
      max_prop_params(p->left, tmax, wmax);
      max_prop_params(p->right, tmax, wmax);
      return;
    case PropTag::At:
      max_world_params(p->world, tmax, wmax);
      max_prop_params(p->left, tmax, wmax);
      return;
    default: max_prop_params(p->left, tmax, wmax); return;
  }
}

}  // namespace hyll
