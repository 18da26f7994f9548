#include <algorithm>
#include <deque>
#include <map>
#include <memory>

#include "hyll/focusing.hpp"
#include "hyll/print.hpp"

// Fuel-bounded focused proof search.  Delta-splits are resolved by lazy
// input/output threading: each subtree receives the currently available
// resources and reports what it consumed; top and 0 leaves report slack
// and leftovers are routed to them afterwards.  The search records a
// choice tree only; the proof and all its sequents are reconstructed by
// folding apply_focused over the choices, so reconstruction and checking
// share one rule engine.

namespace hyll {

namespace {

struct Choice {
  FTag tag = FTag::Li;
  int which = 0;
  std::optional<Term> tw;
  std::optional<WorldExpr> ww;
  int gamma_index = -1;
  int slot_id = -1;                // lf focus / ri consumption / created slot
  int omega_index = -1;
  std::vector<int> premise1_slots; // split: ids routed to premise 1
  std::vector<int> consumed;       // sorted ids consumed in this subtree
  bool slack = false;
  std::vector<std::unique_ptr<Choice>> kids;
};

using ChoicePtr = std::unique_ptr<Choice>;

struct Res {
  ChoicePtr choice;
  std::vector<int> leftover;
};

struct Engine {
  Domain domain;
  SearchBudget budget;
  ActiveOrder order;
  std::vector<NegJudgement> slot_judgements;  // indexed by slot id
  long nodes = 0;
  static constexpr long kNodeCap = 4'000'000;

  struct State {
    std::vector<NegJudgement> gamma;
    std::vector<int> avail;  // slot ids in delta order
    int tscope = 0;
    int wscope = 0;
    std::map<std::string, int> copies;
    int decisions = 0;
  };

  int new_slot(NegJudgement j) {
    slot_judgements.push_back(std::move(j));
    return static_cast<int>(slot_judgements.size()) - 1;
  }

  static std::vector<int> diff(const std::vector<int>& in, const std::vector<int>& out) {
    std::vector<int> sorted_out = out;
    std::sort(sorted_out.begin(), sorted_out.end());
    std::vector<int> d;
    for (int x : in)
      if (!std::binary_search(sorted_out.begin(), sorted_out.end(), x)) d.push_back(x);
    std::sort(d.begin(), d.end());
    return d;
  }

  static void finish(Choice& c, const std::vector<int>& avail_in,
                     const std::vector<int>& leftover) {
    c.consumed = diff(avail_in, leftover);
  }

  // Routes a slot that must be absorbed inside c's subtree.
  bool route_slack(Choice& c, int x) {
    if (std::binary_search(c.consumed.begin(), c.consumed.end(), x)) return true;
    c.consumed.insert(std::lower_bound(c.consumed.begin(), c.consumed.end(), x), x);
    switch (c.tag) {
      case FTag::TopR:
      case FTag::ZeroL: return true;  // absorbed by the leaf's sequent
      case FTag::TensorR:
      case FTag::LimpL: {
        if (c.kids[0]->slack) {
          c.premise1_slots.push_back(x);
          return route_slack(*c.kids[0], x);
        }
        if (c.kids[1]->slack) return route_slack(*c.kids[1], x);
        return false;
      }
      case FTag::WithR:
      case FTag::OplusL: {
        for (auto& k : c.kids) {
          bool has = std::binary_search(k->consumed.begin(), k->consumed.end(), x);
          if (!has && !k->slack) return false;
          if (!has && !route_slack(*k, x)) return false;
          if (has) continue;
        }
        return true;
      }
      default:
        if (c.kids.size() == 1) return route_slack(*c.kids[0], x);
        return false;
    }
  }

  // ---- witness candidates ---------------------------------------------

  void worlds_in_prop(const Prop& p, std::vector<WorldExpr>& out) {
    switch (p->tag) {
      case PropTag::At: {
        // collect world expressions free of bound variables
        std::function<bool(const WorldExpr&)> ok = [&](const WorldExpr& e) {
          switch (e->tag) {
            case WorldTag::BVar:
            case WorldTag::Var: return false;
            case WorldTag::Compose: return ok(e->left) && ok(e->right);
            case WorldTag::RateRef: return term_closed(*e->rate_term, 0);
            default: return true;
          }
        };
        if (ok(p->world)) out.push_back(p->world);
        worlds_in_prop(p->left, out);
        return;
      }
      case PropTag::Atom:
      case PropTag::One:
      case PropTag::Top:
      case PropTag::Zero: return;
      case PropTag::Tensor:
      case PropTag::Limp:
      case PropTag::With:
      case PropTag::Oplus:
        worlds_in_prop(p->left, out);
        worlds_in_prop(p->right, out);
        return;
      default: worlds_in_prop(p->left, out); return;
    }
  }

  struct Focus {
    const Neg* n = nullptr;
    const Pos* p = nullptr;
    const WorldExpr* w = nullptr;
  };

  std::vector<Term> term_candidates(const State& st, const std::deque<PosJudgement>& omega,
                                    const FocGoal& goal, const Focus& focus) {
    std::vector<Term> out;
    auto add_prop = [&](const Prop& p) { collect_prop_subterms(p, out); };
    for (const auto& j : st.gamma) add_prop(erase_neg(j.prop));
    for (int id : st.avail) add_prop(erase_neg(slot_judgements[id].prop));
    for (const auto& j : omega) add_prop(erase_pos(j.prop));
    if (goal.stable && goal.stable_goal) add_prop(erase_pos(goal.stable_goal));
    if (!goal.stable && goal.active_goal) add_prop(erase_neg(goal.active_goal));
    if (focus.n) add_prop(erase_neg(*focus.n));
    if (focus.p) add_prop(erase_pos(*focus.p));
    for (int l = 0; l < st.tscope; ++l) out.push_back(Term::param(l));
    return out;
  }

  std::vector<WorldExpr> world_candidates(const State& st, const std::deque<PosJudgement>& omega,
                                          const FocGoal& goal, const Focus& focus) {
    std::vector<WorldExpr> raw;
    raw.push_back(w_identity());
    auto add_j = [&](const WorldExpr& w) { raw.push_back(w); };
    for (const auto& j : st.gamma) {
      add_j(j.world);
      worlds_in_prop(erase_neg(j.prop), raw);
    }
    for (int id : st.avail) {
      add_j(slot_judgements[id].world);
      worlds_in_prop(erase_neg(slot_judgements[id].prop), raw);
    }
    for (const auto& j : omega) {
      add_j(j.world);
      worlds_in_prop(erase_pos(j.prop), raw);
    }
    add_j(goal.world ? goal.world : w_identity());
    if (goal.stable && goal.stable_goal) worlds_in_prop(erase_pos(goal.stable_goal), raw);
    if (!goal.stable && goal.active_goal) worlds_in_prop(erase_neg(goal.active_goal), raw);
    if (focus.w) add_j(*focus.w);
    if (focus.n) worlds_in_prop(erase_neg(*focus.n), raw);
    if (focus.p) worlds_in_prop(erase_pos(*focus.p), raw);
    for (int l = 0; l < st.wscope; ++l) raw.push_back(w_param(l));
    for (const auto& h : budget.world_hints) raw.push_back(h);

    // residuals between evaluable occurrences
    std::vector<World> closed;
    for (const auto& e : raw)
      if (world_expr_closed(e)) closed.push_back(eval(e, {}, domain));
    for (const auto& u : closed)
      for (const auto& w : closed) {
        auto r = reaches(u, w);
        if (r) raw.push_back(w_lit(*r));
      }

    std::vector<WorldExpr> out;
    std::vector<std::string> seen;
    for (const auto& e : raw) {
      std::string k = to_string(world_nf(e, domain));
      if (std::find(seen.begin(), seen.end(), k) == seen.end()) {
        seen.push_back(k);
        out.push_back(e);
      }
    }
    return out;
  }

  // ---- proving ----------------------------------------------------------

  std::optional<Res> prove_neutral(const State& st, const FocGoal& goal) {
    if (++nodes > kNodeCap) return std::nullopt;
    if (st.decisions <= 0) return std::nullopt;

    State next = st;
    next.decisions = st.decisions - 1;

    // rf
    if (!is_shifted_neg_atom(goal.stable_goal)) {
      auto r = prove_right_focus(next, PosJudgement{goal.stable_goal, goal.world});
      if (r) {
        auto c = std::make_unique<Choice>();
        c->tag = FTag::Rf;
        c->slack = r->choice->slack;
        finish(*c, st.avail, r->leftover);
        c->kids.push_back(std::move(r->choice));
        return Res{std::move(c), std::move(r->leftover)};
      }
    }
    // lf over delta positions
    for (size_t i = 0; i < st.avail.size(); ++i) {
      const NegJudgement& n = slot_judgements[st.avail[i]];
      if (is_shifted_pos_atom(n.prop)) continue;
      State sub = next;
      sub.avail.erase(sub.avail.begin() + i);
      auto r = prove_left_focus(sub, n, goal);
      if (r) {
        auto c = std::make_unique<Choice>();
        c->tag = FTag::Lf;
        c->slot_id = st.avail[i];
        c->slack = r->choice->slack;
        finish(*c, st.avail, r->leftover);
        // the focused slot is consumed by this subtree as far as parents see
        c->consumed.insert(
            std::lower_bound(c->consumed.begin(), c->consumed.end(), st.avail[i]), st.avail[i]);
        c->kids.push_back(std::move(r->choice));
        return Res{std::move(c), std::move(r->leftover)};
      }
    }
    // cplf over gamma
    for (size_t i = 0; i < st.gamma.size(); ++i) {
      std::string key = judgement_key({erase_neg(st.gamma[i].prop), st.gamma[i].world}, domain);
      auto used = st.copies.find(key);
      int count = used == st.copies.end() ? 0 : used->second;
      if (count >= budget.copy_bound) continue;
      State sub = next;
      sub.copies[key] = count + 1;
      auto r = prove_left_focus(sub, st.gamma[i], goal);
      if (r) {
        auto c = std::make_unique<Choice>();
        c->tag = FTag::Cplf;
        c->gamma_index = static_cast<int>(i);
        c->slack = r->choice->slack;
        finish(*c, st.avail, r->leftover);
        c->kids.push_back(std::move(r->choice));
        return Res{std::move(c), std::move(r->leftover)};
      }
    }
    return std::nullopt;
  }

  std::optional<Res> prove_left_focus(const State& st, const NegJudgement& focus,
                                      const FocGoal& goal) {
    if (++nodes > kNodeCap) return std::nullopt;
    const Neg& n = focus.prop;
    auto leaf = [&](FTag t) {
      auto c = std::make_unique<Choice>();
      c->tag = t;
      return c;
    };
    switch (n->tag) {
      case NegTag::Atom: {
        const Pos& g = goal.stable_goal;
        if (g->tag != PosTag::OfNeg || g->n->tag != NegTag::Atom) return std::nullopt;
        if (g->n->pred != n->pred || !(g->n->args == n->args)) return std::nullopt;
        if (!world_equal(focus.world, goal.world, domain)) return std::nullopt;
        auto c = leaf(FTag::Li);
        return Res{std::move(c), st.avail};
      }
      case NegTag::OfPos: {
        std::deque<PosJudgement> omega{{n->p, focus.world}};
        auto r = prove_active(st, omega, goal);
        if (!r) return std::nullopt;
        auto c = leaf(FTag::ShiftL);
        c->slack = r->choice->slack;
        finish(*c, st.avail, r->leftover);
        c->kids.push_back(std::move(r->choice));
        return Res{std::move(c), std::move(r->leftover)};
      }
      case NegTag::With: {
        for (int which = 1; which <= 2; ++which) {
          NegJudgement sub{which == 1 ? n->a : n->b, focus.world};
          auto r = prove_left_focus(st, sub, goal);
          if (r) {
            auto c = leaf(FTag::WithL);
            c->which = which;
            c->slack = r->choice->slack;
            finish(*c, st.avail, r->leftover);
            c->kids.push_back(std::move(r->choice));
            return Res{std::move(c), std::move(r->leftover)};
          }
        }
        return std::nullopt;
      }
      case NegTag::Limp: {
        // antecedent first, continuation on the leftovers
        auto r1 = prove_right_focus(st, PosJudgement{n->p, focus.world});
        if (!r1) return std::nullopt;
        State st2 = st;
        st2.avail = r1->leftover;
        auto r2 = prove_left_focus(st2, NegJudgement{n->a, focus.world}, goal);
        if (!r2) return std::nullopt;
        auto c = leaf(FTag::LimpL);
        c->premise1_slots = diff(st.avail, r1->leftover);
        c->slack = r1->choice->slack || r2->choice->slack;
        finish(*c, st.avail, r2->leftover);
        c->kids.push_back(std::move(r1->choice));
        c->kids.push_back(std::move(r2->choice));
        return Res{std::move(c), std::move(r2->leftover)};
      }
      case NegTag::ForallT: {
        for (const Term& tau : term_candidates(st, {}, goal, Focus{&n, nullptr, &focus.world})) {
          auto r = prove_left_focus(st, NegJudgement{open_term_neg(n->a, tau), focus.world}, goal);
          if (r) {
            auto c = leaf(FTag::ForallL);
            c->tw = tau;
            c->slack = r->choice->slack;
            finish(*c, st.avail, r->leftover);
            c->kids.push_back(std::move(r->choice));
            return Res{std::move(c), std::move(r->leftover)};
          }
        }
        return std::nullopt;
      }
      case NegTag::ForallW: {
        for (const WorldExpr& tau :
             world_candidates(st, {}, goal, Focus{&n, nullptr, &focus.world})) {
          auto r = prove_left_focus(st, NegJudgement{open_world_neg(n->a, tau), focus.world}, goal);
          if (r) {
            auto c = leaf(FTag::ForallL);
            c->ww = tau;
            c->slack = r->choice->slack;
            finish(*c, st.avail, r->leftover);
            c->kids.push_back(std::move(r->choice));
            return Res{std::move(c), std::move(r->leftover)};
          }
        }
        return std::nullopt;
      }
      case NegTag::Down: {
        auto r = prove_left_focus(st, NegJudgement{open_world_neg(n->a, focus.world), focus.world},
                                  goal);
        if (!r) return std::nullopt;
        auto c = leaf(FTag::DownLF);
        c->slack = r->choice->slack;
        finish(*c, st.avail, r->leftover);
        c->kids.push_back(std::move(r->choice));
        return Res{std::move(c), std::move(r->leftover)};
      }
      case NegTag::At: {
        auto r = prove_left_focus(st, NegJudgement{n->a, n->world}, goal);
        if (!r) return std::nullopt;
        auto c = leaf(FTag::AtLF);
        c->slack = r->choice->slack;
        finish(*c, st.avail, r->leftover);
        c->kids.push_back(std::move(r->choice));
        return Res{std::move(c), std::move(r->leftover)};
      }
      default: return std::nullopt;
    }
  }

  std::optional<Res> prove_right_focus(const State& st, const PosJudgement& focus) {
    if (++nodes > kNodeCap) return std::nullopt;
    const Pos& p = focus.prop;
    auto leaf = [&](FTag t) {
      auto c = std::make_unique<Choice>();
      c->tag = t;
      return c;
    };
    switch (p->tag) {
      case PosTag::Atom: {
        for (size_t i = 0; i < st.avail.size(); ++i) {
          const NegJudgement& h = slot_judgements[st.avail[i]];
          if (h.prop->tag != NegTag::OfPos || h.prop->p->tag != PosTag::Atom) continue;
          if (h.prop->p->pred != p->pred || !(h.prop->p->args == p->args)) continue;
          if (!world_equal(h.world, focus.world, domain)) continue;
          auto c = leaf(FTag::Ri);
          c->slot_id = st.avail[i];
          c->consumed = {st.avail[i]};
          std::vector<int> leftover = st.avail;
          leftover.erase(leftover.begin() + i);
          return Res{std::move(c), std::move(leftover)};
        }
        return std::nullopt;
      }
      case PosTag::OfNeg: {
        std::deque<PosJudgement> omega;
        auto r = prove_active_goal(st, omega, FocGoal{false, p->n, nullptr, focus.world});
        if (!r) return std::nullopt;
        auto c = leaf(FTag::ShiftR);
        c->slack = r->choice->slack;
        finish(*c, st.avail, r->leftover);
        c->kids.push_back(std::move(r->choice));
        return Res{std::move(c), std::move(r->leftover)};
      }
      case PosTag::Tensor: {
        auto r1 = prove_right_focus(st, PosJudgement{p->a, focus.world});
        if (!r1) return std::nullopt;
        State st2 = st;
        st2.avail = r1->leftover;
        auto r2 = prove_right_focus(st2, PosJudgement{p->b, focus.world});
        if (!r2) return std::nullopt;
        auto c = leaf(FTag::TensorR);
        c->premise1_slots = diff(st.avail, r1->leftover);
        c->slack = r1->choice->slack || r2->choice->slack;
        finish(*c, st.avail, r2->leftover);
        c->kids.push_back(std::move(r1->choice));
        c->kids.push_back(std::move(r2->choice));
        return Res{std::move(c), std::move(r2->leftover)};
      }
      case PosTag::Oplus: {
        for (int which = 1; which <= 2; ++which) {
          auto r = prove_right_focus(st, PosJudgement{which == 1 ? p->a : p->b, focus.world});
          if (r) {
            auto c = leaf(FTag::OplusR);
            c->which = which;
            c->slack = r->choice->slack;
            finish(*c, st.avail, r->leftover);
            c->kids.push_back(std::move(r->choice));
            return Res{std::move(c), std::move(r->leftover)};
          }
        }
        return std::nullopt;
      }
      case PosTag::ExistsT: {
        for (const Term& tau :
             term_candidates(st, {}, FocGoal{}, Focus{nullptr, &p, &focus.world})) {
          auto r = prove_right_focus(st, PosJudgement{open_term_pos(p->a, tau), focus.world});
          if (r) {
            auto c = leaf(FTag::ExistsR);
            c->tw = tau;
            c->slack = r->choice->slack;
            finish(*c, st.avail, r->leftover);
            c->kids.push_back(std::move(r->choice));
            return Res{std::move(c), std::move(r->leftover)};
          }
        }
        return std::nullopt;
      }
      case PosTag::ExistsW: {
        for (const WorldExpr& tau :
             world_candidates(st, {}, FocGoal{}, Focus{nullptr, &p, &focus.world})) {
          auto r = prove_right_focus(st, PosJudgement{open_world_pos(p->a, tau), focus.world});
          if (r) {
            auto c = leaf(FTag::ExistsR);
            c->ww = tau;
            c->slack = r->choice->slack;
            finish(*c, st.avail, r->leftover);
            c->kids.push_back(std::move(r->choice));
            return Res{std::move(c), std::move(r->leftover)};
          }
        }
        return std::nullopt;
      }
      case PosTag::Bang: {
        State st2 = st;
        st2.avail.clear();
        std::deque<PosJudgement> omega;
        auto r = prove_active_goal(st2, omega, FocGoal{false, p->n, nullptr, focus.world});
        if (!r) return std::nullopt;
        if (!r->leftover.empty()) {
          if (!r->choice->slack) return std::nullopt;
          for (int x : r->leftover)
            if (!route_slack(*r->choice, x)) return std::nullopt;
        }
        auto c = leaf(FTag::BangR);
        c->slack = false;  // absorbs nothing from outside
        c->kids.push_back(std::move(r->choice));
        return Res{std::move(c), st.avail};
      }
      case PosTag::Down: {
        auto r =
            prove_right_focus(st, PosJudgement{open_world_pos(p->a, focus.world), focus.world});
        if (!r) return std::nullopt;
        auto c = leaf(FTag::DownRF);
        c->slack = r->choice->slack;
        finish(*c, st.avail, r->leftover);
        c->kids.push_back(std::move(r->choice));
        return Res{std::move(c), std::move(r->leftover)};
      }
      case PosTag::At: {
        auto r = prove_right_focus(st, PosJudgement{p->a, p->world});
        if (!r) return std::nullopt;
        auto c = leaf(FTag::AtRF);
        c->slack = r->choice->slack;
        finish(*c, st.avail, r->leftover);
        c->kids.push_back(std::move(r->choice));
        return Res{std::move(c), std::move(r->leftover)};
      }
      case PosTag::One: {
        auto c = leaf(FTag::OneR);
        return Res{std::move(c), st.avail};
      }
      case PosTag::Zero: return std::nullopt;  // no rule for 0 under focus
    }
    return std::nullopt;
  }

  std::optional<Res> prove_active(const State& st, std::deque<PosJudgement>& omega,
                                  const FocGoal& goal) {
    return prove_active_goal(st, omega, goal);
  }

  // Decomposes the active zones to neutral sequents per the canonical
  // order; slots created here are policed at creation frames.
  std::optional<Res> prove_active_goal(const State& st, std::deque<PosJudgement>& omega,
                                       const FocGoal& goal) {
    if (++nodes > kNodeCap) return std::nullopt;

    bool do_goal_first = order == ActiveOrder::GoalFirstLifo;
    bool goal_active = !goal.stable;

    // pick the next active task
    if ((goal_active && do_goal_first) || (goal_active && omega.empty())) {
      return step_goal(st, omega, goal);
    }
    if (!omega.empty()) {
      int i = do_goal_first ? static_cast<int>(omega.size()) - 1 : 0;
      return step_omega(st, omega, goal, i);
    }
    // neutral
    return prove_neutral(st, goal);
  }

  std::optional<Res> step_omega(const State& st, std::deque<PosJudgement>& omega,
                                const FocGoal& goal, int i) {
    PosJudgement it = omega[i];
    auto wrap1 = [&](FTag t, std::optional<Res> r, int created_slot = -1) -> std::optional<Res> {
      if (!r) return std::nullopt;
      if (created_slot >= 0) {
        auto pos = std::find(r->leftover.begin(), r->leftover.end(), created_slot);
        if (pos != r->leftover.end()) {
          if (!r->choice->slack || !route_slack(*r->choice, created_slot)) return std::nullopt;
          r->leftover.erase(pos);
        }
      }
      auto c = std::make_unique<Choice>();
      c->tag = t;
      c->omega_index = i;
      c->slot_id = created_slot;
      c->slack = r->choice->slack;
      finish(*c, st.avail, r->leftover);
      c->kids.push_back(std::move(r->choice));
      return Res{std::move(c), std::move(r->leftover)};
    };

    switch (it.prop->tag) {
      case PosTag::Tensor: {
        std::deque<PosJudgement> next = omega;
        next[i] = {it.prop->a, it.world};
        next.insert(next.begin() + i + 1, PosJudgement{it.prop->b, it.world});
        return wrap1(FTag::TensorL, prove_active_goal(st, next, goal));
      }
      case PosTag::One: {
        std::deque<PosJudgement> next = omega;
        next.erase(next.begin() + i);
        return wrap1(FTag::OneL, prove_active_goal(st, next, goal));
      }
      case PosTag::Oplus: {
        std::deque<PosJudgement> na = omega, nb = omega;
        na[i] = {it.prop->a, it.world};
        nb[i] = {it.prop->b, it.world};
        return additive(st, FTag::OplusL, i,
                        [&](const State& s) {
                          std::deque<PosJudgement> o = na;
                          return prove_active_goal(s, o, goal);
                        },
                        [&](const State& s) {
                          std::deque<PosJudgement> o = nb;
                          return prove_active_goal(s, o, goal);
                        });
      }
      case PosTag::Down: {
        std::deque<PosJudgement> next = omega;
        next[i] = {open_world_pos(it.prop->a, it.world), it.world};
        return wrap1(FTag::DownLA, prove_active_goal(st, next, goal));
      }
      case PosTag::At: {
        std::deque<PosJudgement> next = omega;
        next[i] = {it.prop->a, it.prop->world};
        return wrap1(FTag::AtLA, prove_active_goal(st, next, goal));
      }
      case PosTag::ExistsT: {
        State s2 = st;
        std::deque<PosJudgement> next = omega;
        next[i] = {open_term_pos(it.prop->a, Term::param(st.tscope)), it.world};
        s2.tscope = st.tscope + 1;
        return wrap1(FTag::ExistsL, prove_active_goal(s2, next, goal));
      }
      case PosTag::ExistsW: {
        State s2 = st;
        std::deque<PosJudgement> next = omega;
        next[i] = {open_world_pos(it.prop->a, w_param(st.wscope)), it.world};
        s2.wscope = st.wscope + 1;
        return wrap1(FTag::ExistsL, prove_active_goal(s2, next, goal));
      }
      case PosTag::Bang: {
        State s2 = st;
        std::deque<PosJudgement> next = omega;
        next.erase(next.begin() + i);
        s2.gamma.push_back({it.prop->n, it.world});
        return wrap1(FTag::BangL, prove_active_goal(s2, next, goal));
      }
      case PosTag::OfNeg: {
        State s2 = st;
        std::deque<PosJudgement> next = omega;
        next.erase(next.begin() + i);
        int id = new_slot({it.prop->n, it.world});
        s2.avail.push_back(id);
        return wrap1(FTag::ShiftLA, prove_active_goal(s2, next, goal), id);
      }
      case PosTag::Atom: {
        State s2 = st;
        std::deque<PosJudgement> next = omega;
        next.erase(next.begin() + i);
        int id = new_slot({neg_of_pos(it.prop), it.world});
        s2.avail.push_back(id);
        return wrap1(FTag::AtomL, prove_active_goal(s2, next, goal), id);
      }
      case PosTag::Zero: {
        auto c = std::make_unique<Choice>();
        c->tag = FTag::ZeroL;
        c->omega_index = i;
        c->slack = true;
        return Res{std::move(c), st.avail};
      }
    }
    return std::nullopt;
  }

  std::optional<Res> step_goal(const State& st, std::deque<PosJudgement>& omega,
                               const FocGoal& goal) {
    const Neg& n = goal.active_goal;
    auto wrap1 = [&](FTag t, std::optional<Res> r) -> std::optional<Res> {
      if (!r) return std::nullopt;
      auto c = std::make_unique<Choice>();
      c->tag = t;
      c->slack = r->choice->slack;
      finish(*c, st.avail, r->leftover);
      c->kids.push_back(std::move(r->choice));
      return Res{std::move(c), std::move(r->leftover)};
    };
    switch (n->tag) {
      case NegTag::With: {
        return additive(st, FTag::WithR, -1,
                        [&](const State& s) {
                          std::deque<PosJudgement> o = omega;
                          return prove_active_goal(s, o, FocGoal{false, n->a, nullptr, goal.world});
                        },
                        [&](const State& s) {
                          std::deque<PosJudgement> o = omega;
                          return prove_active_goal(s, o, FocGoal{false, n->b, nullptr, goal.world});
                        });
      }
      case NegTag::Top: {
        auto c = std::make_unique<Choice>();
        c->tag = FTag::TopR;
        c->slack = true;
        return Res{std::move(c), st.avail};
      }
      case NegTag::Limp: {
        std::deque<PosJudgement> next = omega;
        next.push_back({n->p, goal.world});
        return wrap1(FTag::LimpR,
                     prove_active_goal(st, next, FocGoal{false, n->a, nullptr, goal.world}));
      }
      case NegTag::Down: {
        std::deque<PosJudgement> next = omega;
        return wrap1(FTag::DownRA,
                     prove_active_goal(st, next,
                                       FocGoal{false, open_world_neg(n->a, goal.world), nullptr,
                                               goal.world}));
      }
      case NegTag::At: {
        std::deque<PosJudgement> next = omega;
        return wrap1(FTag::AtRA,
                     prove_active_goal(st, next, FocGoal{false, n->a, nullptr, n->world}));
      }
      case NegTag::ForallT: {
        State s2 = st;
        s2.tscope = st.tscope + 1;
        std::deque<PosJudgement> next = omega;
        return wrap1(FTag::ForallR,
                     prove_active_goal(s2, next,
                                       FocGoal{false, open_term_neg(n->a, Term::param(st.tscope)),
                                               nullptr, goal.world}));
      }
      case NegTag::ForallW: {
        State s2 = st;
        s2.wscope = st.wscope + 1;
        std::deque<PosJudgement> next = omega;
        return wrap1(FTag::ForallR,
                     prove_active_goal(s2, next,
                                       FocGoal{false, open_world_neg(n->a, w_param(st.wscope)),
                                               nullptr, goal.world}));
      }
      case NegTag::OfPos: {
        std::deque<PosJudgement> next = omega;
        return wrap1(FTag::ShiftRA,
                     prove_active_goal(st, next, FocGoal{true, nullptr, n->p, goal.world}));
      }
      case NegTag::Atom: {
        std::deque<PosJudgement> next = omega;
        return wrap1(FTag::AtomR, prove_active_goal(st, next,
                                                    FocGoal{true, nullptr, pos_of_neg(n),
                                                            goal.world}));
      }
    }
    return std::nullopt;
  }

  template <typename F1, typename F2>
  std::optional<Res> additive(const State& st, FTag tag, int omega_index, F1&& f1, F2&& f2) {
    auto r1 = f1(st);
    if (!r1) return std::nullopt;
    auto r2 = f2(st);
    if (!r2) return std::nullopt;
    std::vector<int> c1 = diff(st.avail, r1->leftover);
    std::vector<int> c2 = diff(st.avail, r2->leftover);
    // reconcile: what one branch consumed, the other must consume or absorb
    for (int x : c1)
      if (!std::binary_search(c2.begin(), c2.end(), x)) {
        if (!r2->choice->slack || !route_slack(*r2->choice, x)) return std::nullopt;
      }
    for (int x : c2)
      if (!std::binary_search(c1.begin(), c1.end(), x)) {
        if (!r1->choice->slack || !route_slack(*r1->choice, x)) return std::nullopt;
      }
    std::vector<int> consumed;
    std::set_union(c1.begin(), c1.end(), c2.begin(), c2.end(), std::back_inserter(consumed));
    std::vector<int> leftover;
    for (int x : st.avail)
      if (!std::binary_search(consumed.begin(), consumed.end(), x)) leftover.push_back(x);
    auto c = std::make_unique<Choice>();
    c->tag = tag;
    c->omega_index = omega_index;
    c->consumed = std::move(consumed);
    c->slack = r1->choice->slack && r2->choice->slack;
    c->kids.push_back(std::move(r1->choice));
    c->kids.push_back(std::move(r2->choice));
    return Res{std::move(c), std::move(leftover)};
  }

  // ---- reconstruction ----------------------------------------------------

  FocProof reconstruct(const FocSequent& seq, const std::vector<int>& ids, const Choice& c) {
    FocApp app;
    app.tag = c.tag;
    app.which = c.which;
    app.term_witness = c.tw;
    app.world_witness = c.ww;

    auto position_of = [&](int id) {
      auto it = std::find(ids.begin(), ids.end(), id);
      if (it == ids.end()) throw std::logic_error("reconstruct: slot not in scope");
      return static_cast<int>(it - ids.begin());
    };

    std::vector<int> ids1, ids2;
    switch (c.tag) {
      case FTag::Lf: app.principal = position_of(c.slot_id); break;
      case FTag::Cplf: app.principal = c.gamma_index; break;
      case FTag::TensorL:
      case FTag::OneL:
      case FTag::OplusL:
      case FTag::DownLA:
      case FTag::AtLA:
      case FTag::ExistsL:
      case FTag::BangL:
      case FTag::ShiftLA:
      case FTag::AtomL:
      case FTag::ZeroL: app.principal = c.omega_index; break;
      case FTag::TensorR:
      case FTag::LimpL: {
        // split = positions of premise-1 slots, in delta order
        std::vector<int> set = c.premise1_slots;
        std::sort(set.begin(), set.end());
        for (size_t k = 0; k < ids.size(); ++k)
          if (std::binary_search(set.begin(), set.end(), ids[k]))
            app.split.push_back(static_cast<int>(k));
        break;
      }
      default: break;
    }

    FocApplyResult ar = apply_focused(seq, app);
    if (!ar.ok)
      throw std::logic_error(std::string("reconstruct: ") + ftag_name(c.tag) + ": " + ar.error);
    if (ar.premises.size() != c.kids.size())
      throw std::logic_error("reconstruct: premise arity mismatch");

    // premise id vectors
    std::vector<std::vector<int>> kid_ids(c.kids.size(), ids);
    switch (c.tag) {
      case FTag::Lf: {
        kid_ids[0].erase(kid_ids[0].begin() + app.principal);
        break;
      }
      case FTag::TensorR:
      case FTag::LimpL: {
        std::vector<int> set = c.premise1_slots;
        std::sort(set.begin(), set.end());
        ids1.clear();
        ids2.clear();
        for (int id : ids)
          (std::binary_search(set.begin(), set.end(), id) ? ids1 : ids2).push_back(id);
        kid_ids[0] = ids1;
        kid_ids[1] = ids2;
        break;
      }
      case FTag::ShiftLA:
      case FTag::AtomL: kid_ids[0].push_back(c.slot_id); break;
      case FTag::BangR: kid_ids[0].clear(); break;
      default: break;
    }

    std::vector<FocProof> kids;
    for (size_t i = 0; i < c.kids.size(); ++i)
      kids.push_back(reconstruct(ar.premises[i], kid_ids[i], *c.kids[i]));
    return mk_foc_proof(std::move(app), seq, std::move(kids));
  }
};

// frontier collection without proving
void frontier_rec(const FocSequent& s, ActiveOrder order, std::vector<FocSequent>& out) {
  if (is_neutral(s)) {
    out.push_back(canonicalize_foc_params(s));
    return;
  }
  if (s.form != FocForm::Active) throw std::invalid_argument("frontier: not an active sequent");

  bool goal_active = !s.goal.stable;
  bool do_goal_first = order == ActiveOrder::GoalFirstLifo;

  FocApp app;
  if ((goal_active && do_goal_first) || (goal_active && s.omega.empty())) {
    switch (s.goal.active_goal->tag) {
      case NegTag::With: app.tag = FTag::WithR; break;
      case NegTag::Top: app.tag = FTag::TopR; break;
      case NegTag::Limp: app.tag = FTag::LimpR; break;
      case NegTag::Down: app.tag = FTag::DownRA; break;
      case NegTag::At: app.tag = FTag::AtRA; break;
      case NegTag::ForallT:
      case NegTag::ForallW: app.tag = FTag::ForallR; break;
      case NegTag::OfPos: app.tag = FTag::ShiftRA; break;
      case NegTag::Atom: app.tag = FTag::AtomR; break;
    }
  } else {
    int i = do_goal_first ? static_cast<int>(s.omega.size()) - 1 : 0;
    app.principal = i;
    switch (s.omega[i].prop->tag) {
      case PosTag::Tensor: app.tag = FTag::TensorL; break;
      case PosTag::One: app.tag = FTag::OneL; break;
      case PosTag::Oplus: app.tag = FTag::OplusL; break;
      case PosTag::Down: app.tag = FTag::DownLA; break;
      case PosTag::At: app.tag = FTag::AtLA; break;
      case PosTag::ExistsT:
      case PosTag::ExistsW: app.tag = FTag::ExistsL; break;
      case PosTag::Bang: app.tag = FTag::BangL; break;
      case PosTag::OfNeg: app.tag = FTag::ShiftLA; break;
      case PosTag::Atom: app.tag = FTag::AtomL; break;
      case PosTag::Zero: app.tag = FTag::ZeroL; break;
    }
  }
  FocApplyResult r = apply_focused(s, app);
  if (!r.ok) throw std::logic_error(std::string("frontier: ") + r.error);
  for (const auto& p : r.premises) frontier_rec(p, order, out);
}

}  // namespace

std::vector<FocSequent> neutral_frontier(const FocSequent& active, ActiveOrder order) {
  std::vector<FocSequent> out;
  frontier_rec(active, order, out);
  return out;
}

std::optional<FocProof> search(const FocSequent& goal, const SearchBudget& budget,
                               const SearchOptions& opts) {
  for (int d = 0; d <= budget.max_decisions; ++d) {
    Engine eng;
    eng.domain = goal.domain;
    eng.budget = budget;
    eng.order = opts.order;

    Engine::State st;
    st.gamma = goal.gamma;
    st.tscope = goal.tscope;
    st.wscope = goal.wscope;
    st.decisions = d;
    std::vector<int> ids;
    for (const auto& j : goal.delta) {
      int id = eng.new_slot(j);
      st.avail.push_back(id);
      ids.push_back(id);
    }

    std::optional<Res> r;
    if (goal.form == FocForm::Active) {
      std::deque<PosJudgement> omega(goal.omega.begin(), goal.omega.end());
      r = eng.prove_active_goal(st, omega, goal.goal);
    } else {
      return std::nullopt;  // search starts from active or neutral forms
    }
    if (!r) continue;
    // all root resources must be consumed, or routed to a slack leaf
    if (!r->leftover.empty()) {
      if (!r->choice->slack) continue;
      bool ok = true;
      for (int x : r->leftover)
        if (!eng.route_slack(*r->choice, x)) {
          ok = false;
          break;
        }
      if (!ok) continue;
    }
    return eng.reconstruct(goal, ids, *r->choice);
  }
  return std::nullopt;
}

FocSequent polarize_sequent(const Sequent& s) {
  FocSequent f;
  f.domain = s.domain;
  f.form = FocForm::Active;
  f.tscope = s.tscope;
  f.wscope = s.wscope;
  for (const auto& j : s.gamma) f.omega.push_back({pos_bang(polarize_neg(j.prop)), j.world});
  for (const auto& j : s.delta) f.omega.push_back({polarize_pos(j.prop), j.world});
  f.goal = {false, polarize_neg(s.goal.prop), nullptr, s.goal.world};
  return f;
}

std::optional<Proof> prove_unfocused(const Sequent& s, const SearchBudget& budget,
                                     const SearchOptions& opts) {
  auto fp = search(polarize_sequent(s), budget, opts);
  if (!fp) return std::nullopt;
  return erase(*fp);
}

// --- phase log --------------------------------------------------------------

namespace {

void log_rec(const FocProof& p, std::vector<std::string>& out) {
  const FocApp& app = p->rule;
  const FocSequent& s = p->conclusion;
  switch (app.tag) {
    case FTag::Lf: {
      const NegJudgement& j = s.delta[app.principal];
      out.push_back("focus delta: " + to_string(erase_neg(j.prop)) + " @ " +
                    to_string(world_nf(j.world, s.domain)));
      break;
    }
    case FTag::Cplf: {
      const NegJudgement& j = s.gamma[app.principal];
      out.push_back("focus gamma: " + to_string(erase_neg(j.prop)) + " @ " +
                    to_string(world_nf(j.world, s.domain)));
      break;
    }
    case FTag::Rf:
      out.push_back("focus goal: " + to_string(erase_pos(s.goal.stable_goal)) + " @ " +
                    to_string(world_nf(s.goal.world, s.domain)));
      break;
    case FTag::WithL:
      out.push_back("  select branch " + std::to_string(app.which));
      break;
    case FTag::OplusR:
      out.push_back("  inject branch " + std::to_string(app.which));
      break;
    case FTag::ForallL:
    case FTag::ExistsR:
      if (app.term_witness)
        out.push_back("  witness " + to_string(*app.term_witness));
      else if (app.world_witness)
        out.push_back("  witness world " + to_string(world_nf(*app.world_witness, s.domain)));
      break;
    case FTag::Li:
      out.push_back("  init " + s.lfocus.prop->pred + " @ " +
                    to_string(world_nf(s.lfocus.world, s.domain)));
      break;
    case FTag::Ri:
      out.push_back("  consume " + s.rfocus.prop->pred + " @ " +
                    to_string(world_nf(s.rfocus.world, s.domain)));
      break;
    default: break;
  }
  for (const auto& k : p->premises) log_rec(k, out);
}

}  // namespace

std::vector<std::string> phase_log(const FocProof& p) {
  std::vector<std::string> out;
  log_rec(p, out);
  return out;
}

}  // namespace hyll
