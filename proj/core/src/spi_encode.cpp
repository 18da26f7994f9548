#include "hyll/print.hpp"
#include "hyll/spi.hpp"

// The propositional reflection of Spi: process and sum encodings, the
// environment theory, the interaction theory and canonical sequents.

namespace hyll::spi {

bool reserved_atom(const std::string& name) {
  return name == "dt" || name == "out" || name == "in" || name == "tau" || name == "act" ||
         name == "rt" || name == "inter";
}

// [P | Q] = [P] * [Q]          [nu_r P] = ex x. !(rt x at r) * [P x]
// [0] = 1                      [X ts]   = X ts
// [M] = pos (dt -o <M>)
Pos encode_proc(const Process& p) {
  switch (p->tag) {
    case ProcTag::Par: return pos_tensor(encode_proc(p->left), encode_proc(p->right));
    case ProcTag::Nil: return pos_one();
    case ProcTag::Call: return pos_atom(p->defname, p->args);
    case ProcTag::SumP:
      return pos_of_neg(neg_limp(pos_atom("dt"), encode_sum(p->sum)));
    case ProcTag::Nu: {
      Neg rt = neg_at(neg_atom("rt", {Term::var(0)}), w_rate(p->rate));
      return pos_exists_t(pos_tensor(pos_bang(std::move(rt)), encode_proc(p->left)));
    }
  }
  return pos_one();
}

// <x!(m).P> = neg (out x m * [P])     <x?.P> = fa n. neg (in x n * [P n])
// <tau_r.P> = neg (tau r * [P])       <M+N>  = <M> & <N>
Neg encode_sum(const Sum& m) {
  switch (m->tag) {
    case SumTag::Out:
      return neg_of_pos(pos_tensor(pos_atom("out", {m->channel, m->message}),
                                   encode_proc(m->cont)));
    case SumTag::In: {
      // under the new binder the channel crosses one term binder
      Term chan = shift_term(m->channel, 1, 0);
      return neg_forall_t(neg_of_pos(
          pos_tensor(pos_atom("in", {std::move(chan), Term::var(0)}), encode_proc(m->cont))));
    }
    case SumTag::Tau:
      return neg_of_pos(
          pos_tensor(pos_atom("tau", {Term::rate(m->rate)}), encode_proc(m->cont)));
    case SumTag::Plus: return neg_with(encode_sum(m->left), encode_sum(m->right));
  }
  return neg_top();
}

// [E, X_n = P] = [E], !! fa x1..xn. (X xs -o neg [P xs]) & ([P xs] -o neg (X xs))
std::vector<NegJudgement> encode_env(const Env& e) {
  std::vector<NegJudgement> out;
  for (const auto& [name, def] : e.defs) {
    std::vector<Term> vars;
    for (int i = def.arity - 1; i >= 0; --i) vars.push_back(Term::var(i));
    Pos head = pos_atom(name, vars);
    Pos body = encode_proc(def.body);
    Neg clause = neg_with(neg_limp(head, neg_of_pos(body)),
                          neg_limp(body, neg_of_pos(head)));
    for (int i = 0; i < def.arity; ++i) clause = neg_forall_t(std::move(clause));
    // !! N = faw u. (N at u)
    Neg banged = neg_forall_w(neg_at(std::move(clause), w_bvar(0)));
    out.push_back({std::move(banged), w_identity()});
  }
  return out;
}

// inter = !! (act -o neg int & neg syn)
// int   = (dt at rid) * pos fa r. ((tau r at rid) -o rho_r neg act)
// syn   = (dt * dt at rid) *
//         pos fa x. faw r. fa m. ((out x m * in x m at rid) -o
//                                 pos (rt x at r) -o rho_r neg act)
NegJudgement interaction_theory() {
  Pos act = pos_atom("act");
  auto rho_act = [&](WorldExpr delay) {
    // dn u. (neg act at u . delay); delay crosses the world binder
    return neg_down(
        neg_at(neg_of_pos(pos_atom("act")), w_compose(w_bvar(0), shift_world_expr(delay, 1, 0))));
  };

  Pos intp = pos_tensor(
      pos_at(pos_atom("dt"), w_identity()),
      pos_of_neg(neg_forall_t(
          neg_limp(pos_at(pos_atom("tau", {Term::var(0)}), w_identity()),
                   rho_act(w_rate_ref(Term::var(0)))))));

  // under fa x (term), faw r (world), fa m (term): x = tvar 1, m = tvar 0,
  // r = wvar 0 outside the rho binder
  Neg syn_chain = neg_limp(
      pos_at(pos_tensor(pos_atom("out", {Term::var(1), Term::var(0)}),
                        pos_atom("in", {Term::var(1), Term::var(0)})),
             w_identity()),
      neg_limp(pos_at(pos_of_neg(neg_atom("rt", {Term::var(1)})), w_bvar(0)),
               rho_act(w_bvar(0))));
  Pos synp = pos_tensor(
      pos_at(pos_tensor(pos_atom("dt"), pos_atom("dt")), w_identity()),
      pos_of_neg(neg_forall_t(neg_forall_w(neg_forall_t(std::move(syn_chain))))));

  Neg body = neg_limp(std::move(act),
                      neg_with(neg_of_pos(std::move(intp)), neg_of_pos(std::move(synp))));
  Neg inter = neg_forall_w(neg_at(std::move(body), w_bvar(0)));
  return {std::move(inter), w_identity()};
}

// can(X ts) = neg (X ts)        can(P|Q) = can P, can Q
// can(0) = .                    can(nu_r P) = can(P a), a fresh with rt a @ r
// can(M) = dt -o <M>
CanonicalContext canonical_context(const Process& p, const RateTable& rates, int fresh_counter) {
  CanonicalContext out;
  Env empty;
  // sharing the opening discipline with configurations keeps the fresh
  // channel naming of derivations and replays aligned
  Config opened = open_config(empty, rates, p, fresh_counter);
  out.rates = opened.rates;
  out.fresh_counter = opened.fresh_counter;
  for (const auto& sym : opened.opened)
    out.rt_facts.push_back(
        {neg_atom("rt", {Term::fn(sym)}), w_rate(opened.rates.at(sym))});
  for (const auto& it : opened.items) {
    if (it->tag == ProcTag::Call) {
      out.items.push_back({neg_of_pos(pos_atom(it->defname, it->args)), w_identity()});
    } else {
      out.items.push_back({neg_limp(pos_atom("dt"), encode_sum(it->sum)), w_identity()});
    }
  }
  return out;
}

FocSequent canonical_sequent(const Env& e, const RateTable& rates, const Process& p,
                             const Process& goal, const WorldExpr& s, const WorldExpr& t) {
  CanonicalContext can = canonical_context(p, rates, 0);
  FocSequent out;
  out.domain = Domain::Rates;
  out.form = FocForm::Active;
  for (auto& j : encode_env(e)) out.gamma.push_back(std::move(j));
  for (const auto& [chan, rate] : can.rates)
    out.gamma.push_back({neg_atom("rt", {Term::fn(chan)}), w_rate(rate)});
  out.gamma.push_back(interaction_theory());
  out.delta.push_back({neg_of_pos(pos_atom("act")), s});
  for (auto& j : can.items) out.delta.push_back(std::move(j));
  out.goal = {true, nullptr,
              pos_tensor(pos_at(encode_proc(goal), w_identity()), pos_atom("act")), t};
  return out;
}

}  // namespace hyll::spi
