#include <doctest.h>

#include "hyll/print.hpp"
#include "hyll/spi.hpp"

using namespace hyll;
using namespace hyll::spi;

namespace {

Term ch(const std::string& s) { return Term::fn(s); }

Process out_p(const std::string& x, const std::string& m, Process cont) {
  return pr_sum(sm_out(ch(x), ch(m), std::move(cont)));
}

Process in_p(const std::string& x, Process cont) {
  return pr_sum(sm_in(ch(x), std::move(cont)));
}

Process tau_p(const Rational& r, Process cont) { return pr_sum(sm_tau(r, std::move(cont))); }

}  // namespace

TEST_CASE("congruence: parallel unit and commutativity") {
  Env e;
  Process p = tau_p(Rational(2), pr_nil());
  CHECK(congruent(e, pr_par(p, pr_nil()), p));
  Process q = out_p("x", "a", pr_nil());
  CHECK(congruent(e, pr_par(p, q), pr_par(q, p)));
  CHECK(congruent(e, pr_par(p, pr_par(q, pr_nil())), pr_par(pr_par(p, q), pr_nil())));
  CHECK_FALSE(congruent(e, p, q));
}

TEST_CASE("congruence: scope extrusion") {
  Env e;
  // new(r) x in (P | Q x)  ==  P | new(r) x in Q x   when x not free in P
  Process p = tau_p(Rational(1), pr_nil());                      // x-free
  Process qx = in_p("z", pr_nil());                              // uses the bound channel? no
  // build with the bound channel: new(2) c in (P | c?(y).0)
  Process lhs = pr_nu(Rational(2), pr_par(p, pr_sum(sm_in(Term::var(0), pr_nil()))));
  Process rhs = pr_par(p, pr_nu(Rational(2), pr_sum(sm_in(Term::var(0), pr_nil()))));
  CHECK(congruent(e, lhs, rhs));
  (void)qx;
}

TEST_CASE("congruence: nu swap and unused binder") {
  Env e;
  // new(1) a in new(2) b in (a?.0 | b?.0) == new(2) b in new(1) a in ...
  Process body_ab =
      pr_par(pr_sum(sm_in(Term::var(1), pr_nil())), pr_sum(sm_in(Term::var(0), pr_nil())));
  Process body_ba =
      pr_par(pr_sum(sm_in(Term::var(0), pr_nil())), pr_sum(sm_in(Term::var(1), pr_nil())));
  Process lhs = pr_nu(Rational(1), pr_nu(Rational(2), body_ab));
  Process rhs = pr_nu(Rational(2), pr_nu(Rational(1), body_ba));
  CHECK(congruent(e, lhs, rhs));
  // nu_r 0 == 0; also an unused binder drops
  CHECK(congruent(e, pr_nu(Rational(3), pr_nil()), pr_nil()));
  Process p = tau_p(Rational(1), pr_nil());
  CHECK(congruent(e, pr_nu(Rational(3), p), p));
}

TEST_CASE("congruence: summand absorption and reordering") {
  Env e;
  Sum t = sm_tau(Rational(2), pr_nil());
  CHECK(congruent(e, pr_sum(sm_plus(t, t)), pr_sum(t)));
  Sum o = sm_out(ch("x"), ch("a"), pr_nil());
  CHECK(congruent(e, pr_sum(sm_plus(t, o)), pr_sum(sm_plus(o, t))));
  CHECK_FALSE(congruent(e, pr_sum(sm_plus(t, o)), pr_sum(t)));
}

TEST_CASE("congruence: definition unfolding against a non-call") {
  Env e;
  e.defs["X"] = {0, tau_p(Rational(2), pr_nil())};
  validate_env(e);
  CHECK(congruent(e, pr_call("X"), tau_p(Rational(2), pr_nil())));
  CHECK_FALSE(congruent(e, pr_call("X"), tau_p(Rational(3), pr_nil())));
  // call against call with distinct heads and equal bodies
  e.defs["Y"] = {0, tau_p(Rational(2), pr_nil())};
  CHECK(congruent(e, pr_call("X"), pr_call("Y")));
}

TEST_CASE("env validation: unguarded calls are rejected") {
  Env e;
  e.defs["X"] = {0, pr_par(pr_call("X"), tau_p(Rational(1), pr_nil()))};
  CHECK_THROWS_AS(validate_env(e), SpiError);
  Env ok;
  ok.defs["X"] = {0, tau_p(Rational(1), pr_call("X"))};
  CHECK_NOTHROW(validate_env(ok));
}

TEST_CASE("step: internal action") {
  Env e;
  RateTable rates;
  auto succ = step(e, rates, tau_p(Rational(2), pr_nil()));
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].first.kind == Event::Kind::Internal);
  CHECK(succ[0].first.rate == Rational(2));
  CHECK(congruent(e, succ[0].second, pr_nil()));
}

TEST_CASE("step: synchronization carries the channel's inherent rate") {
  Env e;
  RateTable rates{{"x", Rational(4)}};
  Process p = pr_par(out_p("x", "a", tau_p(Rational(9), pr_nil())),
                     pr_sum(sm_in(ch("x"), pr_sum(sm_in(Term::var(0), pr_nil())))));
  auto succ = step(e, rates, p);
  REQUIRE(succ.size() == 1);
  const auto& [ev, next] = succ[0];
  CHECK(ev.kind == Event::Kind::Synchronize);
  CHECK(ev.rate == Rational(4));
  CHECK(ev.channel == ch("x"));
  CHECK(ev.message == ch("a"));
  // successor: tau(9).0 | a?(y).0  (the received name substituted)
  Process expect = pr_par(tau_p(Rational(9), pr_nil()), pr_sum(sm_in(ch("a"), pr_nil())));
  CHECK(congruent(e, next, expect));
}

TEST_CASE("step: nil has no successors, lone output has no partner") {
  Env e;
  RateTable rates{{"x", Rational(1)}};
  CHECK(step(e, rates, pr_nil()).empty());
  CHECK(step(e, rates, out_p("x", "a", pr_nil())).empty());
}

TEST_CASE("step: unrated channel is an error") {
  Env e;
  RateTable rates;
  Process p = pr_par(out_p("x", "a", pr_nil()), in_p("x", pr_nil()));
  CHECK_THROWS_AS(step(e, rates, p), SpiError);
}

TEST_CASE("step: restriction opens with its declared rate") {
  Env e;
  RateTable rates;
  // new(5) c in (c!(c).0 | c?(y).0)
  Process body = pr_par(pr_sum(sm_out(Term::var(0), Term::var(0), pr_nil())),
                        pr_sum(sm_in(Term::var(0), pr_nil())));
  auto succ = step(e, rates, pr_nu(Rational(5), body));
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].first.rate == Rational(5));
}

TEST_CASE("encode_proc: clauses of the definition") {
  CHECK(pos_equal(encode_proc(pr_nil()), pos_one(), Domain::Rates));
  Process p = tau_p(Rational(1), pr_nil());
  Process q = out_p("x", "a", pr_nil());
  CHECK(pos_equal(encode_proc(pr_par(p, q)),
                  pos_tensor(encode_proc(p), encode_proc(q)), Domain::Rates));
  // nu: ex x. !(rt x at r) * [P x]
  Pos nu = encode_proc(pr_nu(Rational(2), pr_sum(sm_in(Term::var(0), pr_nil()))));
  REQUIRE(nu->tag == PosTag::ExistsT);
  REQUIRE(nu->a->tag == PosTag::Tensor);
  CHECK(nu->a->a->tag == PosTag::Bang);
  // call: a positive atom
  Pos call = encode_proc(pr_call("X", {ch("a")}));
  CHECK(call->tag == PosTag::Atom);
  CHECK(call->pred == "X");
}

TEST_CASE("encode_sum: the three prefixes and choice") {
  // out: neg (out x m * [P])
  Neg o = encode_sum(sm_out(ch("x"), ch("m"), pr_nil()));
  REQUIRE(o->tag == NegTag::OfPos);
  REQUIRE(o->p->tag == PosTag::Tensor);
  CHECK(o->p->a->tag == PosTag::Atom);
  CHECK(o->p->a->pred == "out");
  CHECK(pos_equal(o->p->b, pos_one(), Domain::Rates));
  // in: fa n. neg (in x n * [P n])
  Neg i = encode_sum(sm_in(ch("x"), pr_nil()));
  REQUIRE(i->tag == NegTag::ForallT);
  REQUIRE(i->a->tag == NegTag::OfPos);
  CHECK(i->a->p->a->pred == "in");
  CHECK(i->a->p->a->args[1] == Term::var(0));
  // tau: neg (tau r * [P]) with the rate as a term literal
  Neg t = encode_sum(sm_tau(Rational(3, 2), pr_nil()));
  REQUIRE(t->tag == NegTag::OfPos);
  CHECK(t->p->a->pred == "tau");
  CHECK(t->p->a->args[0] == Term::rate(Rational(3, 2)));
  // plus: with of the encodings
  Neg w = encode_sum(sm_plus(sm_tau(Rational(1), pr_nil()), sm_tau(Rational(2), pr_nil())));
  CHECK(w->tag == NegTag::With);
}

TEST_CASE("encode_sum: nested outputs stay sequential") {
  // [x!(m).y!(n).P] has the guarded shape pos(dt -o neg(out * pos(dt -o ...)))
  Process p = out_p("x", "m", out_p("y", "n", pr_nil()));
  Pos enc = encode_proc(p);
  REQUIRE(enc->tag == PosTag::OfNeg);
  REQUIRE(enc->n->tag == NegTag::Limp);
  const Neg& inner = enc->n->a;
  REQUIRE(inner->tag == NegTag::OfPos);
  REQUIRE(inner->p->tag == PosTag::Tensor);
  // the continuation is itself a guarded sum, not a bare token
  CHECK(inner->p->b->tag == PosTag::OfNeg);
}

TEST_CASE("encode_env: bi-implication expansion, arity 0 and 2") {
  Env e;
  e.defs["X"] = {0, tau_p(Rational(1), pr_nil())};
  e.defs["Y"] = {2, pr_sum(sm_out(Term::var(1), Term::var(0), pr_nil()))};
  auto js = encode_env(e);
  REQUIRE(js.size() == 2);
  // each: faw u. ((...) at u) @ id
  for (const auto& j : js) {
    REQUIRE(j.prop->tag == NegTag::ForallW);
    REQUIRE(j.prop->a->tag == NegTag::At);
    CHECK(world_equal(j.world, w_identity(), Domain::Rates));
  }
  // arity 2: two term quantifiers then the with
  const Neg& y = js[1].prop->a->a;
  REQUIRE(y->tag == NegTag::ForallT);
  REQUIRE(y->a->tag == NegTag::ForallT);
  CHECK(y->a->a->tag == NegTag::With);
  // hand expansion of the clause for X
  Neg expect = neg_with(
      neg_limp(pos_atom("X"), neg_of_pos(encode_proc(tau_p(Rational(1), pr_nil())))),
      neg_limp(encode_proc(tau_p(Rational(1), pr_nil())), neg_of_pos(pos_atom("X"))));
  CHECK(neg_equal(js[0].prop->a->a, expect, Domain::Rates));
}

TEST_CASE("interaction theory: structure per the definition") {
  NegJudgement inter = interaction_theory();
  CHECK(world_equal(inter.world, w_identity(), Domain::Rates));
  // !! (act -o neg int & neg syn)
  REQUIRE(inter.prop->tag == NegTag::ForallW);
  REQUIRE(inter.prop->a->tag == NegTag::At);
  const Neg& body = inter.prop->a->a;
  REQUIRE(body->tag == NegTag::Limp);
  CHECK(body->p->pred == "act");
  REQUIRE(body->a->tag == NegTag::With);
  // int: (dt at id) * pos fa r. ((tau r at id) -o rho_r neg act)
  const Neg& int_side = body->a->a;
  REQUIRE(int_side->tag == NegTag::OfPos);
  REQUIRE(int_side->p->tag == PosTag::Tensor);
  CHECK(int_side->p->a->tag == PosTag::At);
  const Pos& int_cont = int_side->p->b;
  REQUIRE(int_cont->tag == PosTag::OfNeg);
  CHECK(int_cont->n->tag == NegTag::ForallT);
  // syn: (dt * dt at id) * pos fa x. faw r. fa m. ...
  const Neg& syn_side = body->a->b;
  REQUIRE(syn_side->tag == NegTag::OfPos);
  const Pos& syn_cont = syn_side->p->b;
  REQUIRE(syn_cont->tag == PosTag::OfNeg);
  REQUIRE(syn_cont->n->tag == NegTag::ForallT);
  REQUIRE(syn_cont->n->a->tag == NegTag::ForallW);
  REQUIRE(syn_cont->n->a->a->tag == NegTag::ForallT);
  // polarity bookkeeping: erase then re-polarize is stable
  Prop erased = erase_neg(inter.prop);
  CHECK(neg_equal(polarize_neg(erased), inter.prop, Domain::Rates));
}

TEST_CASE("canonical context: worked example") {
  // can(x!(a).Q | x?.R) = {dt -o <out>, dt -o <in>}
  RateTable rates{{"x", Rational(4)}};
  Process p = pr_par(out_p("x", "a", pr_nil()), in_p("x", pr_nil()));
  CanonicalContext can = canonical_context(p, rates);
  REQUIRE(can.items.size() == 2);
  for (const auto& j : can.items) {
    REQUIRE(j.prop->tag == NegTag::Limp);
    CHECK(j.prop->p->pred == "dt");
    CHECK(world_equal(j.world, w_identity(), Domain::Rates));
  }
  CHECK(can.rt_facts.empty());
  // can(0) is empty
  CHECK(canonical_context(pr_nil(), rates).items.empty());
  // can(nu_r P) opens a fresh rated channel
  CanonicalContext cnu =
      canonical_context(pr_nu(Rational(7), pr_sum(sm_in(Term::var(0), pr_nil()))), rates);
  REQUIRE(cnu.items.size() == 1);
  REQUIRE(cnu.rt_facts.size() == 1);
  CHECK(cnu.rates.size() == 2);
}

TEST_CASE("canonical sequent: the worked-example shape") {
  Env e;
  RateTable rates{{"x", Rational(4)}};
  Process p = pr_par(out_p("x", "a", pr_nil()), in_p("x", pr_nil()));
  Process q = pr_nil();
  WorldExpr s = w_identity();
  WorldExpr t = w_rate(Rational(4));
  FocSequent cs = canonical_sequent(e, rates, p, q, s, t);
  CHECK(is_neutral(cs));
  // gamma: rt x @ [4] and inter @ id
  REQUIRE(cs.gamma.size() == 2);
  CHECK(cs.gamma[0].prop->pred == "rt");
  CHECK(cs.gamma[1].prop->tag == NegTag::ForallW);
  // delta: the lock then the two canonical items
  REQUIRE(cs.delta.size() == 3);
  CHECK(cs.delta[0].prop->tag == NegTag::OfPos);
  CHECK(cs.delta[0].prop->p->pred == "act");
  // goal: ([0] at id) * act @ t
  REQUIRE(cs.goal.stable);
  REQUIRE(cs.goal.stable_goal->tag == PosTag::Tensor);
  CHECK(cs.goal.stable_goal->b->pred == "act");
  CHECK(world_equal(cs.goal.world, t, Domain::Rates));
  // a free channel without a rate entry violates the canonical invariant
  RateTable missing;
  CHECK_THROWS_AS(
      (void)enabled_actions(e, expand_config(e, open_config(e, missing, p))), SpiError);
}

TEST_CASE("enabled actions: race enumeration") {
  Env e;
  RateTable rates{{"x", Rational(4)}};
  // tau_2.0 | tau_3.0: two internal actions
  Config c1 = expand_config(
      e, open_config(e, rates, pr_par(tau_p(Rational(2), pr_nil()), tau_p(Rational(3), pr_nil()))));
  auto a1 = enabled_actions(e, c1);
  REQUIRE(a1.size() == 2);
  CHECK(a1[0].propensity == Rational(2));
  CHECK(a1[1].propensity == Rational(3));
  // two outputs and one input on x: two pairs, each at the inherent rate
  Process p = pr_par(out_p("x", "a", pr_nil()),
                     pr_par(out_p("x", "b", pr_nil()), in_p("x", pr_nil())));
  Config c2 = expand_config(e, open_config(e, rates, p));
  auto a2 = enabled_actions(e, c2);
  REQUIRE(a2.size() == 2);
  CHECK(a2[0].propensity == Rational(4));
  CHECK(a2[1].propensity == Rational(4));
  // a sum cannot synchronize with itself
  Process self = pr_sum(sm_plus(sm_out(ch("x"), ch("a"), pr_nil()), sm_in(ch("x"), pr_nil())));
  auto a3 = enabled_actions(e, expand_config(e, open_config(e, rates, self)));
  CHECK(a3.empty());
}

TEST_CASE("trace replay and accumulated worlds") {
  Env e;
  e.defs["X"] = {0, tau_p(Rational(2), pr_call("Y"))};
  e.defs["Y"] = {0, tau_p(Rational(3), pr_call("X"))};
  validate_env(e);
  RateTable rates;
  Trace t;
  t.initial = pr_call("X");
  for (int i = 0; i < 4; ++i) {
    Event ev;
    ev.kind = Event::Kind::Internal;
    ev.rate = i % 2 == 0 ? Rational(2) : Rational(3);
    t.events.push_back(ev);
  }
  auto states = replay(e, rates, t);
  CHECK(states.size() == 5);
  CHECK(trace_world(t, 4) ==
        World::rate_list({Rational(2), Rational(3), Rational(2), Rational(3)}));
  // a tampered rate stops replaying
  t.events[1].rate = Rational(5);
  CHECK_THROWS_AS(replay(e, rates, t), SpiError);
}
