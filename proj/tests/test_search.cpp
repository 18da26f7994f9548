#include <doctest.h>

#include "hyll/focusing.hpp"
#include "hyll/print.hpp"

using namespace hyll;

namespace {

Sequent seq(Domain d, std::vector<Judgement> gamma, std::vector<Judgement> delta, Judgement goal) {
  Sequent s;
  s.domain = d;
  s.gamma = std::move(gamma);
  s.delta = std::move(delta);
  s.goal = std::move(goal);
  int tmax = -1, wmax = -1;
  for (auto& j : s.gamma) max_prop_params(j.prop, tmax, wmax);
  for (auto& j : s.delta) max_prop_params(j.prop, tmax, wmax);
  max_prop_params(s.goal.prop, tmax, wmax);
  s.tscope = tmax + 1;
  s.wscope = wmax + 1;
  return s;
}

bool provable(const Sequent& s, int fuel = 8) {
  SearchBudget b;
  b.max_decisions = fuel;
  auto p = prove_unfocused(s, b);
  if (!p) return false;
  CheckReport r = check_proof(*p);
  if (!r.ok) {
    CAPTURE(to_string(r));
    CHECK(r.ok);
  }
  // the erased proof must prove the polarized sequent's erasure, which is
  // judgement-for-judgement the original sequent with gammas banged into
  // the linear context; accept the check result as the oracle
  return true;
}

Prop n(const std::string& s) { return p_atom(false, s); }
Prop pp(const std::string& s) { return p_atom(true, s); }

}  // namespace

TEST_CASE("search: atom identity at a world") {
  WorldExpr w = w_rate(Rational(2));
  CHECK(provable(seq(Domain::Rates, {}, {{n("p"), w}}, {n("p"), w}), 2));
}

TEST_CASE("search: no proof of 0 @ w at fuel 6 in all three domains") {
  for (Domain d : {Domain::Unit, Domain::Temporal, Domain::Rates}) {
    WorldExpr w = d == Domain::Rates      ? w_rate(Rational(2))
                  : d == Domain::Temporal ? w_lit(World::time_point(Rational(1)))
                                          : w_identity();
    CHECK_FALSE(provable(seq(d, {}, {}, {p_zero(), w}), 6));
  }
}

TEST_CASE("search: S5 axiom 5 in the unit domain") {
  // . ; dia A @ w ==> box dia A @ w  with A a negative atom.  Reachability
  // is total only in the one-point domain, where the axiom holds.
  Prop a = n("a");
  WorldExpr w = w_identity();
  Sequent s = seq(Domain::Unit, {}, {{d_dia(a), w}}, {d_box(d_dia(a)), w});
  CHECK(provable(s, 4));
}

TEST_CASE("search: rho derived right rule") {
  // Delta ==> rho_v A @ w reduces to Delta ==> A @ w.v
  Prop a = n("a");
  WorldExpr v = w_rate(Rational(3));
  WorldExpr w = w_rate(Rational(2));
  Sequent s = seq(Domain::Rates, {}, {{p_at(a, w_compose(w, v)), w}}, {d_rho(v, a), w});
  CHECK(provable(s, 4));
  // and the rate must match: a at w.v' with a different v' is not provable
  Sequent bad = seq(Domain::Rates, {}, {{p_at(a, w_compose(w, w_rate(Rational(5)))), w}},
                    {d_rho(v, a), w});
  CHECK_FALSE(provable(bad, 6));
}

TEST_CASE("search: dn-commutation with tensor, both directions") {
  // dn u. (p * q) <==> (dn u. p) * (dn u. q) at a concrete world
  Prop p = pp("p"), q = pp("q");
  WorldExpr w = w_lit(World::time_point(Rational(1)));
  Prop lhs = p_down(p_tensor(p, q));
  Prop rhs = p_tensor(p_down(p), p_down(q));
  CHECK(provable(seq(Domain::Temporal, {}, {{lhs, w}}, {rhs, w}), 6));
  CHECK(provable(seq(Domain::Temporal, {}, {{rhs, w}}, {lhs, w}), 6));
}

TEST_CASE("search: tensor algebra") {
  Prop a = n("a"), b = n("b"), c = n("c");
  WorldExpr w = w_identity();
  // commutativity
  CHECK(provable(seq(Domain::Unit, {}, {{p_tensor(a, b), w}}, {p_tensor(b, a), w}), 6));
  // associativity
  CHECK(provable(seq(Domain::Unit, {}, {{p_tensor(a, p_tensor(b, c)), w}},
                     {p_tensor(p_tensor(a, b), c), w}), 6));
  // unit
  CHECK(provable(seq(Domain::Unit, {}, {{p_tensor(a, p_one()), w}}, {a, w}), 6));
  CHECK(provable(seq(Domain::Unit, {}, {{a, w}}, {p_tensor(p_one(), a), w}), 6));
}

TEST_CASE("search: additive algebra and distribution") {
  Prop a = n("a"), b = n("b"), c = n("c");
  WorldExpr w = w_identity();
  CHECK(provable(seq(Domain::Unit, {}, {{p_with(a, b), w}}, {a, w}), 4));
  CHECK(provable(seq(Domain::Unit, {}, {{a, w}}, {p_oplus(a, b), w}), 4));
  CHECK(provable(seq(Domain::Unit, {}, {{p_oplus(a, b), w}}, {p_oplus(b, a), w}), 6));
  CHECK(provable(seq(Domain::Unit, {}, {{p_with(a, b), w}}, {p_with(b, a), w}), 6));
  // (a + b) * c |- (a * c) + (b * c)
  CHECK(provable(seq(Domain::Unit, {}, {{p_tensor(p_oplus(a, b), c), w}},
                     {p_oplus(p_tensor(a, c), p_tensor(b, c)), w}), 6));
  // a & top |- a and a |- a & top (needs slack)
  CHECK(provable(seq(Domain::Unit, {}, {{p_with(a, p_top()), w}}, {a, w}), 4));
  CHECK(provable(seq(Domain::Unit, {}, {{a, w}}, {p_with(a, p_top()), w}), 4));
  // 0 + a |- a
  CHECK(provable(seq(Domain::Unit, {}, {{p_oplus(p_zero(), a), w}}, {a, w}), 4));
}

TEST_CASE("search: exponential laws") {
  Prop a = n("a"), b = n("b");
  WorldExpr w = w_identity();
  // dereliction and duplication
  CHECK(provable(seq(Domain::Unit, {}, {{p_bang(a), w}}, {a, w}), 4));
  CHECK(provable(seq(Domain::Unit, {}, {{p_bang(a), w}}, {p_tensor(a, a), w}), 6));
  // promotion-ish: !a, !(a -o b) |- !b
  CHECK(provable(seq(Domain::Unit, {}, {{p_bang(a), w}, {p_bang(p_limp(a, b)), w}},
                     {p_bang(b), w}), 8));
}

TEST_CASE("search: currying both ways") {
  Prop a = n("a"), b = n("b"), c = n("c");
  WorldExpr w = w_identity();
  Prop cur = p_limp(a, p_limp(b, c));
  Prop unc = p_limp(p_tensor(a, b), c);
  CHECK(provable(seq(Domain::Unit, {}, {{cur, w}}, {unc, w}), 6));
  CHECK(provable(seq(Domain::Unit, {}, {{unc, w}}, {cur, w}), 6));
}

TEST_CASE("search: quantifier instantiation") {
  // fa x. p(x) |- p(k)
  Prop fa = p_forall_t(p_atom(false, "p", {Term::var(0)}));
  Prop pk = p_atom(false, "p", {Term::fn("k")});
  WorldExpr w = w_identity();
  CHECK(provable(seq(Domain::Unit, {}, {{fa, w}}, {pk, w}), 4));
  // p(k) |- ex x. p(x)
  Prop ex = p_exists_t(p_atom(false, "p", {Term::var(0)}));
  CHECK(provable(seq(Domain::Unit, {}, {{pk, w}}, {ex, w}), 4));
  // fa x. p(x) not provable from p(k)
  CHECK_FALSE(provable(seq(Domain::Unit, {}, {{pk, w}}, {fa, w}), 5));
}

TEST_CASE("search: bangbang distributes to any world") {
  // !!a |- (a at v)  for any v: faw u. (a at u) instantiates u := v
  Prop a = n("a");
  WorldExpr w = w_rate(Rational(2));
  WorldExpr v = w_rate(Rational(7));
  CHECK(provable(seq(Domain::Rates, {}, {{d_bangbang(a), w}}, {p_at(a, v), w}), 4));
}

TEST_CASE("search: budget monotonicity on the corpus") {
  Prop a = n("a"), b = n("b");
  WorldExpr w = w_identity();
  Sequent s = seq(Domain::Unit, {}, {{p_tensor(a, b), w}}, {p_tensor(b, a), w});
  SearchBudget b4;
  b4.max_decisions = 4;
  auto p4 = prove_unfocused(s, b4);
  REQUIRE(p4.has_value());
  for (int extra = 1; extra <= 3; ++extra) {
    SearchBudget more = b4;
    more.max_decisions = 4 + extra;
    CHECK(prove_unfocused(s, more).has_value());
  }
}

TEST_CASE("search: conservativity probe on pure sequents") {
  // pure sequents decide the same in the unit domain and at non-identity
  // worlds of the other domains
  Prop a = n("a"), b = n("b");
  struct Case {
    Sequent unit;
    bool expect;
  };
  auto mk = [&](std::vector<Judgement> gamma, std::vector<Judgement> delta, Judgement goal) {
    return seq(Domain::Unit, std::move(gamma), std::move(delta), std::move(goal));
  };
  WorldExpr u = w_identity();
  std::vector<std::pair<Sequent, bool>> cases = {
      {mk({}, {{a, u}}, {a, u}), true},
      {mk({}, {{a, u}, {p_limp(a, b), u}}, {b, u}), true},
      {mk({}, {{a, u}}, {p_tensor(a, a), u}), false},
      {mk({}, {{p_bang(a), u}}, {p_tensor(a, a), u}), true},
      {mk({}, {{p_oplus(a, b), u}}, {a, u}), false},
      {mk({}, {{p_with(a, b), u}}, {b, u}), true},
  };
  for (auto& [s, expect] : cases) {
    CHECK(provable(s, 6) == expect);
    // at a non-identity world in the rates domain
    Sequent r = s;
    r.domain = Domain::Rates;
    WorldExpr w = w_rate(Rational(2));
    for (auto& j : r.gamma) j.world = w;
    for (auto& j : r.delta) j.world = w;
    r.goal.world = w;
    CHECK(provable(r, 6) == expect);
  }
}
