#include <doctest.h>

#include <random>

#include "hyll/kernel.hpp"
#include "hyll/print.hpp"

using namespace hyll;

namespace {

Judgement j(Prop p, WorldExpr w) { return Judgement{std::move(p), std::move(w)}; }

// Cut of the identity proof of A against the identity proof of A: the
// classic exercise that walks through every principal case of A.
Proof identity_cut(const Prop& a, const WorldExpr& w, Domain d) {
  Proof d1 = identity_expand(a, w, d);
  Proof d2 = identity_expand(a, w, d);
  Sequent s = d1->conclusion;
  RuleApp app{RuleTag::Cut};
  app.cut_judgement = j(a, w);
  app.split = {0};
  return mk_proof(app, s, {d1, d2});
}

Prop random_prop(std::mt19937_64& g, Domain d, int depth, int ts, int ws) {
  auto lit = [&] {
    switch (d) {
      case Domain::Unit: return w_identity();
      case Domain::Temporal: return w_lit(World::time_point(Rational(2)));
      case Domain::Rates: return w_rate(Rational(3));
    }
    return w_identity();
  };
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 13);
  switch (pick(g)) {
    case 2:
      return p_tensor(random_prop(g, d, depth - 1, ts, ws), random_prop(g, d, depth - 1, ts, ws));
    case 3:
      return p_limp(random_prop(g, d, depth - 1, ts, ws), random_prop(g, d, depth - 1, ts, ws));
    case 4:
      return p_with(random_prop(g, d, depth - 1, ts, ws), random_prop(g, d, depth - 1, ts, ws));
    case 5:
      return p_oplus(random_prop(g, d, depth - 1, ts, ws), random_prop(g, d, depth - 1, ts, ws));
    case 6: return p_bang(random_prop(g, d, depth - 1, ts, ws));
    case 7: return p_forall_t(random_prop(g, d, depth - 1, ts + 1, ws));
    case 8: return p_exists_t(random_prop(g, d, depth - 1, ts + 1, ws));
    case 9: return p_forall_w(random_prop(g, d, depth - 1, ts, ws + 1));
    case 10: return p_exists_w(random_prop(g, d, depth - 1, ts, ws + 1));
    case 11: return p_down(random_prop(g, d, depth - 1, ts, ws + 1));
    case 12:
      return p_at(random_prop(g, d, depth - 1, ts, ws),
                  ws > 0 ? w_compose(w_bvar(0), lit()) : lit());
    case 13: {
      int u = std::uniform_int_distribution<int>(0, 2)(g);
      return u == 0 ? p_one() : u == 1 ? p_top() : p_zero();
    }
    default: {
      bool positive = std::uniform_int_distribution<int>(0, 1)(g) == 1;
      std::vector<Term> args;
      if (ts > 0 && std::uniform_int_distribution<int>(0, 1)(g) == 0)
        args.push_back(Term::var(std::uniform_int_distribution<int>(0, ts - 1)(g)));
      else
        args.push_back(Term::fn("k"));
      return p_atom(positive, positive ? "p" : "n", std::move(args));
    }
  }
}

void check_elimination(const Proof& with_cut) {
  REQUIRE(check_proof(with_cut, /*allow_cut=*/true).ok);
  Proof out = cut_eliminate(with_cut);
  CheckReport r = check_proof(out, /*allow_cut=*/false);
  if (!r.ok) CAPTURE(to_string(r));
  REQUIRE(r.ok);
  CHECK(count_cuts(out) == 0);
  CHECK(sequent_equal(out->conclusion, with_cut->conclusion));
}

}  // namespace

TEST_CASE("cut: identity against identity collapses (principal cases)") {
  WorldExpr w = w_rate(Rational(2));
  check_elimination(identity_cut(p_atom(false, "p"), w, Domain::Rates));
  check_elimination(identity_cut(p_tensor(p_atom(false, "p"), p_atom(false, "q")), w, Domain::Rates));
  check_elimination(identity_cut(p_limp(p_atom(false, "p"), p_atom(false, "q")), w, Domain::Rates));
  check_elimination(identity_cut(p_bang(p_atom(false, "p")), w, Domain::Rates));
  check_elimination(identity_cut(p_forall_t(p_atom(false, "p", {Term::var(0)})), w, Domain::Rates));
  check_elimination(identity_cut(p_down(p_at(p_atom(false, "p"), w_bvar(0))), w, Domain::Rates));
}

TEST_CASE("cut on *: *R against *L reduces to smaller cuts") {
  // ; p, q ==> p * q  cut against  ; p * q ==> p * q
  Prop p = p_atom(false, "p"), q = p_atom(false, "q");
  Prop pq = p_tensor(p, q);
  WorldExpr w = w_identity();
  Domain D = Domain::Unit;

  Sequent s1;
  s1.domain = D;
  s1.delta = {j(p, w), j(q, w)};
  s1.goal = j(pq, w);
  RuleApp tr{RuleTag::TensorR};
  tr.split = {0};
  ApplyResult ar = apply_rule(s1, tr);
  REQUIRE(ar.ok);
  Proof d1 = mk_proof(tr, s1,
                      {mk_proof({RuleTag::Init}, ar.premises[0], {}),
                       mk_proof({RuleTag::Init}, ar.premises[1], {})});
  REQUIRE(check_proof(d1).ok);

  Proof d2 = identity_expand(pq, w, D);

  Sequent sc = s1;
  RuleApp cut{RuleTag::Cut};
  cut.cut_judgement = j(pq, w);
  cut.split = {0, 1};
  Proof c = mk_proof(cut, sc, {d1, d2});
  check_elimination(c);
}

TEST_CASE("cut!: unrestricted cut against copy duplicates correctly") {
  // Gamma = r@u ambient; cut 1@u into a derivation that copies it
  Domain D = Domain::Temporal;
  WorldExpr u = w_lit(World::time_point(Rational(1)));
  WorldExpr v = w_lit(World::time_point(Rational(2)));
  Judgement amb = j(p_atom(false, "r"), u);
  Judgement one = j(p_one(), u);
  Prop p = p_atom(false, "p");

  // d1: r@u ; . ==> 1@u
  Sequent s1;
  s1.domain = D;
  s1.gamma = {amb};
  s1.goal = one;
  Proof d1 = mk_proof({RuleTag::OneR}, s1, {});
  REQUIRE(check_proof(d1).ok);

  // d2: r@u, 1@u ; p@v ==> p@v   via copy and 1L
  Sequent s2;
  s2.domain = D;
  s2.gamma = {amb, one};
  s2.delta = {j(p, v)};
  s2.goal = j(p, v);
  RuleApp cp{RuleTag::Copy};
  cp.copied = one;
  ApplyResult a1 = apply_rule(s2, cp);
  REQUIRE(a1.ok);
  RuleApp ol{RuleTag::OneL};
  ol.principal = 1;
  ApplyResult a2 = apply_rule(a1.premises[0], ol);
  REQUIRE(a2.ok);
  Proof d2 = mk_proof(cp, s2,
                      {mk_proof(ol, a1.premises[0],
                                {mk_proof({RuleTag::Init}, a2.premises[0], {})})});
  REQUIRE(check_proof(d2).ok);

  Sequent sc;
  sc.domain = D;
  sc.gamma = {amb};
  sc.delta = {j(p, v)};
  sc.goal = j(p, v);
  RuleApp cb{RuleTag::CutBang};
  cb.cut_judgement = one;
  check_elimination(mk_proof(cb, sc, {d1, d2}));
}

TEST_CASE("cut: randomized identity cuts over all connectives and domains") {
  std::mt19937_64 g(4242);
  for (int i = 0; i < 120; ++i) {
    Domain d = static_cast<Domain>(i % 3);
    WorldExpr w = d == Domain::Rates      ? w_rate(Rational(2))
                  : d == Domain::Temporal ? w_lit(World::time_point(Rational(1)))
                                          : w_identity();
    Prop a = random_prop(g, d, 4, 0, 0);
    check_elimination(identity_cut(a, w, d));
  }
}

TEST_CASE("cut: commutative case through an unrelated hypothesis") {
  // d2 ends in a left rule on a different formula than the cut one
  Domain D = Domain::Unit;
  WorldExpr w = w_identity();
  Prop p = p_atom(false, "p"), q = p_atom(false, "q");

  // d1: ; p ==> p
  Proof d1 = identity_expand(p, w, D);

  // d2: ; 1, p ==> p  via 1L then init
  Sequent s2;
  s2.domain = D;
  s2.delta = {j(p_one(), w), j(p, w)};
  s2.goal = j(p, w);
  RuleApp ol{RuleTag::OneL};
  ol.principal = 0;
  ApplyResult a = apply_rule(s2, ol);
  REQUIRE(a.ok);
  Proof d2 = mk_proof(ol, s2, {mk_proof({RuleTag::Init}, a.premises[0], {})});
  REQUIRE(check_proof(d2).ok);

  // cut p into d2
  Sequent sc;
  sc.domain = D;
  sc.delta = {j(p, w), j(p_one(), w)};
  sc.goal = j(p, w);
  RuleApp cut{RuleTag::Cut};
  cut.cut_judgement = j(p, w);
  cut.split = {0};
  check_elimination(mk_proof(cut, sc, {d1, d2}));
  (void)q;
}
