#include <doctest.h>

#include <functional>
#include <random>

#include "hyll/kernel.hpp"
#include "hyll/print.hpp"

using namespace hyll;

namespace {

Judgement j(Prop p, WorldExpr w) { return Judgement{std::move(p), std::move(w)}; }

Sequent seq(Domain d, std::vector<Judgement> gamma, std::vector<Judgement> delta, Judgement goal,
            int ts = 0, int ws = 0) {
  Sequent s;
  s.domain = d;
  s.gamma = std::move(gamma);
  s.delta = std::move(delta);
  s.goal = std::move(goal);
  s.tscope = ts;
  s.wscope = ws;
  return s;
}

// Random proposition generator over all connectives, hybrid included.
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

}  // namespace

TEST_CASE("check_proof: one-node init") {
  Prop p = p_atom(false, "p");
  WorldExpr u = w_rate(Rational(2));
  Sequent s = seq(Domain::Rates, {}, {j(p, u)}, j(p, u));
  Proof pr = mk_proof({RuleTag::Init}, s, {});
  CHECK(check_proof(pr).ok);
}

TEST_CASE("check_proof: topR with arbitrary nonempty delta") {
  Sequent s = seq(Domain::Temporal, {}, {j(p_atom(false, "a"), w_identity()),
                                         j(p_one(), w_identity())},
                  j(p_top(), w_lit(World::time_point(Rational(1)))));
  Proof pr = mk_proof({RuleTag::TopR}, s, {});
  CHECK(check_proof(pr).ok);
}

TEST_CASE("check_proof: init with unequal worlds fails at root") {
  Prop p = p_atom(false, "p");
  Sequent s = seq(Domain::Temporal, {}, {j(p, w_lit(World::time_point(Rational(1))))},
                  j(p, w_lit(World::time_point(Rational(2)))));
  Proof pr = mk_proof({RuleTag::Init}, s, {});
  CheckReport r = check_proof(pr);
  CHECK_FALSE(r.ok);
  CHECK(r.path.empty());
  CHECK(r.rule == std::string("init"));
}

TEST_CASE("check_proof: worlds compare by value, not syntax") {
  Prop p = p_atom(false, "p");
  WorldExpr a = w_compose(w_rate(Rational(2)), w_rate(Rational(3)));
  WorldExpr b = w_lit(World::rate_list({Rational(2), Rational(3)}));
  Sequent s = seq(Domain::Rates, {}, {j(p, a)}, j(p, b));
  CHECK(check_proof(mk_proof({RuleTag::Init}, s, {})).ok);
}

TEST_CASE("identity_expand: atoms, tensor, hybrid") {
  // atom
  Proof a = identity_expand(p_atom(false, "p"), w_identity(), Domain::Unit);
  CHECK(a->rule.tag == RuleTag::Init);
  CHECK(check_proof(a).ok);
  // tensor
  Proof t = identity_expand(p_tensor(p_atom(false, "p"), p_atom(false, "q")),
                            w_rate(Rational(1)), Domain::Rates);
  CHECK(check_proof(t).ok);
  // dn u. (p at u)
  Proof d = identity_expand(p_down(p_at(p_atom(false, "p"), w_bvar(0))),
                            w_lit(World::time_point(Rational(2))), Domain::Temporal);
  CHECK(check_proof(d).ok);
  CHECK(d->rule.tag == RuleTag::DownL);
  CHECK(d->premises[0]->rule.tag == RuleTag::DownR);
}

TEST_CASE("identity_expand: 500 random props over all domains pass check") {
  std::mt19937_64 g(12345);
  for (int i = 0; i < 500; ++i) {
    Domain d = static_cast<Domain>(i % 3);
    Prop a = random_prop(g, d, 5, 0, 0);
    WorldExpr w = d == Domain::Rates      ? w_rate(Rational(2))
                  : d == Domain::Temporal ? w_lit(World::time_point(Rational(1, 2)))
                                          : w_identity();
    Proof pr = identity_expand(a, w, d);
    CheckReport r = check_proof(pr);
    if (!r.ok) {
      CAPTURE(to_string(a));
      CAPTURE(to_string(r));
    }
    REQUIRE(r.ok);
    CHECK(count_cuts(pr) == 0);
  }
}

TEST_CASE("weaken: adds unrestricted hypotheses") {
  Prop p = p_atom(false, "p");
  Proof base = identity_expand(p, w_identity(), Domain::Unit);
  Proof w1 = weaken(base, {j(p_atom(false, "extra"), w_identity())});
  CHECK(check_proof(w1).ok);
  CHECK(w1->conclusion.gamma.size() == 1);
  // weaken a -oL proof
  Proof limp = identity_expand(p_limp(p_atom(false, "a"), p_atom(false, "b")), w_identity(),
                               Domain::Unit);
  CHECK(check_proof(weaken(limp, {j(p_one(), w_identity())})).ok);
  // empty extra: identity transform
  Proof w0 = weaken(base, {});
  CHECK(check_proof(w0).ok);
  CHECK(sequent_equal(w0->conclusion, base->conclusion));
}

TEST_CASE("contract: duplicate then contract recovers a checkable proof") {
  std::mt19937_64 g(5);
  for (int i = 0; i < 3; ++i) {
    Prop a = random_prop(g, Domain::Unit, 3, 0, 0);
    Judgement extra = j(p_atom(false, "h"), w_identity());
    Proof base = identity_expand(a, w_identity(), Domain::Unit, {extra});
    Proof dup = weaken(base, {extra});  // gamma now holds h twice
    REQUIRE(check_proof(dup).ok);
    Proof con = contract(dup, extra);
    CHECK(check_proof(con).ok);
    CHECK(con->conclusion.gamma.size() == 1);
  }
}

TEST_CASE("invert: -oR, *L, 0L") {
  Prop a = p_atom(false, "a"), b = p_atom(false, "b");
  WorldExpr w = w_identity();
  {
    Sequent s = seq(Domain::Unit, {}, {}, j(p_limp(a, b), w));
    auto ps = invert(RuleTag::LimpR, s);
    REQUIRE(ps.size() == 1);
    CHECK(ps[0].delta.size() == 1);
    CHECK(judgement_equal(ps[0].delta[0], j(a, w), Domain::Unit));
    CHECK(judgement_equal(ps[0].goal, j(b, w), Domain::Unit));
  }
  {
    Sequent s = seq(Domain::Unit, {}, {j(p_tensor(a, b), w)}, j(p_top(), w));
    auto ps = invert(RuleTag::TensorL, s);
    REQUIRE(ps.size() == 1);
    CHECK(ps[0].delta.size() == 2);
  }
  {
    Sequent s = seq(Domain::Unit, {}, {j(p_zero(), w)}, j(a, w));
    auto ps = invert(RuleTag::ZeroL, s);
    CHECK(ps.empty());
  }
  {
    Sequent s = seq(Domain::Unit, {}, {}, j(a, w));
    CHECK_THROWS_AS(invert(RuleTag::TensorL, s), std::invalid_argument);
  }
}

TEST_CASE("apply_rule: multiplicative split must partition") {
  Prop a = p_atom(false, "a"), b = p_atom(false, "b");
  WorldExpr w = w_identity();
  Sequent s = seq(Domain::Unit, {}, {j(a, w), j(b, w)}, j(p_tensor(a, b), w));
  RuleApp app{RuleTag::TensorR};
  app.split = {0, 0};
  CHECK_FALSE(apply_rule(s, app).ok);
  app.split = {0};
  CHECK(apply_rule(s, app).ok);
}

TEST_CASE("fresh parameters: faR premise uses the scope level") {
  Prop a = p_forall_t(p_atom(false, "p", {Term::var(0)}));
  Sequent s = seq(Domain::Unit, {}, {}, j(a, w_identity()));
  auto ps = invert(RuleTag::ForallR, s);
  REQUIRE(ps.size() == 1);
  CHECK(ps[0].tscope == 1);
  CHECK(prop_equal(ps[0].goal.prop, p_atom(false, "p", {Term::param(0)}), Domain::Unit));
}
