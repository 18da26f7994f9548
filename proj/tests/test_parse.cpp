#include <doctest.h>

#include <random>

#include "hyll/parse.hpp"
#include "hyll/print.hpp"

using namespace hyll;

TEST_CASE("parse worlds: literals, lists, composition") {
  CHECK(world_equal(parse_world("id"), w_identity(), Domain::Rates));
  CHECK(world_equal(parse_world("3/2"), w_lit(World::time_point(Rational(3, 2))),
                    Domain::Temporal));
  CHECK(world_equal(parse_world("[2, 3/4]"),
                    w_lit(World::rate_list({Rational(2), Rational(3, 4)})), Domain::Rates));
  CHECK(world_equal(parse_world("[2] . [3]"),
                    w_lit(World::rate_list({Rational(2), Rational(3)})), Domain::Rates));
  CHECK(parse_world("u")->tag == WorldTag::Var);
  CHECK_THROWS_AS(parse_world("u ."), ParseError);
}

TEST_CASE("parse world error carries a position") {
  try {
    parse_world("[2, ]");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.col > 1);
  }
}

TEST_CASE("parse propositions: precedence and binders") {
  Signature sig;
  sig.positive["p"] = true;
  // ! binds tighter than *, + than &, -o right-assoc and loosest
  Prop a = parse_prop("!p * q + r & s -o t", sig);
  REQUIRE(a->tag == PropTag::Limp);
  REQUIRE(a->left->tag == PropTag::With);
  REQUIRE(a->left->left->tag == PropTag::Oplus);
  REQUIRE(a->left->left->left->tag == PropTag::Tensor);
  CHECK(a->left->left->left->left->tag == PropTag::Bang);
  // right-assoc -o
  Prop b = parse_prop("a -o b -o c", sig);
  REQUIRE(b->tag == PropTag::Limp);
  CHECK(b->right->tag == PropTag::Limp);
  // quantifiers extend maximally right
  Prop c = parse_prop("fa x. p(x) -o q", sig);
  REQUIRE(c->tag == PropTag::ForallT);
  CHECK(c->left->tag == PropTag::Limp);
  // at with a world
  Prop d = parse_prop("dn u. (p at u . [2])", sig);
  REQUIRE(d->tag == PropTag::Down);
  REQUIRE(d->left->tag == PropTag::At);
  // atom polarity comes from the signature
  CHECK(parse_prop("p", sig)->positive);
  CHECK_FALSE(parse_prop("q", sig)->positive);
  CHECK_THROWS_AS(parse_prop("p *", sig), ParseError);
  CHECK_THROWS_AS(parse_prop("p ** q", sig), ParseError);
}

TEST_CASE("print then parse is the identity on random propositions") {
  Signature sig;
  sig.positive["pp"] = true;
  std::mt19937_64 g(31337);
  std::function<Prop(int, int, int)> gen = [&](int depth, int ts, int ws) -> Prop {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 13);
    switch (pick(g)) {
      case 2: return p_tensor(gen(depth - 1, ts, ws), gen(depth - 1, ts, ws));
      case 3: return p_limp(gen(depth - 1, ts, ws), gen(depth - 1, ts, ws));
      case 4: return p_with(gen(depth - 1, ts, ws), gen(depth - 1, ts, ws));
      case 5: return p_oplus(gen(depth - 1, ts, ws), gen(depth - 1, ts, ws));
      case 6: return p_bang(gen(depth - 1, ts, ws));
      case 7: return p_forall_t(gen(depth - 1, ts + 1, ws));
      case 8: return p_exists_t(gen(depth - 1, ts + 1, ws));
      case 9: return p_forall_w(gen(depth - 1, ts, ws + 1));
      case 10: return p_exists_w(gen(depth - 1, ts, ws + 1));
      case 11: return p_down(gen(depth - 1, ts, ws + 1));
      case 12:
        return p_at(gen(depth - 1, ts, ws),
                    ws > 0 && std::uniform_int_distribution<int>(0, 1)(g)
                        ? w_compose(w_bvar(std::uniform_int_distribution<int>(0, ws - 1)(g)),
                                    w_lit(World::rate_list({Rational(2)})))
                        : w_lit(World::rate_list({Rational(1), Rational(3, 2)})));
      case 13: {
        int u = std::uniform_int_distribution<int>(0, 2)(g);
        return u == 0 ? p_one() : u == 1 ? p_top() : p_zero();
      }
      default: {
        bool positive = std::uniform_int_distribution<int>(0, 1)(g) == 1;
        std::vector<Term> args;
        int k = std::uniform_int_distribution<int>(0, 2)(g);
        for (int i = 0; i < k; ++i) {
          if (ts > 0 && std::uniform_int_distribution<int>(0, 1)(g))
            args.push_back(Term::var(std::uniform_int_distribution<int>(0, ts - 1)(g)));
          else if (std::uniform_int_distribution<int>(0, 3)(g) == 0)
            args.push_back(Term::rate(Rational(std::uniform_int_distribution<int>(1, 9)(g), 2)));
          else
            args.push_back(Term::fn("k", {}));
        }
        return p_atom(positive, positive ? "pp" : "nn", std::move(args));
      }
    }
  };
  for (int i = 0; i < 400; ++i) {
    Prop a = gen(4, 0, 0);
    std::string s = to_string(a);
    CAPTURE(s);
    Prop back = parse_prop(s, sig);
    CHECK(prop_equal(back, a, Domain::Rates));
  }
}

TEST_CASE("goal files: directives and free world variables") {
  GoalFile gf = parse_goal_file(
      "# a goal file\n"
      "domain rates\n"
      "atom p : pos\n"
      "gamma q(k) @ id\n"
      "delta p @ [2]\n"
      "goal (p at [2]) @ w\n");
  CHECK(gf.domain == Domain::Rates);
  CHECK(gf.sequent.gamma.size() == 1);
  CHECK(gf.sequent.delta.size() == 1);
  CHECK(gf.sequent.wscope == 1);  // w becomes a parameter
  CHECK(gf.world_params == std::vector<std::string>{"w"});
  CHECK(gf.sequent.goal.prop->tag == PropTag::At);
  CHECK_THROWS_AS(parse_goal_file("delta p @ id\n"), ParseError);  // no goal
  CHECK_THROWS_AS(parse_goal_file("goal p @\n"), ParseError);
  CHECK_THROWS_AS(parse_goal_file("frobnicate\n"), ParseError);
}

TEST_CASE("spi files: channels, definitions, run") {
  SpiFile sf = parse_spi_file(
      "# an oscillator\n"
      "channel x : 4\n"
      "def X() = tau(2).Y()\n"
      "def Y() = tau(3).X()\n"
      "run X() | x!(m).0 | x?(y).y!(y).0\n");
  CHECK(sf.rates.at("x") == Rational(4));
  CHECK(sf.env.defs.at("X").arity == 0);
  CHECK(sf.env.defs.at("Y").arity == 0);
  REQUIRE(sf.has_run);
  CHECK(sf.run->tag == spi::ProcTag::Par);
  // reserved names are rejected
  CHECK_THROWS_AS(parse_spi_file("def act() = 0\nrun act()\n"), ParseError);
  CHECK_THROWS_AS(parse_spi_file("channel dt : 1\nrun 0\n"), ParseError);
  // unguarded recursion is rejected
  CHECK_THROWS_AS(parse_spi_file("def X() = X() | tau(1).0\nrun X()\n"), spi::SpiError);
}

TEST_CASE("spi files: definition parameters bind left to right") {
  SpiFile sf = parse_spi_file(
      "def F(a, b) = a!(b).0\n"
      "run F(u, v) | u?(z).0\n"
      "channel u : 2\n"
      "channel v : 3\n");
  const auto& def = sf.env.defs.at("F");
  REQUIRE(def.arity == 2);
  // body: a!(b).0 with a = var 1, b = var 0
  REQUIRE(def.body->tag == spi::ProcTag::SumP);
  CHECK(def.body->sum->channel == Term::var(1));
  CHECK(def.body->sum->message == Term::var(0));
  // unfolding a call applies arguments in order
  spi::Process body = spi::unfold_call(sf.env, "F", {Term::fn("u"), Term::fn("v")});
  CHECK(body->sum->channel == Term::fn("u"));
  CHECK(body->sum->message == Term::fn("v"));
}

TEST_CASE("print then parse is the identity on random processes") {
  std::mt19937_64 g(777);
  std::function<spi::Process(int, int)> gen = [&](int depth, int ts) -> spi::Process {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 6);
    auto chan = [&]() {
      if (ts > 0 && std::uniform_int_distribution<int>(0, 1)(g))
        return Term::var(std::uniform_int_distribution<int>(0, ts - 1)(g));
      return Term::fn("x");
    };
    switch (pick(g)) {
      case 0: return spi::pr_nil();
      case 1: {
        std::uniform_int_distribution<int> nargs(0, 2);
        std::vector<Term> args;
        int k = nargs(g);
        for (int i = 0; i < k; ++i) args.push_back(chan());
        return spi::pr_call("D", std::move(args));
      }
      case 2: return spi::pr_par(gen(depth - 1, ts), gen(depth - 1, ts));
      case 3: return spi::pr_nu(Rational(std::uniform_int_distribution<int>(1, 5)(g)),
                                gen(depth - 1, ts + 1));
      case 4: return spi::pr_sum(spi::sm_tau(Rational(2), gen(depth - 1, ts)));
      case 5: return spi::pr_sum(spi::sm_out(chan(), chan(), gen(depth - 1, ts)));
      default: {
        spi::Sum a = spi::sm_in(chan(), gen(depth - 1, ts + 1));
        if (std::uniform_int_distribution<int>(0, 1)(g))
          return spi::pr_sum(spi::sm_plus(a, spi::sm_tau(Rational(1), gen(depth - 1, ts))));
        return spi::pr_sum(a);
      }
    }
  };
  for (int i = 0; i < 300; ++i) {
    spi::Process p = gen(4, 0);
    std::string s = spi::to_string(p);
    CAPTURE(s);
    spi::Process back = parse_process(s);
    CHECK(spi::process_equal(back, p));
  }
}
