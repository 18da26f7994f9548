#include <doctest.h>

#include "hyll/print.hpp"
#include "hyll/spi.hpp"

using namespace hyll;
using namespace hyll::spi;

namespace {

Term ch(const std::string& s) { return Term::fn(s); }

Event ev_tau(const Rational& r) {
  Event e;
  e.kind = Event::Kind::Internal;
  e.rate = r;
  return e;
}

Event ev_syn(const std::string& x, const Rational& r, const std::string& m) {
  Event e;
  e.kind = Event::Kind::Synchronize;
  e.channel = ch(x);
  e.message = ch(m);
  e.rate = r;
  return e;
}

// checks the derivation, inverts it, and verifies the world accounting
void round_trip(const Env& e, const RateTable& rates, const Trace& t) {
  FocProof d = trace_to_derivation(e, rates, t);
  CheckReport r = check_focused(d);
  if (!r.ok) CAPTURE(to_string(r));
  REQUIRE(r.ok);

  Trace back = derivation_to_trace(e, d);
  REQUIRE(back.events.size() == t.events.size());
  for (size_t i = 0; i < t.events.size(); ++i) CHECK(event_equal(back.events[i], t.events[i]));

  // final lock world = rid . r1 ... rn
  auto spine = canonical_spine(e, d);
  REQUIRE(!spine.empty());
  World expect = trace_world(t, t.events.size());
  WorldNF last = spine.back().lock_world;
  CHECK(last == world_nf(w_lit(expect), Domain::Rates));

  // full adequacy: each canonical frontier's lock world carries exactly
  // the rates of the events extracted so far
  for (const auto& pt : spine) {
    CHECK(pt.lock_world == world_nf(w_lit(trace_world(t, pt.events_before)), Domain::Rates));
    CHECK(pt.events_before <= t.events.size());
  }
  CHECK(spine.back().events_before == t.events.size());
}

}  // namespace

TEST_CASE("adequacy: empty trace ends via right focus") {
  Env e;
  RateTable rates{{"x", Rational(4)}};
  Trace t;
  t.initial = pr_par(pr_sum(sm_out(ch("x"), ch("a"), pr_nil())),
                     pr_sum(sm_in(ch("x"), pr_nil())));
  FocProof d = trace_to_derivation(e, rates, t);
  REQUIRE(check_focused(d).ok);
  CHECK(d->rule.tag == FTag::Rf);
  round_trip(e, rates, t);
}

TEST_CASE("adequacy: the worked single-synchronization example") {
  Env e;
  RateTable rates{{"x", Rational(4)}};
  Trace t;
  t.initial = pr_par(pr_sum(sm_out(ch("x"), ch("a"), pr_nil())),
                     pr_sum(sm_in(ch("x"), pr_nil())));
  t.events = {ev_syn("x", Rational(4), "a")};
  round_trip(e, rates, t);

  // the phase structure: focus on inter, branch 2 (syn), the two unlocks,
  // then the cleanup reaching world [4]
  FocProof d = trace_to_derivation(e, rates, t);
  auto log = phase_log(d);
  REQUIRE(log.size() >= 5);
  CHECK(log[0].find("focus gamma") != std::string::npos);  // inter
  size_t sel = 0;
  while (sel < log.size() && log[sel].find("select branch 2") == std::string::npos) ++sel;
  CHECK(sel < log.size());
}

TEST_CASE("adequacy: two steps, tau then synchronization") {
  Env e;
  RateTable rates{{"x", Rational(4)}};
  // tau(2).(x!(a).0) | x?(y).0
  Trace t;
  t.initial = pr_par(pr_sum(sm_tau(Rational(2), pr_sum(sm_out(ch("x"), ch("a"), pr_nil())))),
                     pr_sum(sm_in(ch("x"), pr_nil())));
  t.events = {ev_tau(Rational(2)), ev_syn("x", Rational(4), "a")};
  round_trip(e, rates, t);
}

TEST_CASE("adequacy: guarded recursion unfolds without advancing the world") {
  Env e;
  e.defs["X"] = {0, pr_sum(sm_tau(Rational(2), pr_call("Y")))};
  e.defs["Y"] = {0, pr_sum(sm_tau(Rational(3), pr_call("X")))};
  validate_env(e);
  RateTable rates;
  Trace t;
  t.initial = pr_call("X");
  t.events = {ev_tau(Rational(2)), ev_tau(Rational(3)), ev_tau(Rational(2)),
              ev_tau(Rational(3))};
  round_trip(e, rates, t);
}

TEST_CASE("adequacy: restriction opened at the root") {
  Env e;
  RateTable rates{{"x", Rational(1)}};
  // new(5) c in (c!(c).0 | c?(y).0 | x?(z).0): the fresh channel reacts
  Process body = pr_par(pr_sum(sm_out(Term::var(0), Term::var(0), pr_nil())),
                        pr_par(pr_sum(sm_in(Term::var(0), pr_nil())),
                               pr_sum(sm_in(ch("x"), pr_nil()))));
  Trace t;
  t.initial = pr_nu(Rational(5), body);
  t.events = {ev_syn("#c0", Rational(5), "#c0")};
  round_trip(e, rates, t);
}

TEST_CASE("adequacy: restriction created by a continuation") {
  Env e;
  RateTable rates{{"x", Rational(4)}};
  // tau(2).(new(7) c in (c!(c).0 | c?(y).0))
  Process fresh = pr_nu(Rational(7), pr_par(pr_sum(sm_out(Term::var(0), Term::var(0), pr_nil())),
                                            pr_sum(sm_in(Term::var(0), pr_nil()))));
  Trace t;
  t.initial = pr_sum(sm_tau(Rational(2), fresh));
  t.events = {ev_tau(Rational(2)), ev_syn("#c0", Rational(7), "#c0")};
  round_trip(e, rates, t);
}

TEST_CASE("adequacy: choice selects one summand and discards the rest") {
  Env e;
  RateTable rates{{"x", Rational(4)}};
  // (x!(a).0 + tau(9).0) | x?(y).0 : the synchronization discards tau(9)
  Trace t;
  t.initial = pr_par(pr_sum(sm_plus(sm_out(ch("x"), ch("a"), pr_nil()),
                                    sm_tau(Rational(9), pr_nil()))),
                     pr_sum(sm_in(ch("x"), pr_nil())));
  t.events = {ev_syn("x", Rational(4), "a")};
  round_trip(e, rates, t);

  // and the other branch of the race
  Trace t2;
  t2.initial = t.initial;
  t2.events = {ev_tau(Rational(9))};
  round_trip(e, rates, t2);
}

TEST_CASE("adequacy: received channel used by the continuation") {
  Env e;
  RateTable rates{{"x", Rational(4)}, {"a", Rational(2)}};
  // x!(a).a?(w).0 | x?(y).y!(y).0
  Process p1 = pr_sum(sm_out(ch("x"), ch("a"), pr_sum(sm_in(ch("a"), pr_nil()))));
  Process p2 = pr_sum(sm_in(ch("x"), pr_sum(sm_out(Term::var(0), Term::var(0), pr_nil()))));
  Trace t;
  t.initial = pr_par(p1, p2);
  t.events = {ev_syn("x", Rational(4), "a"), ev_syn("a", Rational(2), "a")};
  round_trip(e, rates, t);
}

TEST_CASE("adequacy: non-replaying trace is rejected") {
  Env e;
  RateTable rates{{"x", Rational(4)}};
  Trace t;
  t.initial = pr_sum(sm_tau(Rational(2), pr_nil()));
  t.events = {ev_tau(Rational(5))};
  CHECK_THROWS_AS(trace_to_derivation(e, rates, t), SpiError);
}

TEST_CASE("adequacy: tampered derivation is rejected by the checker") {
  Env e;
  RateTable rates{{"x", Rational(4)}};
  Trace t;
  t.initial = pr_par(pr_sum(sm_out(ch("x"), ch("a"), pr_nil())),
                     pr_sum(sm_in(ch("x"), pr_nil())));
  t.events = {ev_syn("x", Rational(4), "a")};
  FocProof good = trace_to_derivation(e, rates, t);
  REQUIRE(check_focused(good).ok);
  // rebuild the root with a wrong goal world: the proof no longer checks
  FocSequent bad_root = good->conclusion;
  bad_root.goal.world = w_rate(Rational(5));
  FocProof bad = mk_foc_proof(good->rule, bad_root, good->premises);
  CHECK_FALSE(check_focused(bad).ok);
}
