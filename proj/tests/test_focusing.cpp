#include <doctest.h>

#include <algorithm>

#include "hyll/focusing.hpp"
#include "hyll/print.hpp"

using namespace hyll;

namespace {

FocSequent neutral(Domain d, std::vector<NegJudgement> gamma, std::vector<NegJudgement> delta,
                   Pos goal, WorldExpr w) {
  FocSequent s;
  s.domain = d;
  s.form = FocForm::Active;
  s.gamma = std::move(gamma);
  s.delta = std::move(delta);
  s.goal = {true, nullptr, std::move(goal), std::move(w)};
  return s;
}

FocProof by(const FocSequent& s, FocApp app, std::vector<FocProof> kids = {}) {
  FocApplyResult r = apply_focused(s, app);
  REQUIRE_MESSAGE(r.ok, r.error);
  REQUIRE(r.premises.size() == kids.size());
  for (size_t i = 0; i < kids.size(); ++i)
    REQUIRE(foc_sequent_equal(r.premises[i], kids[i]->conclusion));
  return mk_foc_proof(std::move(app), s, std::move(kids));
}

}  // namespace

TEST_CASE("li on a negative atom under left focus checks") {
  WorldExpr w = w_identity();
  Neg n = neg_atom("n");
  FocSequent root = neutral(Domain::Unit, {}, {{n, w}}, pos_of_neg(n), w);

  FocApp lf{FTag::Lf};
  lf.principal = 0;
  FocApplyResult r1 = apply_focused(root, lf);
  REQUIRE(r1.ok);
  FocProof leaf = by(r1.premises[0], {FTag::Li});
  FocProof proof = by(root, lf, {leaf});
  CHECK(check_focused(proof).ok);

  Proof k = erase(proof);
  CHECK(k->rule.tag == RuleTag::Init);
  CHECK(check_proof(k).ok);
}

TEST_CASE("lf on a shifted positive atom is rejected") {
  WorldExpr w = w_identity();
  Pos p = pos_atom("p");
  FocSequent root = neutral(Domain::Unit, {}, {{neg_of_pos(p), w}}, p, w);
  FocApp lf{FTag::Lf};
  lf.principal = 0;
  FocApplyResult r = apply_focused(root, lf);
  CHECK_FALSE(r.ok);
  CHECK(r.error.find("shifted positive atom") != std::string::npos);
}

TEST_CASE("rf on a shifted negative atom is rejected") {
  WorldExpr w = w_identity();
  Neg n = neg_atom("n");
  FocSequent root = neutral(Domain::Unit, {}, {{n, w}}, pos_of_neg(n), w);
  FocApp rf{FTag::Rf};
  CHECK_FALSE(apply_focused(root, rf).ok);
}

TEST_CASE("*R with overlapping split witnesses is rejected") {
  WorldExpr w = w_identity();
  Pos p = pos_atom("p");
  FocSequent s;
  s.domain = Domain::Unit;
  s.form = FocForm::RightFocus;
  s.delta = {{neg_of_pos(p), w}, {neg_of_pos(p), w}};
  s.rfocus = {pos_tensor(p, p), w};
  FocApp app{FTag::TensorR};
  app.split = {0, 0};
  FocApplyResult r = apply_focused(s, app);
  CHECK_FALSE(r.ok);
  CHECK(r.error.find("duplicate") != std::string::npos);
}

TEST_CASE("search: neg atom identity in one decision") {
  WorldExpr w = w_rate(Rational(2));
  Neg n = neg_atom("p");
  FocSequent root = neutral(Domain::Rates, {}, {{n, w}}, pos_of_neg(n), w);
  SearchBudget b;
  b.max_decisions = 1;
  auto proof = search(root, b);
  REQUIRE(proof.has_value());
  CHECK(check_focused(*proof).ok);
  CHECK(check_proof(erase(*proof)).ok);
}

TEST_CASE("search: one -o interaction erases to a checkable kernel proof") {
  // delta: neg a, a -o neg b   goal: b   (a, b positive atoms)
  WorldExpr w = w_identity();
  Pos a = pos_atom("a"), b = pos_atom("b");
  FocSequent root = neutral(Domain::Unit, {},
                            {{neg_of_pos(a), w}, {neg_limp(a, neg_of_pos(b)), w}}, b, w);
  SearchBudget bd;
  bd.max_decisions = 3;
  auto proof = search(root, bd);
  REQUIRE(proof.has_value());
  CHECK(check_focused(*proof).ok);
  Proof k = erase(*proof);
  CheckReport r = check_proof(k);
  if (!r.ok) CAPTURE(to_string(r));
  CHECK(r.ok);
}

TEST_CASE("search: copy from gamma erases to kernel copy") {
  WorldExpr w = w_identity();
  Neg n = neg_atom("p");
  FocSequent root = neutral(Domain::Unit, {{n, w}}, {}, pos_of_neg(n), w);
  SearchBudget b;
  b.max_decisions = 2;
  auto proof = search(root, b);
  REQUIRE(proof.has_value());
  CHECK(check_focused(*proof).ok);
  Proof k = erase(*proof);
  CHECK(k->rule.tag == RuleTag::Copy);
  CHECK(check_proof(k).ok);
}

TEST_CASE("active phase: frontier agrees between the two canonical orders") {
  // Omega: (p * ex x. q(x)), r   goal: with of shifted atom and a universal
  WorldExpr w = w_identity();
  Pos p = pos_atom("p"), r = pos_atom("r");
  Pos exq = pos_exists_t(pos_atom("q", {Term::var(0)}));
  FocSequent s;
  s.domain = Domain::Unit;
  s.form = FocForm::Active;
  s.omega = {{pos_tensor(p, exq), w}, {r, w}};
  s.goal = {false,
            neg_with(neg_of_pos(pos_atom("g1")), neg_forall_t(neg_atom("g2", {Term::var(0)}))),
            nullptr, w};
  auto f1 = neutral_frontier(s, ActiveOrder::OmegaFirstFifo);
  auto f2 = neutral_frontier(s, ActiveOrder::GoalFirstLifo);
  REQUIRE(f1.size() == f2.size());
  std::vector<std::string> k1, k2;
  for (const auto& x : f1) k1.push_back(foc_sequent_key(x));
  for (const auto& x : f2) k2.push_back(foc_sequent_key(x));
  std::sort(k1.begin(), k1.end());
  std::sort(k2.begin(), k2.end());
  CHECK(k1 == k2);
}

TEST_CASE("search: top absorbs leftover resources") {
  // delta: neg a   goal: pos top  -- provable only via slack
  WorldExpr w = w_identity();
  Pos a = pos_atom("a");
  FocSequent root = neutral(Domain::Unit, {}, {{neg_of_pos(a), w}},
                            pos_of_neg(neg_top()), w);
  SearchBudget b;
  b.max_decisions = 2;
  auto proof = search(root, b);
  REQUIRE(proof.has_value());
  CHECK(check_focused(*proof).ok);
  CHECK(check_proof(erase(*proof)).ok);
}

TEST_CASE("search: 1 with extra resources fails, exact resources succeed") {
  WorldExpr w = w_identity();
  Pos a = pos_atom("a");
  FocSequent bad = neutral(Domain::Unit, {}, {{neg_of_pos(a), w}}, pos_one(), w);
  SearchBudget b;
  b.max_decisions = 3;
  CHECK_FALSE(search(bad, b).has_value());
  FocSequent good = neutral(Domain::Unit, {}, {}, pos_one(), w);
  auto proof = search(good, b);
  REQUIRE(proof.has_value());
  CHECK(check_focused(*proof).ok);
}
