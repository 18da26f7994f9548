#include <doctest.h>

#include <functional>
#include <map>
#include <random>

#include "hyll/polarized.hpp"
#include "hyll/print.hpp"

using namespace hyll;

namespace {

Term c(const std::string& s) { return Term::fn(s); }

// Reference implementation of substitution over a named AST with explicit
// freshening; used as the oracle for the de Bruijn code.
struct NTerm {
  std::string var;                // nonempty for variables
  std::string fn;                 // nonempty for applications
  std::vector<NTerm> args;
  friend bool operator==(const NTerm&, const NTerm&) = default;
};

struct NProp {
  // supported fragment for the oracle: atoms / tensor / exists-term
  std::string kind;  // "atom" | "tensor" | "ex"
  std::string pred;
  std::vector<NTerm> args;
  std::string binder;
  std::vector<NProp> kids;
  friend bool operator==(const NProp&, const NProp&) = default;
};

int fresh_counter = 0;

NTerm nsubst(const NTerm& t, const std::string& x, const NTerm& image) {
  if (!t.var.empty()) return t.var == x ? image : t;
  NTerm out = t;
  for (auto& a : out.args) a = nsubst(a, x, image);
  return out;
}

bool occurs(const NTerm& t, const std::string& x) {
  if (!t.var.empty()) return t.var == x;
  for (const auto& a : t.args)
    if (occurs(a, x)) return true;
  return false;
}

NProp nsubst_prop(const NProp& p, const std::string& x, const NTerm& image) {
  if (p.kind == "atom") {
    NProp out = p;
    for (auto& a : out.args) a = nsubst(a, x, image);
    return out;
  }
  if (p.kind == "tensor") {
    NProp out = p;
    for (auto& k : out.kids) k = nsubst_prop(k, x, image);
    return out;
  }
  // ex binder: alpha-rename when the binder would capture or shadow
  NProp out = p;
  if (p.binder == x) return p;  // shadowed: no free occurrences below
  if (occurs(image, p.binder)) {
    std::string fresh = p.binder + "'" + std::to_string(fresh_counter++);
    NTerm fv;
    fv.var = fresh;
    out.kids[0] = nsubst_prop(out.kids[0], p.binder, fv);
    out.binder = fresh;
  }
  out.kids[0] = nsubst_prop(out.kids[0], x, image);
  return out;
}

NTerm to_named_term(const Term& t, const std::vector<std::string>& env) {
  NTerm out;
  switch (t->tag) {
    case TermTag::Var: out.var = env[env.size() - 1 - t->index]; break;
    case TermTag::Param: out.var = "$" + std::to_string(t->index); break;
    case TermTag::RateLit: out.fn = to_string(t->rate); break;
    case TermTag::Fn:
      out.fn = t->symbol.empty() ? "<>" : t->symbol;
      for (const auto& a : t->args) out.args.push_back(to_named_term(a, env));
      break;
  }
  return out;
}

NProp to_named(const Prop& p, std::vector<std::string>& env, int& next) {
  NProp out;
  switch (p->tag) {
    case PropTag::Atom:
      out.kind = "atom";
      out.pred = p->pred;
      for (const auto& a : p->args) out.args.push_back(to_named_term(a, env));
      return out;
    case PropTag::Tensor:
      out.kind = "tensor";
      out.kids.push_back(to_named(p->left, env, next));
      out.kids.push_back(to_named(p->right, env, next));
      return out;
    case PropTag::ExistsT: {
      out.kind = "ex";
      out.binder = "b" + std::to_string(next++);
      env.push_back(out.binder);
      out.kids.push_back(to_named(p->left, env, next));
      env.pop_back();
      return out;
    }
    default: FAIL("fragment"); return out;
  }
}

NProp alpha_norm(const NProp& p, std::map<std::string, std::string>& ren, int& next) {
  NProp out = p;
  if (p.kind == "atom") {
    std::function<NTerm(const NTerm&)> go = [&](const NTerm& t) {
      NTerm o = t;
      if (!o.var.empty() && ren.count(o.var)) o.var = ren[o.var];
      for (auto& a : o.args) a = go(a);
      return o;
    };
    for (auto& a : out.args) a = go(a);
    return out;
  }
  if (p.kind == "tensor") {
    for (auto& k : out.kids) k = alpha_norm(k, ren, next);
    return out;
  }
  std::string nn = "n" + std::to_string(next++);
  auto saved = ren;
  ren[p.binder] = nn;
  out.binder = nn;
  out.kids[0] = alpha_norm(p.kids[0], ren, next);
  ren = saved;
  return out;
}

NProp normalized(const NProp& p) {
  std::map<std::string, std::string> ren;
  int next = 0;
  return alpha_norm(p, ren, next);
}

Prop random_fragment_prop(std::mt19937_64& g, int depth, int scope) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : 2);
  switch (pick(g)) {
    case 1: return p_tensor(random_fragment_prop(g, depth - 1, scope),
                            random_fragment_prop(g, depth - 1, scope));
    case 2: return p_exists_t(random_fragment_prop(g, depth - 1, scope + 1));
    default: {
      std::vector<Term> args;
      std::uniform_int_distribution<int> nargs(0, 2);
      int k = nargs(g);
      for (int i = 0; i < k; ++i) {
        std::uniform_int_distribution<int> kind(0, scope > 0 ? 2 : 1);
        int c2 = kind(g);
        if (c2 == 2) {
          std::uniform_int_distribution<int> ix(0, scope - 1);
          args.push_back(Term::var(ix(g)));
        } else if (c2 == 1) {
          args.push_back(Term::fn("f", {Term::fn("c")}));
        } else {
          args.push_back(Term::fn("d"));
        }
      }
      return p_atom(false, "p", std::move(args));
    }
  }
}

}  // namespace

TEST_CASE("subst_term: basics") {
  Prop body = p_atom(false, "p", {Term::var(0)});
  CHECK(prop_equal(open_term(body, c("c")), p_atom(false, "p", {c("c")}), Domain::Unit));
  Prop no = p_atom(false, "q", {c("d")});
  CHECK(prop_equal(open_term(no, c("c")), no, Domain::Unit));
}

TEST_CASE("subst_term under nested ex: named-substitution oracle") {
  std::mt19937_64 g(2024);
  for (int iter = 0; iter < 200; ++iter) {
    Prop body = random_fragment_prop(g, 3, 1);  // one binder open at depth 0
    Term image = Term::fn("f", {Term::fn("c"), Term::fn("d")});

    Prop db = open_term(body, image);
    std::vector<std::string> env0;
    int n0 = 0;
    NProp got = to_named(db, env0, n0);

    std::vector<std::string> env{"X"};
    int n1 = 1000;
    NProp named = to_named(body, env, n1);
    NTerm nimage;
    nimage.fn = "f";
    nimage.args = {NTerm{.fn = "c"}, NTerm{.fn = "d"}};
    NProp want = nsubst_prop(named, "X", nimage);

    CHECK(normalized(got) == normalized(want));
  }
}

TEST_CASE("subst_world: dn instantiation for dnR") {
  Prop body = p_at(p_atom(false, "p"), w_bvar(0));
  WorldExpr v = w_lit(World::time_point(Rational(3)));
  Prop inst = open_world(body, v);
  CHECK(prop_equal(inst, p_at(p_atom(false, "p"), v), Domain::Temporal));
  Prop no = p_atom(false, "p");
  CHECK(prop_equal(open_world(no, v), no, Domain::Temporal));
}

TEST_CASE("substitution commutes for distinct binders") {
  std::mt19937_64 g(7);
  for (int iter = 0; iter < 100; ++iter) {
    Prop body = random_fragment_prop(g, 3, 2);  // two open binders
    Term t1 = Term::fn("c1"), t2 = Term::fn("c2");
    Prop a = subst_term_in_prop(subst_term_in_prop(body, t1, 1), t2, 0);
    Prop b = subst_term_in_prop(subst_term_in_prop(body, t2, 0), t1, 0);
    CHECK(prop_equal(a, b, Domain::Unit));
  }
}

TEST_CASE("derived connectives expand per definition") {
  Prop a = p_atom(false, "a");
  WorldExpr v = w_rate(Rational(2));
  Prop rho = d_rho(v, a);
  REQUIRE(rho->tag == PropTag::Down);
  REQUIRE(rho->left->tag == PropTag::At);
  CHECK(to_string(rho) == "dn u0. (a at u0 . [2])");
  CHECK(to_string(d_box(a)) == "dn u0. faw u1. (a at u0 . u1)");
  CHECK(to_string(d_dia(a)) == "dn u0. exw u1. (a at u0 . u1)");
  CHECK(to_string(d_bangbang(a)) == "faw u0. (a at u0)");
  Prop b = p_atom(false, "b");
  CHECK(prop_equal(d_imp(a, b), p_limp(p_bang(a), b), Domain::Unit));
  CHECK(prop_equal(d_iff_limp(a, b), p_with(p_limp(a, b), p_limp(b, a)), Domain::Unit));
}

TEST_CASE("polarize: shift placement") {
  Prop p = p_atom(true, "p");
  Prop q = p_atom(true, "q");
  Neg n = polarize_neg(p);
  CHECK(n->tag == NegTag::OfPos);
  CHECK(n->p->tag == PosTag::Atom);
  Neg nt = polarize_neg(p_tensor(p, q));
  CHECK(nt->tag == NegTag::OfPos);
  CHECK(nt->p->tag == PosTag::Tensor);
  // parasitic: at over a negative body stays negative without shifts;
  // under the opposite bias the hybrid stays outside and the shift moves in
  Prop atn = p_at(p_atom(false, "n"), w_identity());
  CHECK(polarize_neg(atn)->tag == NegTag::At);
  CHECK(polarize_pos(atn)->tag == PosTag::At);
  CHECK(polarize_pos(atn)->a->tag == PosTag::OfNeg);
}

TEST_CASE("erase . polarize = id (random props)") {
  std::mt19937_64 g(99);
  std::function<Prop(int, int, int)> random_prop = [&](int depth, int ts, int ws) -> Prop {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 13);
    switch (pick(g)) {
      case 2: return p_tensor(random_prop(depth - 1, ts, ws), random_prop(depth - 1, ts, ws));
      case 3: return p_limp(random_prop(depth - 1, ts, ws), random_prop(depth - 1, ts, ws));
      case 4: return p_with(random_prop(depth - 1, ts, ws), random_prop(depth - 1, ts, ws));
      case 5: return p_oplus(random_prop(depth - 1, ts, ws), random_prop(depth - 1, ts, ws));
      case 6: return p_bang(random_prop(depth - 1, ts, ws));
      case 7: return p_forall_t(random_prop(depth - 1, ts + 1, ws));
      case 8: return p_exists_t(random_prop(depth - 1, ts + 1, ws));
      case 9: return p_forall_w(random_prop(depth - 1, ts, ws + 1));
      case 10: return p_exists_w(random_prop(depth - 1, ts, ws + 1));
      case 11: return p_down(random_prop(depth - 1, ts, ws + 1));
      case 12:
        return p_at(random_prop(depth - 1, ts, ws),
                    ws > 0 ? w_bvar(0) : w_lit(World::time_point(Rational(1))));
      case 13: return std::uniform_int_distribution<int>(0, 2)(g) == 0 ? p_one()
               : std::uniform_int_distribution<int>(0, 1)(g) == 0     ? p_top()
                                                                      : p_zero();
      default: {
        bool positive = std::uniform_int_distribution<int>(0, 1)(g) == 1;
        std::vector<Term> args;
        if (ts > 0) args.push_back(Term::var(0));
        return p_atom(positive, positive ? "p" : "n", std::move(args));
      }
    }
  };
  for (int i = 0; i < 300; ++i) {
    Prop a = random_prop(4, 0, 0);
    CHECK(prop_equal(erase_neg(polarize_neg(a)), a, Domain::Temporal));
    CHECK(prop_equal(erase_pos(polarize_pos(a)), a, Domain::Temporal));
    CHECK(prop_wf(a, 0, 0));
  }
}

TEST_CASE("erase round trips for atom, tensor, limp") {
  for (Prop a : {p_atom(true, "p"), p_tensor(p_atom(true, "p"), p_atom(false, "n")),
                 p_limp(p_atom(true, "p"), p_atom(false, "n"))}) {
    CHECK(prop_equal(erase_neg(polarize_neg(a)), a, Domain::Unit));
    CHECK(prop_equal(erase_pos(polarize_pos(a)), a, Domain::Unit));
  }
}
