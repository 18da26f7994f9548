#include "hyll/polarized.hpp"

namespace hyll {

static Pos mkp(PosNode n) { return std::make_shared<const PosNode>(std::move(n)); }
static Neg mkn(NegNode n) { return std::make_shared<const NegNode>(std::move(n)); }

Pos pos_atom(std::string pred, std::vector<Term> args) {
  PosNode n{PosTag::Atom};
  n.pred = std::move(pred);
  n.args = std::move(args);
  return mkp(std::move(n));
}
Pos pos_tensor(Pos a, Pos b) {
  PosNode n{PosTag::Tensor};
  n.a = std::move(a);
  n.b = std::move(b);
  return mkp(std::move(n));
}
Pos pos_one() { static Pos p = mkp(PosNode{PosTag::One}); return p; }
Pos pos_oplus(Pos a, Pos b) {
  PosNode n{PosTag::Oplus};
  n.a = std::move(a);
  n.b = std::move(b);
  return mkp(std::move(n));
}
Pos pos_zero() { static Pos p = mkp(PosNode{PosTag::Zero}); return p; }
Pos pos_bang(Neg m) {
  PosNode n{PosTag::Bang};
  n.n = std::move(m);
  return mkp(std::move(n));
}
Pos pos_exists_t(Pos body) {
  PosNode n{PosTag::ExistsT};
  n.a = std::move(body);
  return mkp(std::move(n));
}
Pos pos_exists_w(Pos body) {
  PosNode n{PosTag::ExistsW};
  n.a = std::move(body);
  return mkp(std::move(n));
}
Pos pos_down(Pos body) {
  PosNode n{PosTag::Down};
  n.a = std::move(body);
  return mkp(std::move(n));
}
Pos pos_at(Pos a, WorldExpr w) {
  PosNode n{PosTag::At};
  n.a = std::move(a);
  n.world = std::move(w);
  return mkp(std::move(n));
}
Pos pos_of_neg(Neg m) {
  PosNode n{PosTag::OfNeg};
  n.n = std::move(m);
  return mkp(std::move(n));
}

Neg neg_atom(std::string pred, std::vector<Term> args) {
  NegNode n{NegTag::Atom};
  n.pred = std::move(pred);
  n.args = std::move(args);
  return mkn(std::move(n));
}
Neg neg_with(Neg a, Neg b) {
  NegNode n{NegTag::With};
  n.a = std::move(a);
  n.b = std::move(b);
  return mkn(std::move(n));
}
Neg neg_top() { static Neg p = mkn(NegNode{NegTag::Top}); return p; }
Neg neg_limp(Pos p, Neg m) {
  NegNode n{NegTag::Limp};
  n.p = std::move(p);
  n.a = std::move(m);
  return mkn(std::move(n));
}
Neg neg_forall_t(Neg body) {
  NegNode n{NegTag::ForallT};
  n.a = std::move(body);
  return mkn(std::move(n));
}
Neg neg_forall_w(Neg body) {
  NegNode n{NegTag::ForallW};
  n.a = std::move(body);
  return mkn(std::move(n));
}
Neg neg_down(Neg body) {
  NegNode n{NegTag::Down};
  n.a = std::move(body);
  return mkn(std::move(n));
}
Neg neg_at(Neg a, WorldExpr w) {
  NegNode n{NegTag::At};
  n.a = std::move(a);
  n.world = std::move(w);
  return mkn(std::move(n));
}
Neg neg_of_pos(Pos p) {
  NegNode n{NegTag::OfPos};
  n.p = std::move(p);
  return mkn(std::move(n));
}

// --- polarization --------------------------------------------------------

// Natural polarity of an unpolarized proposition: positive for the
// multiplicative-existential fragment, negative for with/top/limp/forall;
// hybrid connectives take the polarity of their subformula.
static bool naturally_positive(const Prop& p) {
  switch (p->tag) {
    case PropTag::Atom: return p->positive;
    case PropTag::Tensor:
    case PropTag::One:
    case PropTag::Oplus:
    case PropTag::Zero:
    case PropTag::Bang:
    case PropTag::ExistsT:
    case PropTag::ExistsW: return true;
    case PropTag::Limp:
    case PropTag::With:
    case PropTag::Top:
    case PropTag::ForallT:
    case PropTag::ForallW: return false;
    case PropTag::Down:
    case PropTag::At: return naturally_positive(p->left);
  }
  return false;
}

// The hybrid connectives are transparent to the requested bias: at and dn
// wrap whichever polarity their subformula acquires, which reproduces the
// shift placement the process encoding and the modal definitions use
// (e.g. rho_r applied to an already-shifted atom).
Pos polarize_pos(const Prop& p) {
  switch (p->tag) {
    case PropTag::Down: return pos_down(polarize_pos(p->left));
    case PropTag::At: return pos_at(polarize_pos(p->left), p->world);
    default: break;
  }
  if (!naturally_positive(p)) return pos_of_neg(polarize_neg(p));
  switch (p->tag) {
    case PropTag::Atom: return pos_atom(p->pred, p->args);
    case PropTag::Tensor: return pos_tensor(polarize_pos(p->left), polarize_pos(p->right));
    case PropTag::One: return pos_one();
    case PropTag::Oplus: return pos_oplus(polarize_pos(p->left), polarize_pos(p->right));
    case PropTag::Zero: return pos_zero();
    case PropTag::Bang: return pos_bang(polarize_neg(p->left));
    case PropTag::ExistsT: return pos_exists_t(polarize_pos(p->left));
    case PropTag::ExistsW: return pos_exists_w(polarize_pos(p->left));
    default: break;
  }
  return pos_of_neg(polarize_neg(p));
}

Neg polarize_neg(const Prop& p) {
  switch (p->tag) {
    case PropTag::Down: return neg_down(polarize_neg(p->left));
    case PropTag::At: return neg_at(polarize_neg(p->left), p->world);
    default: break;
  }
  if (naturally_positive(p)) return neg_of_pos(polarize_pos(p));
  switch (p->tag) {
    case PropTag::Atom: return neg_atom(p->pred, p->args);
    case PropTag::With: return neg_with(polarize_neg(p->left), polarize_neg(p->right));
    case PropTag::Top: return neg_top();
    case PropTag::Limp: return neg_limp(polarize_pos(p->left), polarize_neg(p->right));
    case PropTag::ForallT: return neg_forall_t(polarize_neg(p->left));
    case PropTag::ForallW: return neg_forall_w(polarize_neg(p->left));
    default: break;
  }
  return neg_of_pos(polarize_pos(p));
}

Prop erase_pos(const Pos& p) {
  switch (p->tag) {
    case PosTag::Atom: return p_atom(true, p->pred, p->args);
    case PosTag::Tensor: return p_tensor(erase_pos(p->a), erase_pos(p->b));
    case PosTag::One: return p_one();
    case PosTag::Oplus: return p_oplus(erase_pos(p->a), erase_pos(p->b));
    case PosTag::Zero: return p_zero();
    case PosTag::Bang: return p_bang(erase_neg(p->n));
    case PosTag::ExistsT: return p_exists_t(erase_pos(p->a));
    case PosTag::ExistsW: return p_exists_w(erase_pos(p->a));
    case PosTag::Down: return p_down(erase_pos(p->a));
    case PosTag::At: return p_at(erase_pos(p->a), p->world);
    case PosTag::OfNeg: return erase_neg(p->n);
  }
  return p_one();
}

Prop erase_neg(const Neg& n) {
  switch (n->tag) {
    case NegTag::Atom: return p_atom(false, n->pred, n->args);
    case NegTag::With: return p_with(erase_neg(n->a), erase_neg(n->b));
    case NegTag::Top: return p_top();
    case NegTag::Limp: return p_limp(erase_pos(n->p), erase_neg(n->a));
    case NegTag::ForallT: return p_forall_t(erase_neg(n->a));
    case NegTag::ForallW: return p_forall_w(erase_neg(n->a));
    case NegTag::Down: return p_down(erase_neg(n->a));
    case NegTag::At: return p_at(erase_neg(n->a), n->world);
    case NegTag::OfPos: return erase_pos(n->p);
  }
  return p_top();
}

bool pos_equal(const Pos& a, const Pos& b, Domain domain) {
  if (a == b) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case PosTag::Atom: return a->pred == b->pred && a->args == b->args;
    case PosTag::One:
    case PosTag::Zero: return true;
    case PosTag::Tensor:
    case PosTag::Oplus: return pos_equal(a->a, b->a, domain) && pos_equal(a->b, b->b, domain);
    case PosTag::Bang:
    case PosTag::OfNeg: return neg_equal(a->n, b->n, domain);
    case PosTag::ExistsT:
    case PosTag::ExistsW:
    case PosTag::Down: return pos_equal(a->a, b->a, domain);
    case PosTag::At:
      return world_equal(a->world, b->world, domain) && pos_equal(a->a, b->a, domain);
  }
  return false;
}

bool neg_equal(const Neg& a, const Neg& b, Domain domain) {
  if (a == b) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case NegTag::Atom: return a->pred == b->pred && a->args == b->args;
    case NegTag::Top: return true;
    case NegTag::With: return neg_equal(a->a, b->a, domain) && neg_equal(a->b, b->b, domain);
    case NegTag::Limp: return pos_equal(a->p, b->p, domain) && neg_equal(a->a, b->a, domain);
    case NegTag::ForallT:
    case NegTag::ForallW:
    case NegTag::Down: return neg_equal(a->a, b->a, domain);
    case NegTag::At:
      return world_equal(a->world, b->world, domain) && neg_equal(a->a, b->a, domain);
    case NegTag::OfPos: return pos_equal(a->p, b->p, domain);
  }
  return false;
}

// Substitutions mirror the unpolarized ones; going through erase/polarize
// would lose shift placement, so they are spelled out.

Pos subst_term_in_pos(const Pos& p, const Term& image, int td) {
  switch (p->tag) {
    case PosTag::Atom: {
      std::vector<Term> args;
      for (const auto& t : p->args) args.push_back(subst_term_in_term(t, image, td));
      return pos_atom(p->pred, std::move(args));
    }
    case PosTag::One:
    case PosTag::Zero: return p;
    case PosTag::Tensor:
      return pos_tensor(subst_term_in_pos(p->a, image, td), subst_term_in_pos(p->b, image, td));
    case PosTag::Oplus:
      return pos_oplus(subst_term_in_pos(p->a, image, td), subst_term_in_pos(p->b, image, td));
    case PosTag::Bang: return pos_bang(subst_term_in_neg(p->n, image, td));
    case PosTag::ExistsT: return pos_exists_t(subst_term_in_pos(p->a, image, td + 1));
    case PosTag::ExistsW: return pos_exists_w(subst_term_in_pos(p->a, image, td));
    case PosTag::Down: return pos_down(subst_term_in_pos(p->a, image, td));
    case PosTag::At:
      return pos_at(subst_term_in_pos(p->a, image, td), subst_term_in_world(p->world, image, td));
    case PosTag::OfNeg: return pos_of_neg(subst_term_in_neg(p->n, image, td));
  }
  return p;
}

Neg subst_term_in_neg(const Neg& n, const Term& image, int td) {
  switch (n->tag) {
    case NegTag::Atom: {
      std::vector<Term> args;
      for (const auto& t : n->args) args.push_back(subst_term_in_term(t, image, td));
      return neg_atom(n->pred, std::move(args));
    }
    case NegTag::Top: return n;
    case NegTag::With:
      return neg_with(subst_term_in_neg(n->a, image, td), subst_term_in_neg(n->b, image, td));
    case NegTag::Limp:
      return neg_limp(subst_term_in_pos(n->p, image, td), subst_term_in_neg(n->a, image, td));
    case NegTag::ForallT: return neg_forall_t(subst_term_in_neg(n->a, image, td + 1));
    case NegTag::ForallW: return neg_forall_w(subst_term_in_neg(n->a, image, td));
    case NegTag::Down: return neg_down(subst_term_in_neg(n->a, image, td));
    case NegTag::At:
      return neg_at(subst_term_in_neg(n->a, image, td), subst_term_in_world(n->world, image, td));
    case NegTag::OfPos: return neg_of_pos(subst_term_in_pos(n->p, image, td));
  }
  return n;
}

Pos subst_world_in_pos(const Pos& p, const WorldExpr& image, int wd) {
  switch (p->tag) {
    case PosTag::Atom:
    case PosTag::One:
    case PosTag::Zero: return p;
    case PosTag::Tensor:
      return pos_tensor(subst_world_in_pos(p->a, image, wd), subst_world_in_pos(p->b, image, wd));
    case PosTag::Oplus:
      return pos_oplus(subst_world_in_pos(p->a, image, wd), subst_world_in_pos(p->b, image, wd));
    case PosTag::Bang: return pos_bang(subst_world_in_neg(p->n, image, wd));
    case PosTag::ExistsT: return pos_exists_t(subst_world_in_pos(p->a, image, wd));
    case PosTag::ExistsW: return pos_exists_w(subst_world_in_pos(p->a, image, wd + 1));
    case PosTag::Down: return pos_down(subst_world_in_pos(p->a, image, wd + 1));
    case PosTag::At:
      return pos_at(subst_world_in_pos(p->a, image, wd),
                    subst_world_in_world(p->world, image, wd));
    case PosTag::OfNeg: return pos_of_neg(subst_world_in_neg(p->n, image, wd));
  }
  return p;
}

Neg subst_world_in_neg(const Neg& n, const WorldExpr& image, int wd) {
  switch (n->tag) {
    case NegTag::Atom:
    case NegTag::Top: return n;
    case NegTag::With:
      return neg_with(subst_world_in_neg(n->a, image, wd), subst_world_in_neg(n->b, image, wd));
    case NegTag::Limp:
      return neg_limp(subst_world_in_pos(n->p, image, wd), subst_world_in_neg(n->a, image, wd));
    case NegTag::ForallT: return neg_forall_t(subst_world_in_neg(n->a, image, wd));
    case NegTag::ForallW: return neg_forall_w(subst_world_in_neg(n->a, image, wd + 1));
    case NegTag::Down: return neg_down(subst_world_in_neg(n->a, image, wd + 1));
    case NegTag::At:
      return neg_at(subst_world_in_neg(n->a, image, wd),
                    subst_world_in_world(n->world, image, wd));
    case NegTag::OfPos: return neg_of_pos(subst_world_in_pos(n->p, image, wd));
  }
  return n;
}

Pos open_term_pos(const Pos& body, const Term& image) { return subst_term_in_pos(body, image, 0); }
Neg open_term_neg(const Neg& body, const Term& image) { return subst_term_in_neg(body, image, 0); }
Pos open_world_pos(const Pos& body, const WorldExpr& image) {
  return subst_world_in_pos(body, image, 0);
}
Neg open_world_neg(const Neg& body, const WorldExpr& image) {
  return subst_world_in_neg(body, image, 0);
}

Pos shift_params_pos(const Pos& p, int tf, int tb, int wf, int wb) {
  switch (p->tag) {
    case PosTag::Atom: {
      std::vector<Term> args;
      for (const auto& t : p->args) args.push_back(shift_params_in_term(t, tf, tb));
      return pos_atom(p->pred, std::move(args));
    }
    case PosTag::One:
    case PosTag::Zero: return p;
    case PosTag::Tensor:
      return pos_tensor(shift_params_pos(p->a, tf, tb, wf, wb),
                        shift_params_pos(p->b, tf, tb, wf, wb));
    case PosTag::Oplus:
      return pos_oplus(shift_params_pos(p->a, tf, tb, wf, wb),
                       shift_params_pos(p->b, tf, tb, wf, wb));
    case PosTag::Bang: return pos_bang(shift_params_neg(p->n, tf, tb, wf, wb));
    case PosTag::ExistsT: return pos_exists_t(shift_params_pos(p->a, tf, tb, wf, wb));
    case PosTag::ExistsW: return pos_exists_w(shift_params_pos(p->a, tf, tb, wf, wb));
    case PosTag::Down: return pos_down(shift_params_pos(p->a, tf, tb, wf, wb));
    case PosTag::At:
      return pos_at(shift_params_pos(p->a, tf, tb, wf, wb),
                    shift_params_world(p->world, tf, tb, wf, wb));
    case PosTag::OfNeg: return pos_of_neg(shift_params_neg(p->n, tf, tb, wf, wb));
  }
  return p;
}

Neg shift_params_neg(const Neg& n, int tf, int tb, int wf, int wb) {
  switch (n->tag) {
    case NegTag::Atom: {
      std::vector<Term> args;
      for (const auto& t : n->args) args.push_back(shift_params_in_term(t, tf, tb));
      return neg_atom(n->pred, std::move(args));
    }
    case NegTag::Top: return n;
    case NegTag::With:
      return neg_with(shift_params_neg(n->a, tf, tb, wf, wb),
                      shift_params_neg(n->b, tf, tb, wf, wb));
    case NegTag::Limp:
      return neg_limp(shift_params_pos(n->p, tf, tb, wf, wb),
                      shift_params_neg(n->a, tf, tb, wf, wb));
    case NegTag::ForallT: return neg_forall_t(shift_params_neg(n->a, tf, tb, wf, wb));
    case NegTag::ForallW: return neg_forall_w(shift_params_neg(n->a, tf, tb, wf, wb));
    case NegTag::Down: return neg_down(shift_params_neg(n->a, tf, tb, wf, wb));
    case NegTag::At:
      return neg_at(shift_params_neg(n->a, tf, tb, wf, wb),
                    shift_params_world(n->world, tf, tb, wf, wb));
    case NegTag::OfPos: return neg_of_pos(shift_params_pos(n->p, tf, tb, wf, wb));
  }
  return n;
}

bool is_shifted_pos_atom(const Neg& n) {
  return n->tag == NegTag::OfPos && n->p->tag == PosTag::Atom;
}

bool is_shifted_neg_atom(const Pos& p) {
  return p->tag == PosTag::OfNeg && p->n->tag == NegTag::Atom;
}

}  // namespace hyll
