#ifndef HYLL_PROPS_HPP
#define HYLL_PROPS_HPP

#include <memory>
#include <string>
#include <vector>

#include "hyll/terms.hpp"
#include "hyll/worlds.hpp"

namespace hyll {

// Unpolarized HyLL propositions.  Term and world binders are nameless and
// live in disjoint namespaces: a term binder does not shift world indices
// and vice versa.  Atom polarity is a declared property of the predicate
// symbol, recorded on the node at construction time.
enum class PropTag {
  Atom,
  Tensor, One, Limp, With, Top, Oplus, Zero, Bang,
  ForallT, ExistsT,   // term quantifiers
  ForallW, ExistsW,   // world quantifiers
  Down,               // dn u. A  (binds a world variable)
  At                  // (A at w)
};

struct PropNode;
using Prop = std::shared_ptr<const PropNode>;

struct PropNode {
  PropTag tag;
  // Atom
  bool positive = false;
  std::string pred;
  std::vector<Term> args;
  // structure
  Prop left, right;
  WorldExpr world;  // At
};

Prop p_atom(bool positive, std::string pred, std::vector<Term> args = {});
Prop p_tensor(Prop a, Prop b);
Prop p_one();
Prop p_limp(Prop a, Prop b);
Prop p_with(Prop a, Prop b);
Prop p_top();
Prop p_oplus(Prop a, Prop b);
Prop p_zero();
Prop p_bang(Prop a);
Prop p_forall_t(Prop body);
Prop p_exists_t(Prop body);
Prop p_forall_w(Prop body);
Prop p_exists_w(Prop body);
Prop p_down(Prop body);
Prop p_at(Prop a, WorldExpr w);

// Derived connectives (Defn. of the modal connectives plus the embeddings
// used by the process encoding):
//   box A      = dn u. faw w. (A at u.w)
//   dia A      = dn u. exw w. (A at u.w)
//   rho_v A    = dn u. (A at u.v)
//   bangbang A = faw u. (A at u)
//   iff_limp   = (A -o B) & (B -o A)        (the o-o used by definitions)
//   imp A B    = !A -o B
Prop d_box(Prop a);
Prop d_dia(Prop a);
Prop d_rho(WorldExpr v, Prop a);
Prop d_bangbang(Prop a);
Prop d_iff_limp(Prop a, Prop b);
Prop d_imp(Prop a, Prop b);

// --- substitution ------------------------------------------------------

// Instantiate the outermost term binder of a quantifier body.
Prop open_term(const Prop& body, const Term& image);
// Instantiate the outermost world binder (dn / faw / exw body).
Prop open_world(const Prop& body, const WorldExpr& image);

Prop subst_term_in_prop(const Prop& p, const Term& image, int tdepth);
Prop subst_world_in_prop(const Prop& p, const WorldExpr& image, int wdepth);
Prop subst_param_t(const Prop& p, int level, const Term& image);
Prop subst_param_w(const Prop& p, int level, const WorldExpr& image);
Prop shift_params_prop(const Prop& p, int tfrom, int tby, int wfrom, int wby);

WorldExpr shift_world_expr(const WorldExpr& e, int by, int cutoff);
WorldExpr subst_world_in_world(const WorldExpr& e, const WorldExpr& image, int wdepth);
WorldExpr subst_term_in_world(const WorldExpr& e, const Term& image, int tdepth);
WorldExpr subst_param_w_world(const WorldExpr& e, int level, const WorldExpr& image);
WorldExpr subst_param_t_world(const WorldExpr& e, int level, const Term& image);
WorldExpr shift_params_world(const WorldExpr& e, int tfrom, int tby, int wfrom, int wby);

// --- predicates and measures --------------------------------------------

// Structural equality with judgement-world semantics: embedded world
// expressions compare by normal form in the given domain.
bool prop_equal(const Prop& a, const Prop& b, Domain domain);

// Connective count, ignoring worlds; the induction measure for identity
// expansion and cut elimination.
int prop_size(const Prop& p);

// Well-formed at binder depths (tdepth term binders, wdepth world binders
// in scope); params are always permitted.
bool prop_wf(const Prop& p, int tdepth, int wdepth);

// No hybrid connectives and no world quantifiers anywhere.
bool prop_pure(const Prop& p);

void collect_prop_subterms(const Prop& p, std::vector<Term>& out);
void collect_prop_worlds(const Prop& p, std::vector<WorldExpr>& out);
void max_prop_params(const Prop& p, int& tmax, int& wmax);

}  // namespace hyll

#endif
