#ifndef HYLL_SEQUENT_HPP
#define HYLL_SEQUENT_HPP

#include <string>
#include <vector>

#include "hyll/props.hpp"

namespace hyll {

// A judgement "A is true at world w".  Worlds are expressions; judgement
// equality evaluates them (monoid value, not syntax).
struct Judgement {
  Prop prop;
  WorldExpr world;
};

bool judgement_equal(const Judgement& a, const Judgement& b, Domain domain);

// Sequents Gamma ; Delta ==> C @ w.  Gamma is a set (kept as a vector,
// compared up to duplicates), Delta a multiset.  tscope/wscope count the
// eigenvariables in scope: a fresh parameter introduced by faR/exL is
// always Param(scope), which makes the freshness condition structural.
struct Sequent {
  Domain domain = Domain::Unit;
  std::vector<Judgement> gamma;
  std::vector<Judgement> delta;
  Judgement goal;
  int tscope = 0;
  int wscope = 0;
};

bool sequent_equal(const Sequent& a, const Sequent& b);

// Deterministic text key (worlds in normal form); orders multisets.
std::string judgement_key(const Judgement& j, Domain domain);
std::string sequent_key(const Sequent& s);

bool gamma_member(const std::vector<Judgement>& gamma, const Judgement& j, Domain domain);

Judgement shift_params_judgement(const Judgement& j, int tfrom, int tby, int wfrom, int wby);

// Renumber parameters by first occurrence; makes sequents produced under
// different invertible-rule orders comparable.
Sequent canonicalize_params(const Sequent& s);

}  // namespace hyll

#endif
