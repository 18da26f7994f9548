#ifndef HYLL_POLARIZED_HPP
#define HYLL_POLARIZED_HPP

#include "hyll/props.hpp"

namespace hyll {

// Polarized propositions for the focused calculus.  Shifts appear exactly
// at polarity changes; the hybrid connectives (at, dn) inherit the
// polarity of their immediate subformula.
//
//   P ::= p ts | P * P | 1 | P + P | 0 | !N | ex a. P | dn u. P | (P at w) | pos N
//   N ::= n ts | N & N | top | P -o N | fa a. N | dn u. N | (N at w) | neg P

enum class PosTag { Atom, Tensor, One, Oplus, Zero, Bang, ExistsT, ExistsW, Down, At, OfNeg };
enum class NegTag { Atom, With, Top, Limp, ForallT, ForallW, Down, At, OfPos };

struct PosNode;
struct NegNode;
using Pos = std::shared_ptr<const PosNode>;
using Neg = std::shared_ptr<const NegNode>;

struct PosNode {
  PosTag tag;
  std::string pred;
  std::vector<Term> args;
  Pos a, b;        // Tensor / Oplus; unary bodies in a
  Neg n;           // Bang / OfNeg
  WorldExpr world; // At
};

struct NegNode {
  NegTag tag;
  std::string pred;
  std::vector<Term> args;
  Neg a, b;        // With; Limp consequent in a; unary bodies in a
  Pos p;           // Limp antecedent / OfPos
  WorldExpr world; // At
};

Pos pos_atom(std::string pred, std::vector<Term> args = {});
Pos pos_tensor(Pos a, Pos b);
Pos pos_one();
Pos pos_oplus(Pos a, Pos b);
Pos pos_zero();
Pos pos_bang(Neg n);
Pos pos_exists_t(Pos body);
Pos pos_exists_w(Pos body);
Pos pos_down(Pos body);
Pos pos_at(Pos a, WorldExpr w);
Pos pos_of_neg(Neg n);

Neg neg_atom(std::string pred, std::vector<Term> args = {});
Neg neg_with(Neg a, Neg b);
Neg neg_top();
Neg neg_limp(Pos p, Neg n);
Neg neg_forall_t(Neg body);
Neg neg_forall_w(Neg body);
Neg neg_down(Neg body);
Neg neg_at(Neg a, WorldExpr w);
Neg neg_of_pos(Pos p);

enum class Bias { Positive, Negative };

// Insert minimal shifts so the result has the requested polarity.  Atoms
// keep their declared polarity; hybrid connectives are parasitic.
Pos polarize_pos(const Prop& p);
Neg polarize_neg(const Prop& p);

// Forget the shift structure.  erase(polarize(A, b)) == A for both biases.
Prop erase_pos(const Pos& p);
Prop erase_neg(const Neg& n);

bool pos_equal(const Pos& a, const Pos& b, Domain domain);
bool neg_equal(const Neg& a, const Neg& b, Domain domain);

Pos subst_term_in_pos(const Pos& p, const Term& image, int tdepth);
Neg subst_term_in_neg(const Neg& n, const Term& image, int tdepth);
Pos subst_world_in_pos(const Pos& p, const WorldExpr& image, int wdepth);
Neg subst_world_in_neg(const Neg& n, const WorldExpr& image, int wdepth);

Pos open_term_pos(const Pos& body, const Term& image);
Neg open_term_neg(const Neg& body, const Term& image);
Pos open_world_pos(const Pos& body, const WorldExpr& image);
Neg open_world_neg(const Neg& body, const WorldExpr& image);

Pos shift_params_pos(const Pos& p, int tfrom, int tby, int wfrom, int wby);
Neg shift_params_neg(const Neg& n, int tfrom, int tby, int wfrom, int wby);

// Shifted atom detectors for the focusing side conditions.
bool is_shifted_pos_atom(const Neg& n);  // neg p ts  (forbidden for lf)
bool is_shifted_neg_atom(const Pos& p);  // pos n ts  (forbidden for rf)

}  // namespace hyll

#endif
