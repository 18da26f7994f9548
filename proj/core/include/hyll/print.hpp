#ifndef HYLL_PRINT_HPP
#define HYLL_PRINT_HPP

#include <string>

#include "hyll/polarized.hpp"
#include "hyll/sequent.hpp"

namespace hyll {

// Pretty-printers in the concrete goal grammar.  Binders are nameless so
// names are regenerated: term binders x0, x1, ..., world binders u0, u1,
// parameters $t0 / $w0.  Printing is deterministic; parse(print(A)) == A.
std::string to_string(const WorldExpr& e);
std::string to_string(const Prop& p);
std::string to_string(const Judgement& j);
std::string to_string(const Sequent& s);
std::string to_string(const Pos& p);
std::string to_string(const Neg& n);

// Canonical form with worlds normalized per domain; used for multiset keys.
std::string canonical_prop(const Prop& p, Domain domain);

}  // namespace hyll

#endif
