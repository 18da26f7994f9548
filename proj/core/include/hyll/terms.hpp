#ifndef HYLL_TERMS_HPP
#define HYLL_TERMS_HPP

#include <memory>
#include <string>
#include <vector>

#include "hyll/rational.hpp"

namespace hyll {

// First-order untyped terms.  Binders are nameless: Var is a de Bruijn
// index into the enclosing term binders, Param is an eigenvariable level
// counted from the root of a derivation.  Channels are nullary functions.
// RateLit embeds a rate constant as a term literal so that atoms such as
// tau(3/2) are ordinary first-order atoms.
enum class TermTag { Var, Param, Fn, RateLit };

struct TermNode;

class Term {
 public:
  Term() = default;
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}

  static Term var(int index);
  static Term param(int level);
  static Term fn(std::string symbol, std::vector<Term> args = {});
  static Term rate(Rational r);

  const TermNode& operator*() const { return *node_; }
  const TermNode* operator->() const { return node_.get(); }
  bool valid() const { return node_ != nullptr; }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b);

 private:
  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  TermTag tag;
  int index = 0;            // Var / Param
  std::string symbol;       // Fn
  std::vector<Term> args;   // Fn
  Rational rate;            // RateLit
};

// Substitutes `image` for de Bruijn index `depth` and shifts deeper
// indices down by one (instantiating one removed binder).
Term subst_term_in_term(const Term& t, const Term& image, int depth);

// Shifts indices >= cutoff up by `by` (relocation under extra binders).
Term shift_term(const Term& t, int by, int cutoff);

// Replaces Param(level) by `image`; levels above shift down by one.
Term subst_param_in_term(const Term& t, int level, const Term& image);

// Renumbers Param(l) -> Param(l + by) for l >= from.
Term shift_params_in_term(const Term& t, int from, int by);

bool term_closed(const Term& t, int depth);
int max_term_param(const Term& t);
void collect_subterms(const Term& t, std::vector<Term>& out);

std::string to_string(const Term& t);

}  // namespace hyll

#endif
