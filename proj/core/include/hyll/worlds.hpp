#ifndef HYLL_WORLDS_HPP
#define HYLL_WORLDS_HPP

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyll/rational.hpp"

namespace hyll {

// The pluggable constraint domain: a monoid of worlds.  Three instances:
//   unit     - the one-point monoid (plain ILL),
//   temporal - nonnegative rationals under addition,
//   rates    - lists of positive rationals under concatenation.
enum class Domain { Unit, Temporal, Rates };

const char* domain_name(Domain d);
std::optional<Domain> domain_from_name(const std::string& name);

struct DomainMismatch : std::logic_error {
  explicit DomainMismatch(const std::string& what) : std::logic_error(what) {}
};

class World {
 public:
  World() : domain_(Domain::Unit) {}

  static World unit() { return World(); }
  static World time_point(Rational t);
  static World rate_list(std::vector<Rational> rs);
  static World identity(Domain d);

  Domain domain() const { return domain_; }
  bool is_identity() const;

  // Valid only in the matching domain.
  const Rational& time() const { return time_; }
  const std::vector<Rational>& rates() const { return rates_; }

  friend bool operator==(const World& a, const World& b);
  friend bool operator!=(const World& a, const World& b) { return !(a == b); }
  // Total order within a domain; used to key multisets deterministically.
  friend bool operator<(const World& a, const World& b);

 private:
  Domain domain_;
  Rational time_;                 // temporal payload, >= 0
  std::vector<Rational> rates_;   // rates payload, each > 0
};

// Monoid product: unit composition, temporal addition, rates concatenation.
World compose(const World& u, const World& v);

// Residual for the reachability order: the v with u . v = w, if any.
std::optional<World> reaches(const World& u, const World& w);

// --- World expressions -------------------------------------------------
//
// Worlds in judgements and propositions are expressions, not only values:
// compositions, named variables (unification/goal files), de Bruijn
// variables bound by dn/faw/exw, parameters introduced by eigenvariable
// rules, and rate references embedding a term-level rate literal.

class Term;  // terms.hpp; needed for rate references

enum class WorldTag { Identity, Lit, Var, BVar, Param, Compose, RateRef };

struct WorldNode;
using WorldExpr = std::shared_ptr<const WorldNode>;

struct WorldNode {
  WorldTag tag;
  World lit;                    // Lit
  std::string name;             // Var
  int index = 0;                // BVar (de Bruijn) / Param (scope level)
  WorldExpr left, right;        // Compose
  std::shared_ptr<const Term> rate_term;  // RateRef
};

WorldExpr w_identity();
WorldExpr w_lit(World w);
WorldExpr w_var(const std::string& name);
WorldExpr w_bvar(int index);
WorldExpr w_param(int level);
WorldExpr w_compose(WorldExpr a, WorldExpr b);
WorldExpr w_rate_ref(const Term& t);

// Singleton rate-list literal [r], the world form of one action's rate.
WorldExpr w_rate(const Rational& r);

using WorldEnv = std::map<std::string, World>;

// Homomorphic evaluation; requires every variable bound and no BVar/Param.
// Throws std::runtime_error on unbound variables.
World eval(const WorldExpr& e, const WorldEnv& env, Domain domain);

bool world_expr_closed(const WorldExpr& e);

// Solves eval(pattern, env') = target for an extension env' of env.
// Pattern variables must either be bound already or occur as the
// rightmost factor of the flattened composition; such matches are unique.
std::optional<WorldEnv> match_world(const WorldExpr& pattern, const World& target,
                                    const WorldEnv& env, Domain domain);

// --- Normal forms ------------------------------------------------------
//
// Judgement worlds compare by evaluated monoid value, not syntax.  The
// normal form flattens compositions, folds literal runs (commutatively in
// the temporal domain), and keeps opaque factors (params etc.) symbolic.

struct WorldFactor {
  // Exactly one of: concrete world piece, or an opaque symbol.
  bool concrete = false;
  World value;             // when concrete
  WorldTag tag = WorldTag::Param;  // BVar | Param | Var | RateRef
  int index = 0;
  std::string name;
  std::string rate_key;    // canonical print of the rate term, for RateRef

  friend bool operator==(const WorldFactor&, const WorldFactor&);
  friend bool operator<(const WorldFactor&, const WorldFactor&);
};

struct WorldNF {
  Domain domain = Domain::Unit;
  std::vector<WorldFactor> factors;  // temporal: sorted opaque factors after one literal

  friend bool operator==(const WorldNF&, const WorldNF&);
  friend bool operator<(const WorldNF&, const WorldNF&);
};

WorldNF world_nf(const WorldExpr& e, Domain domain);
bool world_equal(const WorldExpr& a, const WorldExpr& b, Domain domain);
std::string to_string(const WorldNF& nf);

}  // namespace hyll

#endif
