#ifndef HYLL_PARSE_HPP
#define HYLL_PARSE_HPP

#include <map>
#include <stdexcept>

#include "hyll/sequent.hpp"
#include "hyll/spi.hpp"

namespace hyll {

struct ParseError : std::runtime_error {
  int line = 0, col = 0;
  ParseError(const std::string& what, int line_, int col_)
      : std::runtime_error(what + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
        line(line_),
        col(col_) {}
};

// Atom polarities are a declared property of predicate symbols; unknown
// predicates default to negative.
struct Signature {
  std::map<std::string, bool> positive;
  bool is_positive(const std::string& pred) const {
    auto it = positive.find(pred);
    return it != positive.end() && it->second;
  }
};

// World expressions in the concrete syntax: `id`, rationals, rate lists
// `[2, 3/4]`, composition `u . v`, variables, `rate(t)`, parameters $w0.
WorldExpr parse_world(const std::string& text);

// Propositions in the goal grammar.  Free world identifiers resolve via
// `wparams` (extended in appearance order); free term identifiers are
// constants.
Prop parse_prop(const std::string& text, const Signature& sig,
                std::vector<std::string>* wparams = nullptr);

// Goal files (.hyll): `domain`, `atom p : pos|neg`, `gamma/delta/goal
// A @ w` lines, comments with #.
struct GoalFile {
  Domain domain = Domain::Unit;
  bool domain_set = false;
  Signature sig;
  Sequent sequent;
  std::vector<std::string> world_params;  // names of free world variables
};
GoalFile parse_goal_file(const std::string& text);

// Process files (.spi): `channel x : r`, `def X(a, b) = P`, `run P`.
struct SpiFile {
  spi::Env env;
  spi::RateTable rates;
  spi::Process run;
  bool has_run = false;
};
SpiFile parse_spi_file(const std::string& text);

spi::Process parse_process(const std::string& text);

}  // namespace hyll

#endif
