#ifndef HYLL_KERNEL_HPP
#define HYLL_KERNEL_HPP

#include <optional>

#include "hyll/sequent.hpp"

namespace hyll {

// Checkable proof objects for the unfocused sequent calculus.  Every node
// carries its conclusion and the rule instance with explicit witnesses;
// checking is local, deterministic and split-search-free.
enum class RuleTag {
  Init, Copy,
  TensorR, TensorL, OneR, OneL, LimpR, LimpL,
  TopR, ZeroL, WithR, WithL, OplusR, OplusL,
  ForallR, ForallL, ExistsR, ExistsL,
  BangR, BangL,
  AtR, AtL, DownR, DownL,
  Cut, CutBang
};

const char* rule_name(RuleTag t);
std::optional<RuleTag> rule_from_name(const std::string& name);

struct RuleApp {
  RuleTag tag = RuleTag::Init;
  int principal = -1;                       // delta index for left rules
  int which = 0;                            // 1 or 2 for &L / +R
  std::vector<int> split;                   // delta indices sent to premise 1
  std::optional<Term> term_witness;         // faL / exR on terms
  std::optional<WorldExpr> world_witness;   // faL / exR on worlds
  std::optional<Judgement> copied;          // copy
  std::optional<Judgement> cut_judgement;   // cut / cut!
};

struct ProofNode;
using Proof = std::shared_ptr<const ProofNode>;

struct ProofNode {
  RuleApp rule;
  Sequent conclusion;
  std::vector<Proof> premises;
};

Proof mk_proof(RuleApp rule, Sequent conclusion, std::vector<Proof> premises = {});

struct CheckReport {
  bool ok = true;
  std::vector<int> path;   // premise indices from the root to the failure
  std::string rule;
  std::string reason;
};

std::string to_string(const CheckReport& r);

// Computes the premises a rule instance demands of a conclusion, or an
// error message.  The single source of rule semantics: the checker, the
// proof builders and certificate reconstruction all go through it.
struct ApplyResult {
  bool ok = false;
  std::vector<Sequent> premises;
  std::string error;
};
ApplyResult apply_rule(const Sequent& s, const RuleApp& app);

CheckReport check_proof(const Proof& p, bool allow_cut = false);

// Counts Cut/CutBang nodes.
int count_cuts(const Proof& p);

// --- executable metatheory ----------------------------------------------

// Cut-free proof of Gamma ; A @ w ==> A @ w by structural induction.
Proof identity_expand(const Prop& a, const WorldExpr& w, Domain domain,
                      std::vector<Judgement> gamma = {}, int tscope = -1, int wscope = -1);

// Adds unrestricted hypotheses everywhere; `extra` must be closed under
// the root scopes.
Proof weaken(const Proof& p, const std::vector<Judgement>& extra);

// Collapses duplicate occurrences of j in every Gamma to a single one.
Proof contract(const Proof& p, const Judgement& j);

// Inversion of an invertible rule: premise sequents preserving and
// reflecting provability.  Left rules act on the first matching
// hypothesis.  Throws std::invalid_argument when no principal exists.
std::vector<Sequent> invert(RuleTag tag, const Sequent& s);

// Structural cut elimination: same end-sequent, zero cut nodes.
Proof cut_eliminate(const Proof& p);

// Parameter plumbing used when proofs move under binders.
Proof shift_params_proof(const Proof& p, int tfrom, int tby, int wfrom, int wby);
Proof subst_param_t_proof(const Proof& p, int level, const Term& image);
Proof subst_param_w_proof(const Proof& p, int level, const WorldExpr& image);

}  // namespace hyll

#endif
