#ifndef HYLL_FOCUSING_HPP
#define HYLL_FOCUSING_HPP

#include <functional>
#include <optional>

#include "hyll/kernel.hpp"
#include "hyll/polarized.hpp"

namespace hyll {

struct PosJudgement {
  Pos prop;
  WorldExpr world;
};
struct NegJudgement {
  Neg prop;
  WorldExpr world;
};

bool pos_judgement_equal(const PosJudgement&, const PosJudgement&, Domain);
bool neg_judgement_equal(const NegJudgement&, const NegJudgement&, Domain);

// The four focused sequent forms.  Gamma and Delta hold only negative
// judgements, Omega only positive ones.  A neutral sequent is an active
// sequent with empty Omega and a stable goal.
enum class FocForm { Active, LeftFocus, RightFocus };

struct FocGoal {
  bool stable = true;
  Neg active_goal;   // when !stable
  Pos stable_goal;   // when stable
  WorldExpr world;
};

struct FocSequent {
  Domain domain = Domain::Unit;
  FocForm form = FocForm::Active;
  std::vector<NegJudgement> gamma;
  std::vector<NegJudgement> delta;
  std::vector<PosJudgement> omega;  // Active only
  FocGoal goal;                     // Active; LeftFocus keeps its stable goal here
  NegJudgement lfocus;              // LeftFocus
  PosJudgement rfocus;              // RightFocus
  int tscope = 0;
  int wscope = 0;
};

bool is_neutral(const FocSequent& s);
bool foc_sequent_equal(const FocSequent& a, const FocSequent& b);
std::string to_string(const FocSequent& s);
std::string foc_sequent_key(const FocSequent& s);
FocSequent canonicalize_foc_params(const FocSequent& s);

// Rule tags of the focused calculus: focused rules, active rules and the
// three decision rules.
enum class FTag {
  // under left focus
  Li, ShiftL, WithL, LimpL, ForallL, DownLF, AtLF,
  // under right focus
  Ri, ShiftR, TensorR, OplusR, ExistsR, BangR, DownRF, AtRF, OneR,
  // active, left zone
  TensorL, OneL, OplusL, DownLA, AtLA, ExistsL, BangL, ShiftLA, AtomL, ZeroL,
  // active, goal side
  WithR, TopR, LimpR, DownRA, AtRA, ForallR, ShiftRA, AtomR,
  // decisions
  Lf, Cplf, Rf
};

const char* ftag_name(FTag t);
std::optional<FTag> ftag_from_name(const std::string& name);

struct FocApp {
  FTag tag = FTag::Li;
  int principal = -1;  // delta index (Lf), gamma index (Cplf), omega index (active left)
  int which = 0;       // 1 | 2
  std::vector<int> split;  // delta indices routed to premise 1 (LimpL antecedent, TensorR left)
  std::optional<Term> term_witness;
  std::optional<WorldExpr> world_witness;
};

struct FocProofNode;
using FocProof = std::shared_ptr<const FocProofNode>;

struct FocProofNode {
  FocApp rule;
  FocSequent conclusion;
  std::vector<FocProof> premises;
};

FocProof mk_foc_proof(FocApp rule, FocSequent conclusion, std::vector<FocProof> premises = {});

struct FocApplyResult {
  bool ok = false;
  std::vector<FocSequent> premises;
  std::string error;
};
FocApplyResult apply_focused(const FocSequent& s, const FocApp& app);

CheckReport check_focused(const FocProof& p);

// Forgets the focusing structure: a kernel proof of the erased sequent.
Sequent erase_focused_sequent(const FocSequent& s);
Proof erase(const FocProof& p);

// --- search ----------------------------------------------------------------

struct SearchBudget {
  int max_decisions = 6;
  int max_depth = 2000;
  int copy_bound = 4;  // focuses per unrestricted judgement per branch
  std::vector<WorldExpr> world_hints;
};

// Order in which the deterministic active phase decomposes; two fixed
// orders exist so the phase-confluence property can be tested.
enum class ActiveOrder { OmegaFirstFifo, GoalFirstLifo };

struct SearchOptions {
  ActiveOrder order = ActiveOrder::OmegaFirstFifo;
};

// One line per focusing event (decision, branch selection, witness, and
// the world each re-emitted lock reaches); derived from a finished proof,
// so it is stable under search-order changes.
std::vector<std::string> phase_log(const FocProof& p);

// Fuel-bounded focused proof search from a neutral (or active) sequent.
// Iterative deepening on the number of decisions; the returned proof

// checks and is the first found under the deterministic choice order.
std::optional<FocProof> search(const FocSequent& goal, const SearchBudget& budget,
                               const SearchOptions& opts = {});

// The neutral frontier reached by decomposing an active sequent to a
// fixpoint (no decisions); parameters canonicalized for comparison.
std::vector<FocSequent> neutral_frontier(const FocSequent& active, ActiveOrder order);

// Polarize per the focusing completeness theorem (Gamma, goal negative;
// Delta positive), search, and erase back to a kernel proof.
std::optional<Proof> prove_unfocused(const Sequent& s, const SearchBudget& budget,
                                     const SearchOptions& opts = {});

// The focused sequent the completeness polarization produces for s.
FocSequent polarize_sequent(const Sequent& s);

}  // namespace hyll

#endif
