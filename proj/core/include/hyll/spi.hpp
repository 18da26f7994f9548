#ifndef HYLL_SPI_HPP
#define HYLL_SPI_HPP

#include <map>

#include "hyll/focusing.hpp"

namespace hyll::spi {

// Synchronous stochastic pi-calculus.  Channel binders (nu, input) are
// nameless and live in the prop term namespace, so the encoding maps each
// process binder onto one quantifier without index shuffling.  Channels
// are nullary function symbols (or parameters inside derivations).
enum class ProcTag { Nu, Par, Nil, Call, SumP };
enum class SumTag { Out, In, Tau, Plus };

struct ProcNode;
struct SumNode;
using Process = std::shared_ptr<const ProcNode>;
using Sum = std::shared_ptr<const SumNode>;

struct ProcNode {
  ProcTag tag;
  Rational rate;           // Nu: the declared channel rate
  Process left, right;     // Par; Nu body in left (binds term index 0)
  std::string defname;     // Call
  std::vector<Term> args;  // Call channel arguments
  Sum sum;                 // SumP
};

struct SumNode {
  SumTag tag;
  Term channel;            // Out / In
  Term message;            // Out
  Rational rate;           // Tau
  Process cont;            // Out / Tau; In: binds term index 0
  Sum left, right;         // Plus
};

Process pr_nu(Rational rate, Process body);
Process pr_par(Process a, Process b);
Process pr_nil();
Process pr_call(std::string defname, std::vector<Term> args = {});
Process pr_sum(Sum m);
Sum sm_out(Term channel, Term message, Process cont);
Sum sm_in(Term channel, Process cont);
Sum sm_tau(Rational rate, Process cont);
Sum sm_plus(Sum a, Sum b);

bool process_equal(const Process& a, const Process& b);
std::string to_string(const Process& p);
std::string to_string(const Sum& m);

// Substitutes a channel term for binder index 0 (input instantiation,
// restriction opening).
Process subst_channel(const Process& body, const Term& image);

// Re-abstracts the nullary symbol as a fresh outermost restriction.
Process bind_channel(const Process& body, const std::string& symbol, const Rational& rate);

struct SpiError : std::runtime_error {
  explicit SpiError(const std::string& what) : std::runtime_error(what) {}
};

// Recursive definitions X_n.  Bodies bind their parameters as term
// indices n-1 (first parameter) down to 0 (last).  Every occurrence of a
// defined constant in any body must sit under an action prefix.
struct Env {
  struct Def {
    int arity = 0;
    Process body;
  };
  std::map<std::string, Def> defs;

  const Def& lookup(const std::string& name) const;
};

// Throws SpiError if a body has an unguarded call or an arity mismatch.
void validate_env(const Env& e);

Process unfold_call(const Env& e, const std::string& name, const std::vector<Term>& args);

// Channel rates; every free channel of a configuration has one entry.
using RateTable = std::map<std::string, Rational>;

// --- congruence -------------------------------------------------------------

// Canonical form for the Fig. 3 congruence: nu extruded to the top
// (unused binders dropped), parallel flattened and sorted, 0 dropped,
// sums flattened, sorted and deduplicated, continuations canonical.
Process normal_form(const Env& e, const Process& p);

// Decides the structural congruence; definitions unfold only when a call
// meets a non-call, and nu binders match up to permutation.
bool congruent(const Env& e, const Process& p, const Process& q);

// --- operational semantics ---------------------------------------------------

struct Event {
  enum class Kind { Internal, Synchronize };
  Kind kind = Kind::Internal;
  Term channel;   // Synchronize
  Term message;   // Synchronize
  Rational rate;  // internal rate or the channel's inherent rate
};

bool event_equal(const Event& a, const Event& b);
std::string to_string(const Event& e);

// A configuration: all restrictions opened as fresh rated channels, the
// parallel structure flattened into items (sums or guarded calls).
struct Config {
  RateTable rates;
  std::vector<Process> items;
  int fresh_counter = 0;
  std::vector<std::string> opened;  // symbols created by opening, in order
};

Config open_config(const Env& e, const RateTable& rates, const Process& p,
                   int fresh_counter = 0);

// Unfolds every top-level call (one pass suffices under guardedness) and
// opens any restrictions this exposes.
Config expand_config(const Env& e, const Config& cfg);

struct EnabledAction {
  Event::Kind kind = Event::Kind::Internal;
  Rational propensity;
  Term channel;
  Term message;
  // redex positions in the expanded configuration
  int item = -1, summand = -1;            // internal
  int out_item = -1, out_summand = -1;    // synchronize
  int in_item = -1, in_summand = -1;
  Event event() const;
};

// All enabled actions of an expanded configuration, deterministically
// ordered: internals by position, synchronizations by channel name then
// positions; the propensity of a pair is the channel's inherent rate.
std::vector<EnabledAction> enabled_actions(const Env& e, const Config& cfg);

Config apply_action(const Env& e, const Config& cfg, const EnabledAction& a);

// One-step successors modulo congruence, with fresh channels re-bound.
std::vector<std::pair<Event, Process>> step(const Env& e, const RateTable& rates,
                                            const Process& p);

struct Trace {
  Process initial;
  std::vector<Event> events;
};

// Accumulated world after the first k events: rid . r1 . ... . rk.
World trace_world(const Trace& t, size_t k);

// Deterministic replay: each event resolves to the first matching enabled
// action.  Throws SpiError when an event does not match.
std::vector<Config> replay(const Env& e, const RateTable& rates, const Trace& t);

// --- encoding ---------------------------------------------------------------

// Built-in predicate names of the encoding; reserved in .spi files.
bool reserved_atom(const std::string& name);

Pos encode_proc(const Process& p);
Neg encode_sum(const Sum& m);
std::vector<NegJudgement> encode_env(const Env& e);
NegJudgement interaction_theory();

// The canonical context of P: sums become dt -o [M], restrictions open
// with fresh rated channels (accumulated into rates/facts), calls become
// shifted atoms, nil drops.
struct CanonicalContext {
  std::vector<NegJudgement> items;
  std::vector<NegJudgement> rt_facts;  // rt a @ [r] for opened channels
  RateTable rates;                     // extended table
  int fresh_counter = 0;
};
CanonicalContext canonical_context(const Process& p, const RateTable& rates,
                                   int fresh_counter = 0);

// env E, rates, inter @ rid ; act @ s, can P @ rid ; . ==> . ; ([Q] at rid) * act @ t
FocSequent canonical_sequent(const Env& e, const RateTable& rates, const Process& p,
                             const Process& goal, const WorldExpr& s, const WorldExpr& t);

// --- adequacy ----------------------------------------------------------------

// Completeness direction: a checking focused derivation of the canonical
// sequent from trace.initial to its replay-final process, with
// t = s . r1 . ... . rn.  Throws SpiError on a non-replaying trace.
FocProof trace_to_derivation(const Env& e, const RateTable& rates, const Trace& t);

// Soundness direction: the event list of a derivation over a canonical
// sequent, one event per interaction focus; unfold blocks contribute
// nothing.  Throws SpiError when the proof is not in canonical form.
Trace derivation_to_trace(const Env& e, const FocProof& p);

// The canonical neutral frontiers along the derivation's spine, with the
// events extracted so far at each; prefix adequacy reads off this spine.
struct SpinePoint {
  FocSequent frontier;
  size_t events_before = 0;
  WorldNF lock_world;
};
std::vector<SpinePoint> canonical_spine(const Env& e, const FocProof& p);

}  // namespace hyll::spi

#endif
