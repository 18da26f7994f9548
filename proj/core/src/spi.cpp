#include "hyll/spi.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "hyll/print.hpp"

namespace hyll::spi {

static Process mkp(ProcNode n) { return std::make_shared<const ProcNode>(std::move(n)); }
static Sum mks(SumNode n) { return std::make_shared<const SumNode>(std::move(n)); }

Process pr_nu(Rational rate, Process body) {
  if (rate <= Rational(0)) throw SpiError("restriction rate must be positive");
  ProcNode n{ProcTag::Nu};
  n.rate = std::move(rate);
  n.left = std::move(body);
  return mkp(std::move(n));
}
Process pr_par(Process a, Process b) {
  ProcNode n{ProcTag::Par};
  n.left = std::move(a);
  n.right = std::move(b);
  return mkp(std::move(n));
}
Process pr_nil() {
  static Process p = mkp(ProcNode{ProcTag::Nil});
  return p;
}
Process pr_call(std::string defname, std::vector<Term> args) {
  ProcNode n{ProcTag::Call};
  n.defname = std::move(defname);
  n.args = std::move(args);
  return mkp(std::move(n));
}
Process pr_sum(Sum m) {
  ProcNode n{ProcTag::SumP};
  n.sum = std::move(m);
  return mkp(std::move(n));
}
Sum sm_out(Term channel, Term message, Process cont) {
  SumNode n{SumTag::Out};
  n.channel = std::move(channel);
  n.message = std::move(message);
  n.cont = std::move(cont);
  return mks(std::move(n));
}
Sum sm_in(Term channel, Process cont) {
  SumNode n{SumTag::In};
  n.channel = std::move(channel);
  n.cont = std::move(cont);
  return mks(std::move(n));
}
Sum sm_tau(Rational rate, Process cont) {
  if (rate <= Rational(0)) throw SpiError("internal action rate must be positive");
  SumNode n{SumTag::Tau};
  n.rate = std::move(rate);
  n.cont = std::move(cont);
  return mks(std::move(n));
}
Sum sm_plus(Sum a, Sum b) {
  SumNode n{SumTag::Plus};
  n.left = std::move(a);
  n.right = std::move(b);
  return mks(std::move(n));
}

// --- structural helpers -------------------------------------------------------

namespace {

Process shift_proc(const Process& p, int by, int depth);

Sum shift_sum(const Sum& m, int by, int depth) {
  switch (m->tag) {
    case SumTag::Out:
      return sm_out(shift_term(m->channel, by, depth), shift_term(m->message, by, depth),
                    shift_proc(m->cont, by, depth));
    case SumTag::In:
      return sm_in(shift_term(m->channel, by, depth), shift_proc(m->cont, by, depth + 1));
    case SumTag::Tau: return sm_tau(m->rate, shift_proc(m->cont, by, depth));
    case SumTag::Plus: return sm_plus(shift_sum(m->left, by, depth), shift_sum(m->right, by, depth));
  }
  return m;
}

Process shift_proc(const Process& p, int by, int depth) {
  switch (p->tag) {
    case ProcTag::Nu: return pr_nu(p->rate, shift_proc(p->left, by, depth + 1));
    case ProcTag::Par: return pr_par(shift_proc(p->left, by, depth), shift_proc(p->right, by, depth));
    case ProcTag::Nil: return p;
    case ProcTag::Call: {
      std::vector<Term> args;
      for (const auto& a : p->args) args.push_back(shift_term(a, by, depth));
      return pr_call(p->defname, std::move(args));
    }
    case ProcTag::SumP: return pr_sum(shift_sum(p->sum, by, depth));
  }
  return p;
}

Process subst_proc(const Process& p, const Term& image, int depth);

Sum subst_sum(const Sum& m, const Term& image, int depth) {
  switch (m->tag) {
    case SumTag::Out:
      return sm_out(subst_term_in_term(m->channel, image, depth),
                    subst_term_in_term(m->message, image, depth),
                    subst_proc(m->cont, image, depth));
    case SumTag::In:
      return sm_in(subst_term_in_term(m->channel, image, depth),
                   subst_proc(m->cont, image, depth + 1));
    case SumTag::Tau: return sm_tau(m->rate, subst_proc(m->cont, image, depth));
    case SumTag::Plus:
      return sm_plus(subst_sum(m->left, image, depth), subst_sum(m->right, image, depth));
  }
  return m;
}

Process subst_proc(const Process& p, const Term& image, int depth) {
  switch (p->tag) {
    case ProcTag::Nu: return pr_nu(p->rate, subst_proc(p->left, image, depth + 1));
    case ProcTag::Par:
      return pr_par(subst_proc(p->left, image, depth), subst_proc(p->right, image, depth));
    case ProcTag::Nil: return p;
    case ProcTag::Call: {
      std::vector<Term> args;
      for (const auto& a : p->args) args.push_back(subst_term_in_term(a, image, depth));
      return pr_call(p->defname, std::move(args));
    }
    case ProcTag::SumP: return pr_sum(subst_sum(p->sum, image, depth));
  }
  return p;
}

bool sum_equal(const Sum& a, const Sum& b);

bool proc_equal_rec(const Process& a, const Process& b) {
  if (a == b) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case ProcTag::Nu: return a->rate == b->rate && proc_equal_rec(a->left, b->left);
    case ProcTag::Par:
      return proc_equal_rec(a->left, b->left) && proc_equal_rec(a->right, b->right);
    case ProcTag::Nil: return true;
    case ProcTag::Call: return a->defname == b->defname && a->args == b->args;
    case ProcTag::SumP: return sum_equal(a->sum, b->sum);
  }
  return false;
}

bool sum_equal(const Sum& a, const Sum& b) {
  if (a == b) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case SumTag::Out:
      return a->channel == b->channel && a->message == b->message &&
             proc_equal_rec(a->cont, b->cont);
    case SumTag::In: return a->channel == b->channel && proc_equal_rec(a->cont, b->cont);
    case SumTag::Tau: return a->rate == b->rate && proc_equal_rec(a->cont, b->cont);
    case SumTag::Plus: return sum_equal(a->left, b->left) && sum_equal(a->right, b->right);
  }
  return false;
}

}  // namespace

bool process_equal(const Process& a, const Process& b) { return proc_equal_rec(a, b); }

Process subst_channel(const Process& body, const Term& image) {
  return subst_proc(body, image, 0);
}

// --- printing ------------------------------------------------------------------

namespace {

std::string term_str(const Term& t, const std::vector<std::string>& names) {
  switch (t->tag) {
    case TermTag::Var: {
      int which = static_cast<int>(names.size()) - 1 - t->index;
      if (which >= 0) return names[which];
      return "`x" + std::to_string(t->index);
    }
    default: return hyll::to_string(t);
  }
}

std::string proc_str(const Process& p, std::vector<std::string>& names, int prec);

std::string sum_str(const Sum& m, std::vector<std::string>& names, int prec) {
  switch (m->tag) {
    case SumTag::Out:
      return term_str(m->channel, names) + "!(" + term_str(m->message, names) + ")." +
             proc_str(m->cont, names, 3);
    case SumTag::In: {
      std::string v = "y" + std::to_string(names.size());
      std::string head = term_str(m->channel, names) + "?(" + v + ").";
      names.push_back(v);
      std::string body = proc_str(m->cont, names, 3);
      names.pop_back();
      return head + body;
    }
    case SumTag::Tau:
      return "tau(" + hyll::to_string(m->rate) + ")." + proc_str(m->cont, names, 3);
    case SumTag::Plus: {
      std::string s = sum_str(m->left, names, 2) + " + " + sum_str(m->right, names, 1);
      return prec > 1 ? "(" + s + ")" : s;
    }
  }
  return "?";
}

std::string proc_str(const Process& p, std::vector<std::string>& names, int prec) {
  switch (p->tag) {
    case ProcTag::Nu: {
      std::string v = "c" + std::to_string(names.size());
      std::string head = "new(" + hyll::to_string(p->rate) + ") " + v + " in ";
      names.push_back(v);
      std::string body = proc_str(p->left, names, 0);
      names.pop_back();
      std::string s = head + body;
      return prec > 0 ? "(" + s + ")" : s;
    }
    case ProcTag::Par: {
      std::string s = proc_str(p->left, names, 1) + " | " + proc_str(p->right, names, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case ProcTag::Nil: return "0";
    case ProcTag::Call: {
      std::string s = p->defname + "(";
      for (size_t i = 0; i < p->args.size(); ++i) {
        if (i) s += ", ";
        s += term_str(p->args[i], names);
      }
      return s + ")";
    }
    case ProcTag::SumP: return sum_str(p->sum, names, prec > 1 ? 2 : 1);
  }
  return "?";
}

}  // namespace

std::string to_string(const Process& p) {
  std::vector<std::string> names;
  return proc_str(p, names, 0);
}

std::string to_string(const Sum& m) {
  std::vector<std::string> names;
  return sum_str(m, names, 0);
}

// --- environment ---------------------------------------------------------------

const Env::Def& Env::lookup(const std::string& name) const {
  auto it = defs.find(name);
  if (it == defs.end()) throw SpiError("unknown definition: " + name);
  return it->second;
}

namespace {

void check_guarded(const Env& e, const Process& p, bool guarded);

void check_guarded_sum(const Env& e, const Sum& m) {
  switch (m->tag) {
    case SumTag::Out:
    case SumTag::In:
    case SumTag::Tau: check_guarded(e, m->cont, true); return;
    case SumTag::Plus:
      check_guarded_sum(e, m->left);
      check_guarded_sum(e, m->right);
      return;
  }
}

void check_guarded(const Env& e, const Process& p, bool guarded) {
  switch (p->tag) {
    case ProcTag::Nu: check_guarded(e, p->left, guarded); return;
    case ProcTag::Par:
      check_guarded(e, p->left, guarded);
      check_guarded(e, p->right, guarded);
      return;
    case ProcTag::Nil: return;
    case ProcTag::Call: {
      if (!guarded) throw SpiError("unguarded call of " + p->defname + " in a definition body");
      const auto& d = e.lookup(p->defname);
      if (static_cast<int>(p->args.size()) != d.arity)
        throw SpiError("arity mismatch in call of " + p->defname);
      return;
    }
    case ProcTag::SumP: check_guarded_sum(e, p->sum); return;
  }
}

}  // namespace

void validate_env(const Env& e) {
  for (const auto& [name, def] : e.defs) {
    (void)name;
    check_guarded(e, def.body, false);
  }
}

Process unfold_call(const Env& e, const std::string& name, const std::vector<Term>& args) {
  const auto& d = e.lookup(name);
  if (static_cast<int>(args.size()) != d.arity) throw SpiError("arity mismatch: " + name);
  Process body = d.body;
  // body binds x1..xn as indices n-1..0; substitute innermost-first
  for (int i = d.arity - 1; i >= 0; --i) body = subst_proc(body, args[i], 0);
  return body;
}

// --- normal form ----------------------------------------------------------------

namespace {

constexpr const char* kMark = "#b";

// Extruded nu binders are named "#b<depth>_<k>".  Depth is the structural
// nesting of normal-form construction (each prefix continuation is one
// level deeper), so a level never captures the free markers of enclosing
// levels, and names are canonical across alpha-variants.
bool is_marker(const Term& t) {
  return t->tag == TermTag::Fn && t->args.empty() && t->symbol.rfind(kMark, 0) == 0;
}

std::string marker_name(int depth, int k) {
  return std::string(kMark) + std::to_string(depth) + "_" + std::to_string(k);
}

std::string marker_canon(int depth, int k) {
  return std::string(kMark) + std::to_string(depth) + "_r" + std::to_string(k);
}

bool marker_at_depth(const Term& t, int depth) {
  if (!is_marker(t) || depth < 0) return false;
  std::string prefix = std::string(kMark) + std::to_string(depth) + "_";
  return t->symbol.rfind(prefix, 0) == 0;
}

// collect top-level structure, opening nu with marker symbols
void collect_items(const Process& p, int depth, std::vector<Rational>& nu_rates,
                   std::vector<Process>& items, int& next_marker) {
  switch (p->tag) {
    case ProcTag::Nu: {
      std::string mark = marker_name(depth, next_marker++);
      nu_rates.push_back(p->rate);
      collect_items(subst_proc(p->left, Term::fn(mark), 0), depth, nu_rates, items, next_marker);
      return;
    }
    case ProcTag::Par:
      collect_items(p->left, depth, nu_rates, items, next_marker);
      collect_items(p->right, depth, nu_rates, items, next_marker);
      return;
    case ProcTag::Nil: return;
    default: items.push_back(p); return;
  }
}

// comparison key; the markers of one depth may be blinded so sorting can
// ignore the identities of this level's binders
std::string proc_key(const Process& p, int blind_depth);

std::string term_key(const Term& t, int blind_depth) {
  if (marker_at_depth(t, blind_depth)) return "#b*";
  if (t->tag == TermTag::Fn && !t->args.empty()) {
    std::string s = t->symbol + "(";
    for (const auto& a : t->args) s += term_key(a, blind_depth) + ",";
    return s + ")";
  }
  return hyll::to_string(t);
}

std::string sum_key(const Sum& m, int blind_depth) {
  switch (m->tag) {
    case SumTag::Out:
      return "out " + term_key(m->channel, blind_depth) + " " + term_key(m->message, blind_depth) +
             ". " + proc_key(m->cont, blind_depth);
    case SumTag::In:
      return "in " + term_key(m->channel, blind_depth) + ". " + proc_key(m->cont, blind_depth);
    case SumTag::Tau:
      return "tau " + hyll::to_string(m->rate) + ". " + proc_key(m->cont, blind_depth);
    case SumTag::Plus:
      return sum_key(m->left, blind_depth) + " + " + sum_key(m->right, blind_depth);
  }
  return "?";
}

std::string proc_key(const Process& p, int blind_depth) {
  switch (p->tag) {
    case ProcTag::Nu: return "nu " + hyll::to_string(p->rate) + ". " + proc_key(p->left, blind_depth);
    case ProcTag::Par:
      return "(" + proc_key(p->left, blind_depth) + " | " + proc_key(p->right, blind_depth) + ")";
    case ProcTag::Nil: return "0";
    case ProcTag::Call: {
      std::string s = p->defname + "(";
      for (const auto& a : p->args) s += term_key(a, blind_depth) + ",";
      return s + ")";
    }
    case ProcTag::SumP: return "{" + sum_key(p->sum, blind_depth) + "}";
  }
  return "?";
}

void flatten_sum(const Sum& m, std::vector<Sum>& out) {
  if (m->tag == SumTag::Plus) {
    flatten_sum(m->left, out);
    flatten_sum(m->right, out);
  } else {
    out.push_back(m);
  }
}

Process rename_markers(const Process& p, const std::map<std::string, std::string>& ren);

Term rename_markers_t(const Term& t, const std::map<std::string, std::string>& ren) {
  if (t->tag == TermTag::Fn) {
    if (t->args.empty()) {
      auto it = ren.find(t->symbol);
      if (it != ren.end()) return Term::fn(it->second);
      return t;
    }
    std::vector<Term> args;
    for (const auto& a : t->args) args.push_back(rename_markers_t(a, ren));
    return Term::fn(t->symbol, std::move(args));
  }
  return t;
}

Sum rename_markers_s(const Sum& m, const std::map<std::string, std::string>& ren) {
  switch (m->tag) {
    case SumTag::Out:
      return sm_out(rename_markers_t(m->channel, ren), rename_markers_t(m->message, ren),
                    rename_markers(m->cont, ren));
    case SumTag::In: return sm_in(rename_markers_t(m->channel, ren), rename_markers(m->cont, ren));
    case SumTag::Tau: return sm_tau(m->rate, rename_markers(m->cont, ren));
    case SumTag::Plus:
      return sm_plus(rename_markers_s(m->left, ren), rename_markers_s(m->right, ren));
  }
  return m;
}

Process rename_markers(const Process& p, const std::map<std::string, std::string>& ren) {
  switch (p->tag) {
    case ProcTag::Nu: return pr_nu(p->rate, rename_markers(p->left, ren));
    case ProcTag::Par: return pr_par(rename_markers(p->left, ren), rename_markers(p->right, ren));
    case ProcTag::Nil: return p;
    case ProcTag::Call: {
      std::vector<Term> args;
      for (const auto& a : p->args) args.push_back(rename_markers_t(a, ren));
      return pr_call(p->defname, std::move(args));
    }
    case ProcTag::SumP: return pr_sum(rename_markers_s(p->sum, ren));
  }
  return p;
}

void symbols_used_t(const Term& t, std::vector<std::string>& out) {
  if (t->tag == TermTag::Fn) {
    if (t->args.empty()) {
      if (std::find(out.begin(), out.end(), t->symbol) == out.end()) out.push_back(t->symbol);
    } else {
      for (const auto& a : t->args) symbols_used_t(a, out);
    }
  }
}

void symbols_used(const Process& p, std::vector<std::string>& out);

void symbols_used_s(const Sum& m, std::vector<std::string>& out) {
  switch (m->tag) {
    case SumTag::Out:
      symbols_used_t(m->channel, out);
      symbols_used_t(m->message, out);
      symbols_used(m->cont, out);
      return;
    case SumTag::In:
      symbols_used_t(m->channel, out);
      symbols_used(m->cont, out);
      return;
    case SumTag::Tau: symbols_used(m->cont, out); return;
    case SumTag::Plus:
      symbols_used_s(m->left, out);
      symbols_used_s(m->right, out);
      return;
  }
}

void symbols_used(const Process& p, std::vector<std::string>& out) {
  switch (p->tag) {
    case ProcTag::Nu: symbols_used(p->left, out); return;
    case ProcTag::Par:
      symbols_used(p->left, out);
      symbols_used(p->right, out);
      return;
    case ProcTag::Nil: return;
    case ProcTag::Call:
      for (const auto& a : p->args) symbols_used_t(a, out);
      return;
    case ProcTag::SumP: symbols_used_s(p->sum, out); return;
  }
}

// re-abstract a symbol as a binder at the given depth
Process abstract_marker(const Process& p, const std::string& sym, int depth);

Term abstract_marker_t(const Term& t, const std::string& sym, int depth) {
  if (t->tag == TermTag::Fn && t->args.empty() && t->symbol == sym) return Term::var(depth);
  if (t->tag == TermTag::Fn && !t->args.empty()) {
    std::vector<Term> args;
    for (const auto& a : t->args) args.push_back(abstract_marker_t(a, sym, depth));
    return Term::fn(t->symbol, std::move(args));
  }
  return t;
}

Sum abstract_marker_s(const Sum& m, const std::string& sym, int depth) {
  switch (m->tag) {
    case SumTag::Out:
      return sm_out(abstract_marker_t(m->channel, sym, depth),
                    abstract_marker_t(m->message, sym, depth), abstract_marker(m->cont, sym, depth));
    case SumTag::In:
      return sm_in(abstract_marker_t(m->channel, sym, depth),
                   abstract_marker(m->cont, sym, depth + 1));
    case SumTag::Tau: return sm_tau(m->rate, abstract_marker(m->cont, sym, depth));
    case SumTag::Plus:
      return sm_plus(abstract_marker_s(m->left, sym, depth), abstract_marker_s(m->right, sym, depth));
  }
  return m;
}

Process abstract_marker(const Process& p, const std::string& sym, int depth) {
  switch (p->tag) {
    case ProcTag::Nu: return pr_nu(p->rate, abstract_marker(p->left, sym, depth + 1));
    case ProcTag::Par:
      return pr_par(abstract_marker(p->left, sym, depth), abstract_marker(p->right, sym, depth));
    case ProcTag::Nil: return p;
    case ProcTag::Call: {
      std::vector<Term> args;
      for (const auto& a : p->args) args.push_back(abstract_marker_t(a, sym, depth));
      return pr_call(p->defname, std::move(args));
    }
    case ProcTag::SumP: return pr_sum(abstract_marker_s(p->sum, sym, depth));
  }
  return p;
}

// wrap items into right-nested | and bind the markers back, outermost first
Process rebuild(const std::vector<Rational>& nu_rates, const std::vector<std::string>& markers,
                const std::vector<Process>& items) {
  Process body = pr_nil();
  if (!items.empty()) {
    body = items.back();
    for (int i = static_cast<int>(items.size()) - 2; i >= 0; --i) body = pr_par(items[i], body);
  }
  for (int k = static_cast<int>(markers.size()) - 1; k >= 0; --k)
    body = pr_nu(nu_rates[k], abstract_marker(shift_proc(body, 1, 0), markers[k], 0));
  return body;
}

Process nf_rec(const Env& e, const Process& p, int depth);

Sum nf_sum(const Env& e, const Sum& m, int depth) {
  std::vector<Sum> parts;
  flatten_sum(m, parts);
  std::vector<Sum> canon;
  for (const auto& s : parts) {
    switch (s->tag) {
      case SumTag::Out:
        canon.push_back(sm_out(s->channel, s->message, nf_rec(e, s->cont, depth + 1)));
        break;
      case SumTag::In: canon.push_back(sm_in(s->channel, nf_rec(e, s->cont, depth + 1))); break;
      case SumTag::Tau: canon.push_back(sm_tau(s->rate, nf_rec(e, s->cont, depth + 1))); break;
      default: break;
    }
  }
  std::sort(canon.begin(), canon.end(),
            [](const Sum& a, const Sum& b) { return sum_key(a, -1) < sum_key(b, -1); });
  // congruence deduplication: M + N == M when M == N
  canon.erase(std::unique(canon.begin(), canon.end(),
                          [](const Sum& a, const Sum& b) { return sum_equal(a, b); }),
              canon.end());
  Sum out = canon.back();
  for (int i = static_cast<int>(canon.size()) - 2; i >= 0; --i) out = sm_plus(canon[i], out);
  return out;
}

Process nf_rec(const Env& e, const Process& p, int depth) {
  std::vector<Rational> nu_rates;
  std::vector<Process> items;
  int next_marker = 0;
  collect_items(p, depth, nu_rates, items, next_marker);

  for (auto& it : items)
    if (it->tag == ProcTag::SumP) it = pr_sum(nf_sum(e, it->sum, depth));

  // sort blind to this level's binder identities, then fix the binder
  // order by first use and resort with full keys
  std::stable_sort(items.begin(), items.end(), [&](const Process& a, const Process& b) {
    return proc_key(a, depth) < proc_key(b, depth);
  });

  std::vector<std::string> use_order;
  for (const auto& it : items) symbols_used(it, use_order);

  std::map<std::string, std::string> ren;
  std::vector<Rational> rates2;
  std::vector<std::string> markers2;
  for (const auto& sym : use_order) {
    std::string prefix = std::string(kMark) + std::to_string(depth) + "_";
    if (sym.rfind(prefix, 0) != 0 || ren.count(sym)) continue;
    if (sym.find("_r") != std::string::npos) continue;  // already canonical (not ours)
    int orig = std::stoi(sym.substr(prefix.size()));
    std::string canon = marker_canon(depth, static_cast<int>(markers2.size()));
    ren[sym] = canon;
    rates2.push_back(nu_rates[orig]);
    markers2.push_back(canon);
  }
  // binders never used are dropped: nu_r P == P when the channel is unused
  for (auto& it : items) it = rename_markers(it, ren);
  std::sort(items.begin(), items.end(), [](const Process& a, const Process& b) {
    return proc_key(a, -1) < proc_key(b, -1);
  });
  return rebuild(rates2, markers2, items);
}

}  // namespace

Process normal_form(const Env& e, const Process& p) { return nf_rec(e, p, 0); }

// --- congruence decision ----------------------------------------------------------

namespace {

// peel a normal form, unfold top-level call items, renormalize
Process unfold_tops(const Env& e, const Process& p, int depth) {
  std::vector<Rational> nu_rates;
  std::vector<Process> items;
  int next_marker = 0;
  collect_items(p, depth, nu_rates, items, next_marker);
  std::vector<Process> out;
  bool changed = false;
  for (const auto& it : items) {
    if (it->tag == ProcTag::Call) {
      out.push_back(unfold_call(e, it->defname, it->args));
      changed = true;
    } else {
      out.push_back(it);
    }
  }
  if (!changed) return p;
  std::vector<std::string> markers;
  for (int k = 0; k < static_cast<int>(nu_rates.size()); ++k)
    markers.push_back(marker_name(depth, k));
  return nf_rec(e, rebuild(nu_rates, markers, out), depth);
}

bool congr_rec(const Env& e, const Process& a, const Process& b, int depth, int fuel);

// compares two normal forms modulo a rate-respecting permutation of this
// level's binders
bool congr_modulo_nu(const Env& e, const Process& a, const Process& b, int depth, int fuel) {
  std::vector<Rational> ra, rb;
  std::vector<Process> ia, ib;
  int ma = 0, mb = 0;
  collect_items(a, depth, ra, ia, ma);
  collect_items(b, depth, rb, ib, mb);
  if (ra.size() != rb.size() || ia.size() != ib.size()) return false;
  {
    std::vector<Rational> sa = ra, sb = rb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  auto items_match = [&](const std::vector<Process>& xs, const std::vector<Process>& ys) {
    std::vector<bool> used(ys.size(), false);
    for (const auto& x : xs) {
      bool ok = false;
      for (size_t j = 0; j < ys.size(); ++j) {
        if (used[j]) continue;
        if (congr_rec(e, x, ys[j], depth, fuel)) {
          used[j] = true;
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
    return true;
  };
  std::vector<int> perm(rb.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ratesok = true;
    for (size_t k = 0; k < rb.size(); ++k)
      if (ra[k] != rb[perm[k]]) {
        ratesok = false;
        break;
      }
    if (!ratesok) continue;
    std::map<std::string, std::string> ren;
    for (size_t k = 0; k < rb.size(); ++k)
      ren[marker_name(depth, perm[k])] = marker_name(depth, static_cast<int>(k));
    std::vector<Process> ib2;
    for (const auto& it : ib) ib2.push_back(rename_markers(it, ren));
    if (items_match(ia, ib2)) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

bool congr_sum(const Env& e, const Sum& a, const Sum& b, int depth, int fuel) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case SumTag::Out:
      return a->channel == b->channel && a->message == b->message &&
             congr_rec(e, a->cont, b->cont, depth + 1, fuel);
    case SumTag::In:
      return a->channel == b->channel && congr_rec(e, a->cont, b->cont, depth + 1, fuel);
    case SumTag::Tau: return a->rate == b->rate && congr_rec(e, a->cont, b->cont, depth + 1, fuel);
    case SumTag::Plus: {
      std::vector<Sum> xs, ys;
      flatten_sum(a, xs);
      flatten_sum(b, ys);
      if (xs.size() != ys.size()) return false;
      std::vector<bool> used(ys.size(), false);
      for (const auto& x : xs) {
        bool ok = false;
        for (size_t j = 0; j < ys.size(); ++j) {
          if (used[j]) continue;
          if (congr_sum(e, x, ys[j], depth, fuel)) {
            used[j] = true;
            ok = true;
            break;
          }
        }
        if (!ok) return false;
      }
      return true;
    }
  }
  return false;
}

bool congr_rec(const Env& e, const Process& a, const Process& b, int depth, int fuel) {
  if (fuel <= 0) return false;
  Process na = nf_rec(e, a, depth);
  Process nb = nf_rec(e, b, depth);
  if (proc_equal_rec(na, nb)) return true;

  auto single = [](const Process& p) { return p->tag != ProcTag::Par && p->tag != ProcTag::Nu; };
  if (single(na) && single(nb)) {
    if (na->tag == ProcTag::Call && nb->tag == ProcTag::Call) {
      if (na->defname == nb->defname && na->args == nb->args) return true;
      return congr_rec(e, unfold_tops(e, na, depth), unfold_tops(e, nb, depth), depth, fuel - 1);
    }
    if (na->tag == ProcTag::Call)
      return congr_rec(e, unfold_tops(e, na, depth), nb, depth, fuel - 1);
    if (nb->tag == ProcTag::Call)
      return congr_rec(e, na, unfold_tops(e, nb, depth), depth, fuel - 1);
    if (na->tag == ProcTag::SumP && nb->tag == ProcTag::SumP)
      return congr_sum(e, na->sum, nb->sum, depth, fuel - 1);
    return false;
  }

  if (congr_modulo_nu(e, na, nb, depth, fuel - 1)) return true;
  Process ua = unfold_tops(e, na, depth);
  Process ub = unfold_tops(e, nb, depth);
  if (!proc_equal_rec(ua, na) || !proc_equal_rec(ub, nb))
    return congr_modulo_nu(e, nf_rec(e, ua, depth), nf_rec(e, ub, depth), depth, fuel - 1);
  return false;
}

}  // namespace

bool congruent(const Env& e, const Process& p, const Process& q) {
  return congr_rec(e, p, q, 0, 32);
}

// --- configurations and steps -------------------------------------------------------

namespace {

constexpr const char* kFresh = "#c";

// Opens all top restrictions of p with fresh rated symbols.  Items keep
// their syntactic traversal order: configurations mirror the order in
// which the focused active phase decomposes the encoding, which is what
// keeps derivations and replays aligned.
void open_into(const Env& e, const Process& p, Config& cfg) {
  (void)e;
  std::vector<Rational> nu_rates;
  std::vector<Process> items;
  int next_marker = 0;
  collect_items(p, 0, nu_rates, items, next_marker);
  std::map<std::string, std::string> ren;
  for (size_t k = 0; k < nu_rates.size(); ++k) {
    std::string sym = kFresh + std::to_string(cfg.fresh_counter++);
    ren[marker_name(0, static_cast<int>(k))] = sym;
    cfg.rates[sym] = nu_rates[k];
    cfg.opened.push_back(sym);
  }
  for (auto& it : items) cfg.items.push_back(rename_markers(it, ren));
}

}  // namespace


Process bind_channel(const Process& body, const std::string& symbol, const Rational& rate) {
  return pr_nu(rate, abstract_marker(shift_proc(body, 1, 0), symbol, 0));
}

Config open_config(const Env& e, const RateTable& rates, const Process& p, int fresh_counter) {
  Config cfg;
  cfg.rates = rates;
  cfg.fresh_counter = fresh_counter;
  open_into(e, p, cfg);
  return cfg;
}

Config expand_config(const Env& e, const Config& cfg) {
  // calls unfold in item order; the unfolded components land at the end,
  // matching where the interaction derivation appends them
  Config out = cfg;
  out.items.clear();
  std::vector<Process> calls;
  for (const auto& it : cfg.items) {
    if (it->tag == ProcTag::Call) calls.push_back(it);
    else out.items.push_back(it);
  }
  for (const auto& it : calls) {
    Config sub;
    sub.rates = out.rates;
    sub.fresh_counter = out.fresh_counter;
    open_into(e, unfold_call(e, it->defname, it->args), sub);
    for (const auto& s : sub.items) {
      if (s->tag == ProcTag::Call)
        throw SpiError("definition body exposes an unguarded call: " + it->defname);
      out.items.push_back(s);
    }
    out.rates = sub.rates;
    out.fresh_counter = sub.fresh_counter;
    for (const auto& o : sub.opened) out.opened.push_back(o);
  }
  return out;
}

Event EnabledAction::event() const {
  Event ev;
  ev.kind = kind;
  ev.channel = channel;
  ev.message = message;
  ev.rate = propensity;
  return ev;
}

std::vector<EnabledAction> enabled_actions(const Env& e, const Config& cfg) {
  (void)e;
  std::vector<EnabledAction> out;
  // internal actions by position
  for (size_t i = 0; i < cfg.items.size(); ++i) {
    if (cfg.items[i]->tag != ProcTag::SumP) throw SpiError("enabled: unexpanded configuration");
    std::vector<Sum> parts;
    flatten_sum(cfg.items[i]->sum, parts);
    for (size_t k = 0; k < parts.size(); ++k) {
      if (parts[k]->tag == SumTag::Tau) {
        EnabledAction a;
        a.kind = Event::Kind::Internal;
        a.propensity = parts[k]->rate;
        a.item = static_cast<int>(i);
        a.summand = static_cast<int>(k);
        out.push_back(a);
      }
    }
  }
  // synchronizations grouped by channel name
  struct Slot {
    int item, summand;
    Term message;  // for outputs
  };
  std::map<std::string, std::pair<std::vector<Slot>, std::vector<Slot>>> by_channel;
  for (size_t i = 0; i < cfg.items.size(); ++i) {
    std::vector<Sum> parts;
    flatten_sum(cfg.items[i]->sum, parts);
    for (size_t k = 0; k < parts.size(); ++k) {
      const Sum& s = parts[k];
      if (s->tag == SumTag::Out)
        by_channel[hyll::to_string(s->channel)].first.push_back(
            {static_cast<int>(i), static_cast<int>(k), s->message});
      else if (s->tag == SumTag::In)
        by_channel[hyll::to_string(s->channel)].second.push_back(
            {static_cast<int>(i), static_cast<int>(k), Term()});
    }
  }
  for (const auto& [chan, slots] : by_channel) {
    const auto& [outs, ins] = slots;
    if (outs.empty() || ins.empty()) continue;
    auto rate_it = cfg.rates.find(chan);
    if (rate_it == cfg.rates.end()) throw SpiError("unrated channel: " + chan);
    for (const auto& o : outs)
      for (const auto& i2 : ins) {
        if (o.item == i2.item) continue;  // a sum cannot synchronize with itself
        EnabledAction a;
        a.kind = Event::Kind::Synchronize;
        a.propensity = rate_it->second;
        a.channel = Term::fn(chan);
        a.message = o.message;
        a.out_item = o.item;
        a.out_summand = o.summand;
        a.in_item = i2.item;
        a.in_summand = i2.summand;
        out.push_back(a);
      }
  }
  return out;
}

namespace {

Sum summand_at(const Process& item, int k) {
  std::vector<Sum> parts;
  flatten_sum(item->sum, parts);
  return parts[k];
}

}  // namespace

Config apply_action(const Env& e, const Config& cfg, const EnabledAction& a) {
  Config out = cfg;
  std::vector<Process> conts;
  std::vector<size_t> remove;
  if (a.kind == Event::Kind::Internal) {
    Sum s = summand_at(cfg.items[a.item], a.summand);
    conts.push_back(s->cont);
    remove = {static_cast<size_t>(a.item)};
  } else {
    Sum o = summand_at(cfg.items[a.out_item], a.out_summand);
    Sum i = summand_at(cfg.items[a.in_item], a.in_summand);
    conts.push_back(o->cont);
    conts.push_back(subst_proc(i->cont, o->message, 0));
    remove = {static_cast<size_t>(a.out_item), static_cast<size_t>(a.in_item)};
  }
  std::sort(remove.begin(), remove.end(), std::greater<size_t>());
  for (size_t r : remove) out.items.erase(out.items.begin() + r);
  for (const auto& c : conts) {
    Config sub;
    sub.rates = out.rates;
    sub.fresh_counter = out.fresh_counter;
    open_into(e, c, sub);
    out.rates = sub.rates;
    out.fresh_counter = sub.fresh_counter;
    for (const auto& s : sub.items) out.items.push_back(s);
    for (const auto& o : sub.opened) out.opened.push_back(o);
  }
  return out;
}

std::vector<std::pair<Event, Process>> step(const Env& e, const RateTable& rates,
                                            const Process& p) {
  Config cfg = expand_config(e, open_config(e, rates, p));
  std::vector<std::pair<Event, Process>> out;
  for (const auto& a : enabled_actions(e, cfg)) {
    Config next = apply_action(e, cfg, a);
    // re-bind the channels this configuration created
    Process body = pr_nil();
    if (!next.items.empty()) {
      body = next.items.back();
      for (int i = static_cast<int>(next.items.size()) - 2; i >= 0; --i)
        body = pr_par(next.items[i], body);
    }
    for (int i = static_cast<int>(next.opened.size()) - 1; i >= 0; --i) {
      const std::string& sym = next.opened[i];
      body = pr_nu(next.rates.at(sym), abstract_marker(body, sym, 0));
    }
    out.emplace_back(a.event(), body);
  }
  return out;
}

bool event_equal(const Event& a, const Event& b) {
  if (a.kind != b.kind || a.rate != b.rate) return false;
  if (a.kind == Event::Kind::Synchronize)
    return a.channel == b.channel && a.message == b.message;
  return true;
}

std::string to_string(const Event& e) {
  if (e.kind == Event::Kind::Internal) return "tau @ " + hyll::to_string(e.rate);
  return "sync " + hyll::to_string(e.channel) + "(" + hyll::to_string(e.message) + ") @ " +
         hyll::to_string(e.rate);
}

World trace_world(const Trace& t, size_t k) {
  std::vector<Rational> rs;
  for (size_t i = 0; i < k && i < t.events.size(); ++i) rs.push_back(t.events[i].rate);
  return World::rate_list(std::move(rs));
}

std::vector<Config> replay(const Env& e, const RateTable& rates, const Trace& t) {
  std::vector<Config> states;
  Config cfg = expand_config(e, open_config(e, rates, t.initial));
  states.push_back(cfg);
  for (size_t k = 0; k < t.events.size(); ++k) {
    auto actions = enabled_actions(e, cfg);
    const EnabledAction* chosen = nullptr;
    for (const auto& a : actions) {
      if (event_equal(a.event(), t.events[k])) {
        chosen = &a;
        break;
      }
    }
    if (!chosen)
      throw SpiError("trace does not replay at step " + std::to_string(k) + ": " +
                     to_string(t.events[k]));
    cfg = expand_config(e, apply_action(e, cfg, *chosen));
    states.push_back(cfg);
  }
  return states;
}

}  // namespace hyll::spi
