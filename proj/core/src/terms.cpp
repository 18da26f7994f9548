#include "hyll/terms.hpp"

#include <algorithm>
#include <sstream>

namespace hyll {

static Term mk(TermNode n) { return Term(std::make_shared<const TermNode>(std::move(n))); }

Term Term::var(int index) {
  TermNode n{TermTag::Var};
  n.index = index;
  return mk(std::move(n));
}

Term Term::param(int level) {
  TermNode n{TermTag::Param};
  n.index = level;
  return mk(std::move(n));
}

Term Term::fn(std::string symbol, std::vector<Term> args) {
  TermNode n{TermTag::Fn};
  n.symbol = std::move(symbol);
  n.args = std::move(args);
  return mk(std::move(n));
}

Term Term::rate(Rational r) {
  TermNode n{TermTag::RateLit};
  n.rate = std::move(r);
  return mk(std::move(n));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case TermTag::Var:
    case TermTag::Param: return a->index == b->index;
    case TermTag::RateLit: return a->rate == b->rate;
    case TermTag::Fn:
      return a->symbol == b->symbol && a->args.size() == b->args.size() &&
             std::equal(a->args.begin(), a->args.end(), b->args.begin());
  }
  return false;
}

bool operator<(const Term& a, const Term& b) {
  if (a->tag != b->tag) return a->tag < b->tag;
  switch (a->tag) {
    case TermTag::Var:
    case TermTag::Param: return a->index < b->index;
    case TermTag::RateLit: return a->rate < b->rate;
    case TermTag::Fn:
      if (a->symbol != b->symbol) return a->symbol < b->symbol;
      return std::lexicographical_compare(a->args.begin(), a->args.end(), b->args.begin(),
                                          b->args.end());
  }
  return false;
}

template <typename F>
static Term map_term(const Term& t, int depth, F&& f) {
  switch (t->tag) {
    case TermTag::Var:
    case TermTag::Param: return f(t, depth);
    case TermTag::RateLit: return t;
    case TermTag::Fn: {
      std::vector<Term> args;
      args.reserve(t->args.size());
      bool changed = false;
      for (const auto& a : t->args) {
        Term a2 = map_term(a, depth, f);
        changed = changed || !(a2 == a);
        args.push_back(std::move(a2));
      }
      if (!changed) return t;
      return Term::fn(t->symbol, std::move(args));
    }
  }
  return t;
}

Term shift_term(const Term& t, int by, int cutoff) {
  return map_term(t, cutoff, [&](const Term& v, int depth) {
    if (v->tag == TermTag::Var && v->index >= depth) return Term::var(v->index + by);
    return v;
  });
}

Term subst_term_in_term(const Term& t, const Term& image, int depth) {
  return map_term(t, depth, [&](const Term& v, int d) {
    if (v->tag != TermTag::Var) return v;
    if (v->index == d) return shift_term(image, d, 0);
    if (v->index > d) return Term::var(v->index - 1);
    return v;
  });
}

Term subst_param_in_term(const Term& t, int level, const Term& image) {
  return map_term(t, 0, [&](const Term& v, int d) {
    if (v->tag != TermTag::Param) return v;
    if (v->index == level) return shift_term(image, d, 0);
    if (v->index > level) return Term::param(v->index - 1);
    return v;
  });
}

Term shift_params_in_term(const Term& t, int from, int by) {
  return map_term(t, 0, [&](const Term& v, int) {
    if (v->tag == TermTag::Param && v->index >= from) return Term::param(v->index + by);
    return v;
  });
}

bool term_closed(const Term& t, int depth) {
  switch (t->tag) {
    case TermTag::Var: return t->index < depth;
    case TermTag::Param:
    case TermTag::RateLit: return true;
    case TermTag::Fn:
      return std::all_of(t->args.begin(), t->args.end(),
                         [&](const Term& a) { return term_closed(a, depth); });
  }
  return true;
}

int max_term_param(const Term& t) {
  switch (t->tag) {
    case TermTag::Param: return t->index;
    case TermTag::Fn: {
      int m = -1;
      for (const auto& a : t->args) m = std::max(m, max_term_param(a));
      return m;
    }
    default: return -1;
  }
}

void collect_subterms(const Term& t, std::vector<Term>& out) {
  if (term_closed(t, 0) && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  if (t->tag == TermTag::Fn)
    for (const auto& a : t->args) collect_subterms(a, out);
}

std::string to_string(const Term& t) {
  std::ostringstream os;
  switch (t->tag) {
    case TermTag::Var: os << "`x" << t->index; break;
    case TermTag::Param: os << "$t" << t->index; break;
    case TermTag::RateLit: os << to_string(t->rate); break;
    case TermTag::Fn: {
      os << t->symbol;
      if (!t->args.empty()) {
        os << '(';
        for (size_t i = 0; i < t->args.size(); ++i) {
          if (i) os << ", ";
          os << to_string(t->args[i]);
        }
        os << ')';
      }
      break;
    }
  }
  return os.str();
}

}  // namespace hyll
