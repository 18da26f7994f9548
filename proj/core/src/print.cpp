#include "hyll/print.hpp"

#include <sstream>

namespace hyll {

namespace {

// Precedence: ! (5) > * (4) > + (3) > & (2) > -o (1); quantifiers and the
// world binder extend maximally right (0).  (A at w) always parenthesized.

struct Printer {
  bool canonical = false;   // worlds via normal form
  Domain domain = Domain::Unit;
  int tdepth = 0;
  int wdepth = 0;

  std::string term(const Term& t) const {
    std::ostringstream os;
    switch (t->tag) {
      case TermTag::Var: {
        int which = tdepth - 1 - t->index;
        if (which >= 0) os << 'x' << which;
        else os << "`x" << t->index;
        break;
      }
      case TermTag::Param: os << "$t" << t->index; break;
      case TermTag::RateLit: os << to_string(t->rate); break;
      case TermTag::Fn:
        os << t->symbol;
        if (!t->args.empty()) {
          os << '(';
          for (size_t i = 0; i < t->args.size(); ++i) {
            if (i) os << ", ";
            os << term(t->args[i]);
          }
          os << ')';
        }
        break;
    }
    return os.str();
  }

  std::string world(const WorldExpr& e) const {
    if (canonical) return to_string(world_nf(e, domain));
    return world_raw(e);
  }

  std::string world_raw(const WorldExpr& e) const {
    std::ostringstream os;
    switch (e->tag) {
      case WorldTag::Identity: os << "id"; break;
      case WorldTag::Lit: {
        const World& w = e->lit;
        switch (w.domain()) {
          case Domain::Unit: os << "id"; break;
          case Domain::Temporal: os << to_string(w.time()); break;
          case Domain::Rates:
            if (w.rates().empty()) {
              os << "id";
            } else {
              os << '[';
              for (size_t i = 0; i < w.rates().size(); ++i) {
                if (i) os << ", ";
                os << to_string(w.rates()[i]);
              }
              os << ']';
            }
            break;
        }
        break;
      }
      case WorldTag::Var: os << e->name; break;
      case WorldTag::BVar: {
        int which = wdepth - 1 - e->index;
        if (which >= 0) os << 'u' << which;
        else os << "`w" << e->index;
        break;
      }
      case WorldTag::Param: os << "$w" << e->index; break;
      case WorldTag::Compose:
        os << world_raw(e->left) << " . " << world_raw(e->right);
        break;
      case WorldTag::RateRef: os << "rate(" << term(*e->rate_term) << ")"; break;
    }
    return os.str();
  }

  static std::string wrap(const std::string& s, int prec, int min) {
    if (prec < min) return "(" + s + ")";
    return s;
  }

  std::string atom_body(const std::string& pred, const std::vector<Term>& args) const {
    std::ostringstream os;
    os << pred;
    if (!args.empty()) {
      os << '(';
      for (size_t i = 0; i < args.size(); ++i) {
        if (i) os << ", ";
        os << term(args[i]);
      }
      os << ')';
    }
    return os.str();
  }

  std::string prop(const Prop& p, int min) {
    switch (p->tag) {
      case PropTag::Atom: return atom_body(p->pred, p->args);
      case PropTag::One: return "1";
      case PropTag::Zero: return "0";
      case PropTag::Top: return "top";
      case PropTag::Bang: return wrap("!" + prop(p->left, 5), 5, min);
      case PropTag::Tensor:
        return wrap(prop(p->left, 5) + " * " + prop(p->right, 4), 4, min);
      case PropTag::Oplus:
        return wrap(prop(p->left, 4) + " + " + prop(p->right, 3), 3, min);
      case PropTag::With:
        return wrap(prop(p->left, 3) + " & " + prop(p->right, 2), 2, min);
      case PropTag::Limp:
        return wrap(prop(p->left, 2) + " -o " + prop(p->right, 1), 1, min);
      case PropTag::ForallT:
      case PropTag::ExistsT: {
        std::string head = std::string(p->tag == PropTag::ForallT ? "fa x" : "ex x") +
                           std::to_string(tdepth) + ". ";
        ++tdepth;
        std::string body = prop(p->left, 0);
        --tdepth;
        return wrap(head + body, 0, min);
      }
      case PropTag::ForallW:
      case PropTag::ExistsW:
      case PropTag::Down: {
        const char* kw = p->tag == PropTag::ForallW ? "faw u"
                         : p->tag == PropTag::ExistsW ? "exw u"
                                                      : "dn u";
        std::string head = kw + std::to_string(wdepth) + ". ";
        ++wdepth;
        std::string body = prop(p->left, 0);
        --wdepth;
        return wrap(head + body, 0, min);
      }
      case PropTag::At:
        return "(" + prop(p->left, 1) + " at " + world(p->world) + ")";
    }
    return "?";
  }

  std::string pos(const Pos& p, int min) {
    switch (p->tag) {
      case PosTag::Atom: return atom_body(p->pred, p->args);
      case PosTag::One: return "1";
      case PosTag::Zero: return "0";
      case PosTag::Tensor: return wrap(pos(p->a, 5) + " * " + pos(p->b, 4), 4, min);
      case PosTag::Oplus: return wrap(pos(p->a, 4) + " + " + pos(p->b, 3), 3, min);
      case PosTag::Bang: return wrap("!" + neg(p->n, 5), 5, min);
      case PosTag::ExistsT: {
        std::string head = "ex x" + std::to_string(tdepth) + ". ";
        ++tdepth;
        std::string body = pos(p->a, 0);
        --tdepth;
        return wrap(head + body, 0, min);
      }
      case PosTag::ExistsW:
      case PosTag::Down: {
        std::string head = std::string(p->tag == PosTag::ExistsW ? "exw u" : "dn u") +
                           std::to_string(wdepth) + ". ";
        ++wdepth;
        std::string body = pos(p->a, 0);
        --wdepth;
        return wrap(head + body, 0, min);
      }
      case PosTag::At: return "(" + pos(p->a, 1) + " at " + world(p->world) + ")";
      case PosTag::OfNeg: return wrap("pos " + neg(p->n, 5), 5, min);
    }
    return "?";
  }

  std::string neg(const Neg& n, int min) {
    switch (n->tag) {
      case NegTag::Atom: return atom_body(n->pred, n->args);
      case NegTag::Top: return "top";
      case NegTag::With: return wrap(neg(n->a, 3) + " & " + neg(n->b, 2), 2, min);
      case NegTag::Limp: return wrap(pos(n->p, 2) + " -o " + neg(n->a, 1), 1, min);
      case NegTag::ForallT: {
        std::string head = "fa x" + std::to_string(tdepth) + ". ";
        ++tdepth;
        std::string body = neg(n->a, 0);
        --tdepth;
        return wrap(head + body, 0, min);
      }
      case NegTag::ForallW:
      case NegTag::Down: {
        std::string head = std::string(n->tag == NegTag::ForallW ? "faw u" : "dn u") +
                           std::to_string(wdepth) + ". ";
        ++wdepth;
        std::string body = neg(n->a, 0);
        --wdepth;
        return wrap(head + body, 0, min);
      }
      case NegTag::At: return "(" + neg(n->a, 1) + " at " + world(n->world) + ")";
      case NegTag::OfPos: return wrap("neg " + pos(n->p, 5), 5, min);
    }
    return "?";
  }
};

}  // namespace

std::string to_string(const WorldExpr& e) {
  Printer pr;
  return pr.world_raw(e);
}

std::string to_string(const Prop& p) {
  Printer pr;
  return pr.prop(p, 0);
}

std::string to_string(const Pos& p) {
  Printer pr;
  return pr.pos(p, 0);
}

std::string to_string(const Neg& n) {
  Printer pr;
  return pr.neg(n, 0);
}

std::string canonical_prop(const Prop& p, Domain domain) {
  Printer pr;
  pr.canonical = true;
  pr.domain = domain;
  return pr.prop(p, 0);
}

std::string to_string(const Judgement& j) {
  return to_string(j.prop) + " @ " + to_string(j.world);
}

std::string to_string(const Sequent& s) {
  std::ostringstream os;
  for (size_t i = 0; i < s.gamma.size(); ++i) {
    if (i) os << ", ";
    os << to_string(s.gamma[i]);
  }
  os << " ; ";
  for (size_t i = 0; i < s.delta.size(); ++i) {
    if (i) os << ", ";
    os << to_string(s.delta[i]);
  }
  os << " ==> " << to_string(s.goal);
  return os.str();
}

}  // namespace hyll
