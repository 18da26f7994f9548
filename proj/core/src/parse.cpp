#include "hyll/parse.hpp"

#include <algorithm>
#include <cctype>

namespace hyll {

namespace {

enum class Tok {
  End, Ident, Number, Param, Symbol,
  LParen, RParen, LBracket, RBracket, Comma, Dot, Colon, At, Bang, Star, Plus, Amp,
  Limp, Quest, OutBang, Pipe, Equals, Semi
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Rational number;
  int line = 1, col = 1;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;
  std::vector<Token> tokens;

  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col); }

  void advance(size_t n) {
    for (size_t i = 0; i < n && pos < src.size(); ++i, ++pos) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  }

  void push(Tok kind, std::string text, int l, int c) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = l;
    t.col = c;
    tokens.push_back(std::move(t));
  }

  void run() {
    while (pos < src.size()) {
      char ch = src[pos];
      int l = line, c = col;
      if (ch == '#' && pos + 2 < src.size() && (src[pos + 1] == 'c' || src[pos + 1] == 'b') &&
          isdigit(static_cast<unsigned char>(src[pos + 2]))) {
        // machine-generated symbol like #c0 or #b1_2
        size_t j = pos + 1;
        while (j < src.size() && (isalnum(src[j]) || src[j] == '_')) ++j;
        push(Tok::Symbol, src.substr(pos, j - pos), l, c);
        advance(j - pos);
        continue;
      }
      if (ch == '#' || (ch == '/' && pos + 1 < src.size() && src[pos + 1] == '/')) {
        while (pos < src.size() && src[pos] != '\n') advance(1);
        continue;
      }
      if (isspace(static_cast<unsigned char>(ch))) {
        advance(1);
        continue;
      }
      if (ch == '$') {
        size_t j = pos + 1;
        while (j < src.size() && (isalnum(src[j]) || src[j] == '_')) ++j;
        push(Tok::Param, src.substr(pos, j - pos), l, c);
        advance(j - pos);
        continue;
      }
      if (isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        size_t j = pos;
        while (j < src.size() && (isalnum(src[j]) || src[j] == '_' || src[j] == '\'')) ++j;
        push(Tok::Ident, src.substr(pos, j - pos), l, c);
        advance(j - pos);
        continue;
      }
      if (isdigit(static_cast<unsigned char>(ch))) {
        size_t j = pos;
        while (j < src.size() && isdigit(static_cast<unsigned char>(src[j]))) ++j;
        if (j < src.size() && src[j] == '/' && j + 1 < src.size() &&
            isdigit(static_cast<unsigned char>(src[j + 1]))) {
          ++j;
          while (j < src.size() && isdigit(static_cast<unsigned char>(src[j]))) ++j;
        } else if (j < src.size() && src[j] == '.' && j + 1 < src.size() &&
                   isdigit(static_cast<unsigned char>(src[j + 1]))) {
          ++j;
          while (j < src.size() && isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
        std::string text = src.substr(pos, j - pos);
        auto r = parse_rational(text);
        if (!r) fail("bad rational literal " + text);
        Token t;
        t.kind = Tok::Number;
        t.text = text;
        t.number = *r;
        t.line = l;
        t.col = c;
        tokens.push_back(std::move(t));
        advance(j - pos);
        continue;
      }
      if (ch == '-' && pos + 1 < src.size() && src[pos + 1] == 'o') {
        push(Tok::Limp, "-o", l, c);
        advance(2);
        continue;
      }
      switch (ch) {
        case '(': push(Tok::LParen, "(", l, c); break;
        case ')': push(Tok::RParen, ")", l, c); break;
        case '[': push(Tok::LBracket, "[", l, c); break;
        case ']': push(Tok::RBracket, "]", l, c); break;
        case ',': push(Tok::Comma, ",", l, c); break;
        case '.': push(Tok::Dot, ".", l, c); break;
        case ':': push(Tok::Colon, ":", l, c); break;
        case '@': push(Tok::At, "@", l, c); break;
        case '!': push(Tok::Bang, "!", l, c); break;
        case '*': push(Tok::Star, "*", l, c); break;
        case '+': push(Tok::Plus, "+", l, c); break;
        case '&': push(Tok::Amp, "&", l, c); break;
        case '?': push(Tok::Quest, "?", l, c); break;
        case '|': push(Tok::Pipe, "|", l, c); break;
        case '=': push(Tok::Equals, "=", l, c); break;
        case ';': push(Tok::Semi, ";", l, c); break;
        default: fail(std::string("unexpected character '") + ch + "'");
      }
      advance(1);
    }
    push(Tok::End, "", line, col);
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t at = 0;
  const Signature* sig = nullptr;
  std::vector<std::string>* wparams = nullptr;  // free world variable names
  std::vector<std::string> tbinders;            // innermost last
  std::vector<std::string> wbinders;

  explicit Parser(const std::string& text) {
    Lexer lx(text);
    lx.run();
    toks = std::move(lx.tokens);
  }

  const Token& peek(int k = 0) const { return toks[std::min(at + k, toks.size() - 1)]; }
  const Token& next() { return toks[at >= toks.size() - 1 ? toks.size() - 1 : at++]; }
  bool accept(Tok k) {
    if (peek().kind == k) {
      ++at;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " (got '" + peek().text + "')", peek().line, peek().col);
  }
  Token expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail("expected " + what);
    return next();
  }

  int term_index(const std::string& name) const {
    for (int i = static_cast<int>(tbinders.size()) - 1; i >= 0; --i)
      if (tbinders[i] == name) return static_cast<int>(tbinders.size()) - 1 - i;
    return -1;
  }
  int world_index(const std::string& name) const {
    for (int i = static_cast<int>(wbinders.size()) - 1; i >= 0; --i)
      if (wbinders[i] == name) return static_cast<int>(wbinders.size()) - 1 - i;
    return -1;
  }

  // ---- terms ---------------------------------------------------------------

  Term parse_term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        next();
        return Term::rate(t.number);
      }
      case Tok::Param: {
        next();
        if (t.text.size() > 2 && t.text[1] == 't')
          return Term::param(std::stoi(t.text.substr(2)));
        fail("unknown parameter " + t.text);
      }
      case Tok::Symbol: {
        next();
        return Term::fn(t.text);
      }
      case Tok::Ident: {
        next();
        int ix = term_index(t.text);
        if (ix >= 0) return Term::var(ix);
        std::vector<Term> args;
        if (accept(Tok::LParen)) {
          if (!accept(Tok::RParen)) {
            do args.push_back(parse_term());
            while (accept(Tok::Comma));
            expect(Tok::RParen, "')'");
          }
        }
        return Term::fn(t.text, std::move(args));
      }
      default: fail("expected a term");
    }
  }

  // ---- worlds --------------------------------------------------------------

  WorldExpr parse_world_factor() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        next();
        return w_lit(World::time_point(t.number));
      }
      case Tok::LBracket: {
        next();
        std::vector<Rational> rs;
        if (!accept(Tok::RBracket)) {
          do {
            Token n = expect(Tok::Number, "a rate constant");
            rs.push_back(n.number);
          } while (accept(Tok::Comma));
          expect(Tok::RBracket, "']'");
        }
        return w_lit(World::rate_list(std::move(rs)));
      }
      case Tok::Param: {
        next();
        if (t.text.size() > 2 && t.text[1] == 'w')
          return w_param(std::stoi(t.text.substr(2)));
        fail("unknown world parameter " + t.text);
      }
      case Tok::Ident: {
        if (t.text == "id") {
          next();
          return w_identity();
        }
        if (t.text == "rate") {
          next();
          expect(Tok::LParen, "'('");
          Term inner = parse_term();
          expect(Tok::RParen, "')'");
          return w_rate_ref(inner);
        }
        next();
        int ix = world_index(t.text);
        if (ix >= 0) return w_bvar(ix);
        if (wparams) {
          auto it = std::find(wparams->begin(), wparams->end(), t.text);
          size_t level = it == wparams->end() ? wparams->size() : it - wparams->begin();
          if (it == wparams->end()) wparams->push_back(t.text);
          return w_param(static_cast<int>(level));
        }
        return w_var(t.text);
      }
      case Tok::LParen: {
        next();
        WorldExpr w = parse_world_expr();
        expect(Tok::RParen, "')'");
        return w;
      }
      default: fail("expected a world");
    }
  }

  WorldExpr parse_world_expr() {
    WorldExpr w = parse_world_factor();
    while (peek().kind == Tok::Dot) {
      next();
      w = w_compose(std::move(w), parse_world_factor());
    }
    return w;
  }

  // ---- propositions -----------------------------------------------------------

  // precedence: ! (5) > * (4) > + (3) > & (2) > -o (1, right); binders 0
  Prop parse_prop_at(int min_prec) {
    Prop lhs = parse_prop_head(min_prec);
    for (;;) {
      Tok k = peek().kind;
      // all binary connectives associate to the right
      if (k == Tok::Star && min_prec <= 4) {
        next();
        lhs = p_tensor(std::move(lhs), parse_prop_at(4));
      } else if (k == Tok::Plus && min_prec <= 3) {
        next();
        lhs = p_oplus(std::move(lhs), parse_prop_at(3));
      } else if (k == Tok::Amp && min_prec <= 2) {
        next();
        lhs = p_with(std::move(lhs), parse_prop_at(2));
      } else if (k == Tok::Limp && min_prec <= 1) {
        next();
        lhs = p_limp(std::move(lhs), parse_prop_at(1));
      } else {
        return lhs;
      }
    }
  }

  Prop parse_binder(PropTag tag, bool world_binder) {
    Token name = expect(Tok::Ident, "a binder name");
    expect(Tok::Dot, "'.'");
    if (world_binder) wbinders.push_back(name.text);
    else tbinders.push_back(name.text);
    Prop body = parse_prop_at(0);
    if (world_binder) wbinders.pop_back();
    else tbinders.pop_back();
    PropNode n{tag};
    n.left = std::move(body);
    return std::make_shared<const PropNode>(std::move(n));
  }

  Prop parse_prop_head(int min_prec) {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        if (t.number == Rational(1)) {
          next();
          return p_one();
        }
        if (t.number == Rational(0)) {
          next();
          return p_zero();
        }
        fail("a number is not a proposition");
      case Tok::Bang: {
        next();
        return p_bang(parse_prop_at(5));
      }
      case Tok::LParen: {
        next();
        Prop inner = parse_prop_at(0);
        if (peek().kind == Tok::Ident && peek().text == "at") {
          next();
          WorldExpr w = parse_world_expr();
          expect(Tok::RParen, "')'");
          return p_at(std::move(inner), std::move(w));
        }
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: {
        const std::string& w = t.text;
        if (w == "top") {
          next();
          return p_top();
        }
        if (w == "fa") {
          next();
          return parse_binder(PropTag::ForallT, false);
        }
        if (w == "ex") {
          next();
          return parse_binder(PropTag::ExistsT, false);
        }
        if (w == "faw") {
          next();
          return parse_binder(PropTag::ForallW, true);
        }
        if (w == "exw") {
          next();
          return parse_binder(PropTag::ExistsW, true);
        }
        if (w == "dn") {
          next();
          return parse_binder(PropTag::Down, true);
        }
        if (w == "pos" || w == "neg") fail("polarized syntax is not accepted in goals");
        next();
        std::vector<Term> args;
        if (accept(Tok::LParen)) {
          if (!accept(Tok::RParen)) {
            do args.push_back(parse_term());
            while (accept(Tok::Comma));
            expect(Tok::RParen, "')'");
          }
        }
        bool positive = sig && sig->is_positive(w);
        return p_atom(positive, w, std::move(args));
      }
      default: fail("expected a proposition");
    }
    (void)min_prec;
  }

  // ---- processes ------------------------------------------------------------

  spi::Process parse_process_at(int min_prec) {
    spi::Process lhs = parse_process_head();
    for (;;) {
      if (peek().kind == Tok::Pipe && min_prec <= 0) {
        next();
        lhs = spi::pr_par(std::move(lhs), parse_process_at(1));
      } else {
        return lhs;
      }
    }
  }

  spi::Sum parse_sum_tail(spi::Sum first) {
    while (peek().kind == Tok::Plus) {
      next();
      spi::Sum rhs = parse_prefix();
      first = spi::sm_plus(std::move(first), std::move(rhs));
    }
    return first;
  }

  spi::Sum parse_prefix() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      next();
      spi::Sum inner = parse_prefix();
      inner = parse_sum_tail(std::move(inner));
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind != Tok::Ident && t.kind != Tok::Symbol) fail("expected an action prefix");
    if (t.text == "tau") {
      next();
      expect(Tok::LParen, "'('");
      Token r = expect(Tok::Number, "a rate");
      expect(Tok::RParen, "')'");
      expect(Tok::Dot, "'.'");
      spi::Process cont = parse_process_head();
      return spi::sm_tau(r.number, std::move(cont));
    }
    Term chan = parse_term_channel();
    if (accept(Tok::Bang)) {
      expect(Tok::LParen, "'('");
      Term msg = parse_term_channel();
      expect(Tok::RParen, "')'");
      expect(Tok::Dot, "'.'");
      spi::Process cont = parse_process_head();
      return spi::sm_out(std::move(chan), std::move(msg), std::move(cont));
    }
    if (accept(Tok::Quest)) {
      expect(Tok::LParen, "'('");
      Token y = expect(Tok::Ident, "a binder name");
      expect(Tok::RParen, "')'");
      expect(Tok::Dot, "'.'");
      tbinders.push_back(y.text);
      spi::Process cont = parse_process_head();
      tbinders.pop_back();
      return spi::sm_in(std::move(chan), std::move(cont));
    }
    fail("expected '!' or '?' after a channel");
  }

  Term parse_term_channel() {
    const Token& t = peek();
    if (t.kind == Tok::Symbol) {
      next();
      return Term::fn(t.text);
    }
    Token name = expect(Tok::Ident, "a channel");
    int ix = term_index(name.text);
    if (ix >= 0) return Term::var(ix);
    return Term::fn(name.text);
  }

  spi::Process parse_process_head() {
    const Token& t = peek();
    if (t.kind == Tok::Number && t.number == Rational(0)) {
      next();
      return spi::pr_nil();
    }
    if (t.kind == Tok::LParen) {
      next();
      spi::Process p = parse_process_at(0);
      expect(Tok::RParen, "')'");
      return p;
    }
    if (t.kind == Tok::Ident && t.text == "new") {
      next();
      expect(Tok::LParen, "'('");
      Token r = expect(Tok::Number, "a rate");
      expect(Tok::RParen, "')'");
      Token x = expect(Tok::Ident, "a channel name");
      Token in = expect(Tok::Ident, "'in'");
      if (in.text != "in") fail("expected 'in'");
      tbinders.push_back(x.text);
      spi::Process body = parse_process_at(0);  // the binder extends right
      tbinders.pop_back();
      return spi::pr_nu(r.number, std::move(body));
    }
    if (t.kind == Tok::Ident || t.kind == Tok::Symbol) {
      // a call X(...) or a prefix x!/x?/tau
      if (t.kind == Tok::Ident && t.text != "tau" && peek(1).kind == Tok::LParen &&
          term_index(t.text) < 0) {
        // look ahead: call arguments end with ')' not followed by '.',
        // while tau(r). and x!(m). continue with a dot; calls are the
        // only ident-plus-parens form here
        // find the matching paren
        size_t depth = 0, j = at + 1;
        for (; j < toks.size(); ++j) {
          if (toks[j].kind == Tok::LParen) ++depth;
          else if (toks[j].kind == Tok::RParen && --depth == 0) break;
        }
        bool is_call = j + 1 < toks.size() && toks[j + 1].kind != Tok::Dot;
        if (is_call) {
          Token name = next();
          expect(Tok::LParen, "'('");
          std::vector<Term> args;
          if (!accept(Tok::RParen)) {
            do args.push_back(parse_term_channel());
            while (accept(Tok::Comma));
            expect(Tok::RParen, "')'");
          }
          return spi::pr_call(name.text, std::move(args));
        }
      }
      spi::Sum first = parse_prefix();
      return spi::pr_sum(parse_sum_tail(std::move(first)));
    }
    fail("expected a process");
  }
};

}  // namespace

WorldExpr parse_world(const std::string& text) {
  Parser p(text);
  WorldExpr w = p.parse_world_expr();
  if (p.peek().kind != Tok::End) p.fail("trailing input after world");
  return w;
}

Prop parse_prop(const std::string& text, const Signature& sig,
                std::vector<std::string>* wparams) {
  Parser p(text);
  p.sig = &sig;
  p.wparams = wparams;
  Prop out = p.parse_prop_at(0);
  if (p.peek().kind != Tok::End) p.fail("trailing input after proposition");
  return out;
}

GoalFile parse_goal_file(const std::string& text) {
  GoalFile out;
  bool have_goal = false;
  size_t start = 0;
  int lineno = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    ++lineno;
    start = end + 1;

    auto strip = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      size_t b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;

    auto word = [&](const std::string& kw) {
      return line.rfind(kw + " ", 0) == 0 ? line.substr(kw.size() + 1) : std::string();
    };

    if (std::string rest = word("domain"); !rest.empty()) {
      auto d = domain_from_name(strip(rest));
      if (!d) throw ParseError("unknown domain " + rest, lineno, 1);
      out.domain = *d;
      out.domain_set = true;
      continue;
    }
    if (std::string rest = word("atom"); !rest.empty()) {
      size_t colon = rest.find(':');
      if (colon == std::string::npos) throw ParseError("expected 'atom p : pos|neg'", lineno, 1);
      std::string name = strip(rest.substr(0, colon));
      std::string pol = strip(rest.substr(colon + 1));
      if (pol != "pos" && pol != "neg") throw ParseError("polarity must be pos or neg", lineno, 1);
      out.sig.positive[name] = pol == "pos";
      continue;
    }

    auto parse_judgement = [&](const std::string& body) {
      // split at the last top-level '@'
      int depth = 0;
      size_t split = std::string::npos;
      for (size_t i = 0; i < body.size(); ++i) {
        char c2 = body[i];
        if (c2 == '(' || c2 == '[') ++depth;
        else if (c2 == ')' || c2 == ']') --depth;
        else if (c2 == '@' && depth == 0) split = i;
      }
      if (split == std::string::npos)
        throw ParseError("expected 'A @ w'", lineno, 1);
      Prop a = parse_prop(strip(body.substr(0, split)), out.sig, &out.world_params);
      Parser wp(strip(body.substr(split + 1)));
      wp.wparams = &out.world_params;
      WorldExpr w = wp.parse_world_expr();
      if (wp.peek().kind != Tok::End) wp.fail("trailing input after world");
      return Judgement{std::move(a), std::move(w)};
    };

    if (std::string rest = word("gamma"); !rest.empty()) {
      out.sequent.gamma.push_back(parse_judgement(rest));
      continue;
    }
    if (std::string rest = word("delta"); !rest.empty()) {
      out.sequent.delta.push_back(parse_judgement(rest));
      continue;
    }
    if (std::string rest = word("goal"); !rest.empty()) {
      out.sequent.goal = parse_judgement(rest);
      have_goal = true;
      continue;
    }
    throw ParseError("unknown directive: " + line, lineno, 1);
  }
  if (!have_goal) throw ParseError("goal file has no goal", lineno, 1);
  out.sequent.domain = out.domain;
  int tmax = -1, wmax = -1;
  for (const auto& j : out.sequent.gamma) max_prop_params(j.prop, tmax, wmax);
  for (const auto& j : out.sequent.delta) max_prop_params(j.prop, tmax, wmax);
  max_prop_params(out.sequent.goal.prop, tmax, wmax);
  out.sequent.tscope = tmax + 1;
  out.sequent.wscope = std::max(static_cast<int>(out.world_params.size()), wmax + 1);
  return out;
}

spi::Process parse_process(const std::string& text) {
  Parser p(text);
  spi::Process out = p.parse_process_at(0);
  if (p.peek().kind != Tok::End) p.fail("trailing input after process");
  return out;
}

SpiFile parse_spi_file(const std::string& text) {
  SpiFile out;
  size_t start = 0;
  int lineno = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    ++lineno;
    start = end + 1;

    auto strip = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      size_t b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;

    if (line.rfind("channel ", 0) == 0) {
      std::string rest = line.substr(8);
      size_t colon = rest.find(':');
      if (colon == std::string::npos)
        throw ParseError("expected 'channel x : r'", lineno, 1);
      std::string name = strip(rest.substr(0, colon));
      auto r = parse_rational(strip(rest.substr(colon + 1)));
      if (!r || *r <= Rational(0))
        throw ParseError("channel rate must be a positive rational", lineno, 1);
      if (spi::reserved_atom(name))
        throw ParseError("reserved name: " + name, lineno, 1);
      out.rates[name] = *r;
      continue;
    }
    if (line.rfind("def ", 0) == 0) {
      size_t eq = line.find('=');
      if (eq == std::string::npos) throw ParseError("expected 'def X(...) = P'", lineno, 1);
      std::string head = strip(line.substr(4, eq - 4));
      std::string body = strip(line.substr(eq + 1));
      size_t lp = head.find('(');
      std::string name = strip(lp == std::string::npos ? head : head.substr(0, lp));
      if (spi::reserved_atom(name)) throw ParseError("reserved name: " + name, lineno, 1);
      std::vector<std::string> params;
      if (lp != std::string::npos) {
        size_t rp = head.find(')', lp);
        if (rp == std::string::npos) throw ParseError("unclosed parameter list", lineno, 1);
        std::string inside = head.substr(lp + 1, rp - lp - 1);
        size_t q = 0;
        while (q < inside.size()) {
          size_t comma = inside.find(',', q);
          if (comma == std::string::npos) comma = inside.size();
          std::string pn = strip(inside.substr(q, comma - q));
          if (!pn.empty()) params.push_back(pn);
          q = comma + 1;
        }
      }
      Parser bp(body);
      for (const auto& pn : params) bp.tbinders.push_back(pn);
      spi::Process b = bp.parse_process_at(0);
      if (bp.peek().kind != Tok::End) bp.fail("trailing input after definition body");
      out.env.defs[name] = {static_cast<int>(params.size()), std::move(b)};
      continue;
    }
    if (line.rfind("run ", 0) == 0) {
      out.run = parse_process(strip(line.substr(4)));
      out.has_run = true;
      continue;
    }
    throw ParseError("unknown directive: " + line, lineno, 1);
  }
  if (!out.has_run) throw ParseError("process file has no 'run'", lineno, 1);
  spi::validate_env(out.env);
  return out;
}

}  // namespace hyll
