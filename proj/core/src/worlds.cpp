#include "hyll/worlds.hpp"

#include <algorithm>
#include <sstream>

#include "hyll/terms.hpp"

namespace hyll {

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << '/' << r.denominator();
  return os.str();
}

std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto slash = text.find('/');
  auto dot = text.find('.');
  try {
    if (slash != std::string::npos) {
      std::int64_t num = std::stoll(text.substr(0, slash));
      std::int64_t den = std::stoll(text.substr(slash + 1));
      if (den == 0) return std::nullopt;
      return Rational(num, den);
    }
    if (dot != std::string::npos) {
      std::string whole = text.substr(0, dot);
      std::string frac = text.substr(dot + 1);
      if (frac.empty() && whole.empty()) return std::nullopt;
      std::int64_t w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
      bool negative = !whole.empty() && whole[0] == '-';
      std::int64_t den = 1, num = 0;
      for (char c : frac) {
        if (c < '0' || c > '9') return std::nullopt;
        num = num * 10 + (c - '0');
        den *= 10;
      }
      Rational r = Rational(w) + (negative ? -Rational(num, den) : Rational(num, den));
      return r;
    }
    return Rational(std::stoll(text));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

const char* domain_name(Domain d) {
  switch (d) {
    case Domain::Unit: return "unit";
    case Domain::Temporal: return "temporal";
    case Domain::Rates: return "rates";
  }
  return "?";
}

std::optional<Domain> domain_from_name(const std::string& name) {
  if (name == "unit") return Domain::Unit;
  if (name == "temporal") return Domain::Temporal;
  if (name == "rates") return Domain::Rates;
  return std::nullopt;
}

World World::time_point(Rational t) {
  if (t < Rational(0)) throw std::invalid_argument("temporal world must be nonnegative");
  World w;
  w.domain_ = Domain::Temporal;
  w.time_ = t;
  return w;
}

World World::rate_list(std::vector<Rational> rs) {
  for (const auto& r : rs)
    if (r <= Rational(0)) throw std::invalid_argument("rate constants must be positive");
  World w;
  w.domain_ = Domain::Rates;
  w.rates_ = std::move(rs);
  return w;
}

World World::identity(Domain d) {
  switch (d) {
    case Domain::Unit: return World::unit();
    case Domain::Temporal: return World::time_point(Rational(0));
    case Domain::Rates: return World::rate_list({});
  }
  return World::unit();
}

bool World::is_identity() const {
  switch (domain_) {
    case Domain::Unit: return true;
    case Domain::Temporal: return time_ == Rational(0);
    case Domain::Rates: return rates_.empty();
  }
  return true;
}

bool operator==(const World& a, const World& b) {
  if (a.domain_ != b.domain_) return false;
  switch (a.domain_) {
    case Domain::Unit: return true;
    case Domain::Temporal: return a.time_ == b.time_;
    case Domain::Rates: return a.rates_ == b.rates_;
  }
  return false;
}

bool operator<(const World& a, const World& b) {
  if (a.domain_ != b.domain_) return a.domain_ < b.domain_;
  switch (a.domain_) {
    case Domain::Unit: return false;
    case Domain::Temporal: return a.time_ < b.time_;
    case Domain::Rates: return a.rates_ < b.rates_;
  }
  return false;
}

static void require_same_domain(const World& u, const World& v, const char* op) {
  if (u.domain() != v.domain())
    throw DomainMismatch(std::string("cross-domain ") + op + ": " + domain_name(u.domain()) +
                         " vs " + domain_name(v.domain()));
}

World compose(const World& u, const World& v) {
  require_same_domain(u, v, "composition");
  switch (u.domain()) {
    case Domain::Unit: return World::unit();
    case Domain::Temporal: return World::time_point(u.time() + v.time());
    case Domain::Rates: {
      std::vector<Rational> rs = u.rates();
      rs.insert(rs.end(), v.rates().begin(), v.rates().end());
      return World::rate_list(std::move(rs));
    }
  }
  return World::unit();
}

std::optional<World> reaches(const World& u, const World& w) {
  require_same_domain(u, w, "reachability");
  switch (u.domain()) {
    case Domain::Unit: return World::unit();
    case Domain::Temporal: {
      if (w.time() < u.time()) return std::nullopt;
      return World::time_point(w.time() - u.time());
    }
    case Domain::Rates: {
      const auto& a = u.rates();
      const auto& b = w.rates();
      if (a.size() > b.size()) return std::nullopt;
      if (!std::equal(a.begin(), a.end(), b.begin())) return std::nullopt;
      return World::rate_list(std::vector<Rational>(b.begin() + a.size(), b.end()));
    }
  }
  return std::nullopt;
}

// --- expressions -------------------------------------------------------

static WorldExpr mk(WorldNode n) { return std::make_shared<const WorldNode>(std::move(n)); }

WorldExpr w_identity() {
  static WorldExpr id = mk({WorldTag::Identity});
  return id;
}

WorldExpr w_lit(World w) {
  WorldNode n{WorldTag::Lit};
  n.lit = std::move(w);
  return mk(std::move(n));
}

WorldExpr w_var(const std::string& name) {
  WorldNode n{WorldTag::Var};
  n.name = name;
  return mk(std::move(n));
}

WorldExpr w_bvar(int index) {
  WorldNode n{WorldTag::BVar};
  n.index = index;
  return mk(std::move(n));
}

WorldExpr w_param(int level) {
  WorldNode n{WorldTag::Param};
  n.index = level;
  return mk(std::move(n));
}

WorldExpr w_compose(WorldExpr a, WorldExpr b) {
  WorldNode n{WorldTag::Compose};
  n.left = std::move(a);
  n.right = std::move(b);
  return mk(std::move(n));
}

WorldExpr w_rate_ref(const Term& t) {
  if (t->tag == TermTag::RateLit) return w_lit(World::rate_list({t->rate}));
  WorldNode n{WorldTag::RateRef};
  n.rate_term = std::make_shared<const Term>(t);
  return mk(std::move(n));
}

WorldExpr w_rate(const Rational& r) { return w_lit(World::rate_list({r})); }

World eval(const WorldExpr& e, const WorldEnv& env, Domain domain) {
  switch (e->tag) {
    case WorldTag::Identity: return World::identity(domain);
    case WorldTag::Lit:
      if (e->lit.domain() != domain && !(e->lit.domain() == Domain::Unit && e->lit.is_identity()))
        throw DomainMismatch("world literal from a different domain");
      return e->lit;
    case WorldTag::Var: {
      auto it = env.find(e->name);
      if (it == env.end()) throw std::runtime_error("unbound world variable: " + e->name);
      return it->second;
    }
    case WorldTag::BVar: throw std::runtime_error("cannot evaluate bound world variable");
    case WorldTag::Param: throw std::runtime_error("cannot evaluate world parameter");
    case WorldTag::Compose:
      return compose(eval(e->left, env, domain), eval(e->right, env, domain));
    case WorldTag::RateRef: {
      const Term& t = *e->rate_term;
      if (t->tag == TermTag::RateLit) return World::rate_list({t->rate});
      throw std::runtime_error("cannot evaluate rate reference on non-literal term");
    }
  }
  throw std::logic_error("unreachable");
}

bool world_expr_closed(const WorldExpr& e) {
  switch (e->tag) {
    case WorldTag::Identity:
    case WorldTag::Lit: return true;
    case WorldTag::Var:
    case WorldTag::BVar:
    case WorldTag::Param: return false;
    case WorldTag::Compose: return world_expr_closed(e->left) && world_expr_closed(e->right);
    case WorldTag::RateRef: return (*e->rate_term)->tag == TermTag::RateLit;
  }
  return false;
}

// --- matching ----------------------------------------------------------

static void flatten(const WorldExpr& e, std::vector<WorldExpr>& out) {
  if (e->tag == WorldTag::Compose) {
    flatten(e->left, out);
    flatten(e->right, out);
  } else if (e->tag != WorldTag::Identity) {
    out.push_back(e);
  }
}

std::optional<WorldEnv> match_world(const WorldExpr& pattern, const World& target,
                                    const WorldEnv& env, Domain domain) {
  std::vector<WorldExpr> leaves;
  flatten(pattern, leaves);

  // locate the single unbound variable, if any
  int open = -1;
  for (size_t i = 0; i < leaves.size(); ++i) {
    const auto& l = leaves[i];
    if (l->tag == WorldTag::Var && !env.count(l->name)) {
      if (open >= 0) return std::nullopt;  // two unknowns: outside the fragment
      open = static_cast<int>(i);
    } else if (l->tag == WorldTag::BVar || l->tag == WorldTag::Param) {
      return std::nullopt;
    }
  }
  if (open >= 0 && open != static_cast<int>(leaves.size()) - 1)
    return std::nullopt;  // unknown must be the rightmost factor

  World prefix = World::identity(domain);
  for (size_t i = 0; i + (open >= 0 ? 1 : 0) < leaves.size(); ++i)
    prefix = compose(prefix, eval(leaves[i], env, domain));

  if (open < 0) {
    if (prefix == target) return env;
    return std::nullopt;
  }
  auto residual = reaches(prefix, target);
  if (!residual) return std::nullopt;
  WorldEnv out = env;
  out.emplace(leaves.back()->name, *residual);
  return out;
}

// --- normal forms ------------------------------------------------------

bool operator==(const WorldFactor& a, const WorldFactor& b) {
  if (a.concrete != b.concrete) return false;
  if (a.concrete) return a.value == b.value;
  return a.tag == b.tag && a.index == b.index && a.name == b.name && a.rate_key == b.rate_key;
}

bool operator<(const WorldFactor& a, const WorldFactor& b) {
  if (a.concrete != b.concrete) return a.concrete < b.concrete;
  if (a.concrete) return a.value < b.value;
  if (a.tag != b.tag) return a.tag < b.tag;
  if (a.index != b.index) return a.index < b.index;
  if (a.name != b.name) return a.name < b.name;
  return a.rate_key < b.rate_key;
}

bool operator==(const WorldNF& a, const WorldNF& b) {
  return a.domain == b.domain && a.factors == b.factors;
}

bool operator<(const WorldNF& a, const WorldNF& b) {
  if (a.domain != b.domain) return a.domain < b.domain;
  return a.factors < b.factors;
}

static WorldFactor concrete_factor(World w) {
  WorldFactor f;
  f.concrete = true;
  f.value = std::move(w);
  return f;
}

static void nf_collect(const WorldExpr& e, Domain domain, std::vector<WorldFactor>& out) {
  switch (e->tag) {
    case WorldTag::Identity: return;
    case WorldTag::Lit:
      if (!e->lit.is_identity()) out.push_back(concrete_factor(e->lit));
      return;
    case WorldTag::Compose:
      nf_collect(e->left, domain, out);
      nf_collect(e->right, domain, out);
      return;
    case WorldTag::RateRef: {
      const Term& t = *e->rate_term;
      if (t->tag == TermTag::RateLit) {
        out.push_back(concrete_factor(World::rate_list({t->rate})));
      } else {
        WorldFactor f;
        f.tag = WorldTag::RateRef;
        f.rate_key = to_string(t);
        out.push_back(std::move(f));
      }
      return;
    }
    default: {
      WorldFactor f;
      f.tag = e->tag;
      f.index = e->index;
      f.name = e->name;
      out.push_back(std::move(f));
      return;
    }
  }
}

WorldNF world_nf(const WorldExpr& e, Domain domain) {
  WorldNF nf;
  nf.domain = domain;
  if (domain == Domain::Unit) {
    // one-point monoid: every closed expression is rid; keep nothing
    return nf;
  }
  std::vector<WorldFactor> raw;
  nf_collect(e, domain, raw);
  if (domain == Domain::Temporal) {
    // commutative: fold literals into one leading factor, sort the rest
    World acc = World::identity(domain);
    std::vector<WorldFactor> opaque;
    for (auto& f : raw) {
      if (f.concrete) acc = compose(acc, f.value);
      else opaque.push_back(std::move(f));
    }
    std::sort(opaque.begin(), opaque.end());
    if (!acc.is_identity() || opaque.empty()) nf.factors.push_back(concrete_factor(acc));
    for (auto& f : opaque) nf.factors.push_back(std::move(f));
    return nf;
  }
  // rates: order matters; merge adjacent literal runs
  World acc = World::identity(domain);
  bool have = false;
  for (auto& f : raw) {
    if (f.concrete) {
      acc = compose(acc, f.value);
      have = true;
    } else {
      if (have && !acc.is_identity()) nf.factors.push_back(concrete_factor(acc));
      acc = World::identity(domain);
      have = false;
      nf.factors.push_back(std::move(f));
    }
  }
  if (have && !acc.is_identity()) nf.factors.push_back(concrete_factor(acc));
  return nf;
}

bool world_equal(const WorldExpr& a, const WorldExpr& b, Domain domain) {
  return world_nf(a, domain) == world_nf(b, domain);
}

std::string to_string(const WorldNF& nf) {
  if (nf.factors.empty()) return "id";
  std::ostringstream os;
  bool first = true;
  for (const auto& f : nf.factors) {
    if (!first) os << " . ";
    first = false;
    if (f.concrete) {
      const World& w = f.value;
      switch (w.domain()) {
        case Domain::Unit: os << "id"; break;
        case Domain::Temporal: os << to_string(w.time()); break;
        case Domain::Rates: {
          os << '[';
          for (size_t i = 0; i < w.rates().size(); ++i) {
            if (i) os << ", ";
            os << to_string(w.rates()[i]);
          }
          os << ']';
          break;
        }
      }
    } else {
      switch (f.tag) {
        case WorldTag::Var: os << f.name; break;
        case WorldTag::BVar: os << "`w" << f.index; break;
        case WorldTag::Param: os << "$w" << f.index; break;
        case WorldTag::RateRef: os << "rate(" << f.rate_key << ")"; break;
        default: os << "?"; break;
      }
    }
  }
  return os.str();
}

}  // namespace hyll
