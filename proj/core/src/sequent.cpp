#include "hyll/sequent.hpp"

#include <algorithm>
#include <map>

#include "hyll/print.hpp"

namespace hyll {

bool judgement_equal(const Judgement& a, const Judgement& b, Domain domain) {
  return world_equal(a.world, b.world, domain) && prop_equal(a.prop, b.prop, domain);
}

std::string judgement_key(const Judgement& j, Domain domain) {
  return canonical_prop(j.prop, domain) + " @ " + to_string(world_nf(j.world, domain));
}

static std::vector<std::string> sorted_keys(const std::vector<Judgement>& js, Domain domain,
                                            bool dedup) {
  std::vector<std::string> ks;
  ks.reserve(js.size());
  for (const auto& j : js) ks.push_back(judgement_key(j, domain));
  std::sort(ks.begin(), ks.end());
  if (dedup) ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

std::string sequent_key(const Sequent& s) {
  std::string out = "[";
  for (const auto& k : sorted_keys(s.gamma, s.domain, true)) out += k + " ; ";
  out += "] [";
  for (const auto& k : sorted_keys(s.delta, s.domain, false)) out += k + " ; ";
  out += "] ==> " + judgement_key(s.goal, s.domain);
  out += " <" + std::to_string(s.tscope) + "," + std::to_string(s.wscope) + ">";
  return out;
}

bool sequent_equal(const Sequent& a, const Sequent& b) {
  if (a.domain != b.domain || a.tscope != b.tscope || a.wscope != b.wscope) return false;
  return sequent_key(a) == sequent_key(b);
}

bool gamma_member(const std::vector<Judgement>& gamma, const Judgement& j, Domain domain) {
  return std::any_of(gamma.begin(), gamma.end(),
                     [&](const Judgement& g) { return judgement_equal(g, j, domain); });
}

Judgement shift_params_judgement(const Judgement& j, int tfrom, int tby, int wfrom, int wby) {
  return Judgement{shift_params_prop(j.prop, tfrom, tby, wfrom, wby),
                   shift_params_world(j.world, tfrom, tby, wfrom, wby)};
}

// --- parameter canonicalization -----------------------------------------

namespace {
struct Renumber {
  std::map<int, int> tmap, wmap;

  void scan_term(const Term& t) {
    switch (t->tag) {
      case TermTag::Param:
        if (!tmap.count(t->index)) tmap[t->index] = static_cast<int>(tmap.size());
        return;
      case TermTag::Fn:
        for (const auto& a : t->args) scan_term(a);
        return;
      default: return;
    }
  }
  void scan_world(const WorldExpr& e) {
    switch (e->tag) {
      case WorldTag::Param:
        if (!wmap.count(e->index)) wmap[e->index] = static_cast<int>(wmap.size());
        return;
      case WorldTag::Compose:
        scan_world(e->left);
        scan_world(e->right);
        return;
      case WorldTag::RateRef: scan_term(*e->rate_term); return;
      default: return;
    }
  }
  void scan_prop(const Prop& p) {
    switch (p->tag) {
      case PropTag::Atom:
        for (const auto& a : p->args) scan_term(a);
        return;
      case PropTag::One:
      case PropTag::Top:
      case PropTag::Zero: return;
      case PropTag::Tensor:
      case PropTag::Limp:
      case PropTag::With:
      case PropTag::Oplus:
        scan_prop(p->left);
        scan_prop(p->right);
        return;
      case PropTag::At:
        scan_world(p->world);
        scan_prop(p->left);
        return;
      default: scan_prop(p->left); return;
    }
  }
};
}  // namespace

Sequent canonicalize_params(const Sequent& s) {
  Renumber r;
  for (const auto& j : s.delta) {
    r.scan_prop(j.prop);
    r.scan_world(j.world);
  }
  r.scan_prop(s.goal.prop);
  r.scan_world(s.goal.world);
  for (const auto& j : s.gamma) {
    r.scan_prop(j.prop);
    r.scan_world(j.world);
  }

  // Move every old level out of the way, then substitute into canonical
  // slots.  subst_param_* decrements levels above the removed one, so the
  // sources are visited highest first; targets all sit below the offset.
  std::vector<std::pair<int, int>> tpairs(r.tmap.begin(), r.tmap.end());
  std::vector<std::pair<int, int>> wpairs(r.wmap.begin(), r.wmap.end());
  std::sort(tpairs.begin(), tpairs.end(), [](auto& a, auto& b) { return a.first > b.first; });
  std::sort(wpairs.begin(), wpairs.end(), [](auto& a, auto& b) { return a.first > b.first; });

  const int off_t = s.tscope + 16;
  const int off_w = s.wscope + 16;
  auto remap = [&](Judgement j) {
    j = shift_params_judgement(j, 0, off_t, 0, off_w);
    for (const auto& [from, to] : tpairs) {
      j.prop = subst_param_t(j.prop, from + off_t, Term::param(to));
      j.world = subst_param_t_world(j.world, from + off_t, Term::param(to));
    }
    for (const auto& [from, to] : wpairs) {
      j.prop = subst_param_w(j.prop, from + off_w, w_param(to));
      j.world = subst_param_w_world(j.world, from + off_w, w_param(to));
    }
    return j;
  };

  Sequent out = s;
  for (auto& j : out.gamma) j = remap(j);
  for (auto& j : out.delta) j = remap(j);
  out.goal = remap(out.goal);
  out.tscope = static_cast<int>(r.tmap.size());
  out.wscope = static_cast<int>(r.wmap.size());
  return out;
}

}  // namespace hyll
