#include <deque>
#include <functional>

#include "hyll/print.hpp"
#include "hyll/spi.hpp"

// Adequacy both ways.  trace_to_derivation drives apply_focused through
// the derived-rule blocks of the canonical-derivations lemma (focus on
// inter, foci on the participating sums, the cleanup focus), so every
// sequent in the produced proof is computed by the same rule engine the
// checker uses.  derivation_to_trace walks the canonical frontiers of
// such a proof and reads one event per interaction block off the lock
// world's advance.

namespace hyll::spi {

namespace {

[[noreturn]] void die(const std::string& msg) { throw SpiError("adequacy: " + msg); }

// --- builder plumbing -------------------------------------------------------

// A branch of the derivation under construction: the current sequent and
// a descriptor per linear entry, plus bookkeeping for the growing gamma.
struct Branch {
  FocSequent seq;
  std::vector<std::string> marks;

  int find_mark(const std::string& m) const {
    for (size_t i = 0; i < marks.size(); ++i)
      if (marks[i] == m) return static_cast<int>(i);
    die("missing context entry " + m);
  }
};

using K = std::function<FocProof(Branch&)>;

FocApplyResult must_apply(const FocSequent& s, const FocApp& app) {
  FocApplyResult r = apply_focused(s, app);
  if (!r.ok) die(std::string(ftag_name(app.tag)) + ": " + r.error + " in `" + to_string(s) + "`");
  return r;
}

FocProof ap0(Branch& b, FocApp app) {
  FocApplyResult r = must_apply(b.seq, app);
  if (!r.premises.empty()) die("expected a closing rule");
  return mk_foc_proof(std::move(app), b.seq, {});
}

FocProof ap1(Branch& b, FocApp app, const std::function<void(Branch&)>& edit, const K& k) {
  FocApplyResult r = must_apply(b.seq, app);
  if (r.premises.size() != 1) die("expected one premise");
  Branch next = b;
  next.seq = r.premises[0];
  if (edit) edit(next);
  FocProof sub = k(next);
  return mk_foc_proof(std::move(app), b.seq, {sub});
}

FocProof ap1(Branch& b, FocApp app, const K& k) { return ap1(b, std::move(app), {}, k); }

// split rules route marks; additive rules copy them
FocProof ap2(Branch& b, FocApp app, const K& k1, const K& k2) {
  FocApplyResult r = must_apply(b.seq, app);
  if (r.premises.size() != 2) die("expected two premises");
  Branch b1 = b, b2 = b;
  b1.seq = r.premises[0];
  b2.seq = r.premises[1];
  if (app.tag == FTag::LimpL || app.tag == FTag::TensorR) {
    b1.marks.clear();
    b2.marks.clear();
    std::vector<bool> take(b.marks.size(), false);
    for (int i : app.split) take[i] = true;
    for (size_t i = 0; i < b.marks.size(); ++i)
      (take[i] ? b1.marks : b2.marks).push_back(b.marks[i]);
  }
  FocProof s1 = k1(b1);
  FocProof s2 = k2(b2);
  return mk_foc_proof(std::move(app), b.seq, {s1, s2});
}

std::vector<int> positions_of(const Branch& b, const std::vector<std::string>& names) {
  std::vector<int> out;
  for (const auto& n : names) out.push_back(b.find_mark(n));
  return out;
}

FocProof close_ri(Branch& b, const std::string& mark) {
  if (b.seq.form != FocForm::RightFocus) die("close_ri: not a right focus");
  if (b.marks.size() != 1 || b.marks[0] != mark)
    die("close_ri: context is not exactly " + mark);
  return ap0(b, {FTag::Ri});
}

FocProof decide_lf(Branch& b, const std::string& mark, const K& k) {
  FocApp app{FTag::Lf};
  app.principal = b.find_mark(mark);
  return ap1(b, app,
             [&](Branch& n) { n.marks.erase(n.marks.begin() + app.principal); }, k);
}

FocProof decide_cplf(Branch& b, int gamma_index, const K& k) {
  FocApp app{FTag::Cplf};
  app.principal = gamma_index;
  return ap1(b, app, k);
}

// Closes a neutral sequent whose stable goal is pos (rt chan) at the
// channel's rate world.  Root facts are bare atoms rt x @ [r]; facts filed
// by !L during a restriction opening have the shape (rt x at r) @ id and
// need one extra at step under focus.
FocProof close_rt(Branch& b, const Term& chan) {
  for (int i = static_cast<int>(b.seq.gamma.size()) - 1; i >= 0; --i) {
    const Neg& n = b.seq.gamma[i].prop;
    if (n->tag == NegTag::Atom && n->pred == "rt" && n->args.size() == 1 && n->args[0] == chan)
      return decide_cplf(b, i, [&](Branch& m) { return ap0(m, {FTag::Li}); });
    if (n->tag == NegTag::At && n->a->tag == NegTag::Atom && n->a->pred == "rt" &&
        n->a->args.size() == 1 && n->a->args[0] == chan)
      return decide_cplf(b, i, [&](Branch& m) {
        return ap1(m, {FTag::AtLF}, [&](Branch& m2) { return ap0(m2, {FTag::Li}); });
      });
  }
  die("no rate entry for channel " + hyll::to_string(chan));
}

// --- the active-phase driver ---------------------------------------------------

// Runs the canonical FIFO active order to the neutral sequent.  Appended
// delta entries take names from `names`; exL parameters report through
// on_param.  Branching actives never occur in canonical decompositions.
FocProof run_active(Branch& b, std::deque<std::string>& names,
                    const std::function<void(const Term&)>& on_param, const K& k) {
  if (is_neutral(b.seq)) return k(b);
  if (b.seq.form != FocForm::Active) die("run_active: not an active sequent");

  const FocSequent& s = b.seq;
  FocApp app;
  bool on_goal = s.omega.empty();
  if (!on_goal) {
    app.principal = 0;
    switch (s.omega[0].prop->tag) {
      case PosTag::Tensor: app.tag = FTag::TensorL; break;
      case PosTag::One: app.tag = FTag::OneL; break;
      case PosTag::Down: app.tag = FTag::DownLA; break;
      case PosTag::At: app.tag = FTag::AtLA; break;
      case PosTag::ExistsT: app.tag = FTag::ExistsL; break;
      case PosTag::Bang: app.tag = FTag::BangL; break;
      case PosTag::OfNeg: app.tag = FTag::ShiftLA; break;
      case PosTag::Atom: app.tag = FTag::AtomL; break;
      default: die("run_active: unexpected connective in the active zone");
    }
  } else {
    switch (s.goal.active_goal->tag) {
      case NegTag::Limp: app.tag = FTag::LimpR; break;
      case NegTag::Down: app.tag = FTag::DownRA; break;
      case NegTag::At: app.tag = FTag::AtRA; break;
      case NegTag::ForallT: app.tag = FTag::ForallR; break;
      case NegTag::OfPos: app.tag = FTag::ShiftRA; break;
      case NegTag::Atom: app.tag = FTag::AtomR; break;
      default: die("run_active: unexpected goal connective");
    }
  }

  bool appends = app.tag == FTag::ShiftLA || app.tag == FTag::AtomL;
  bool param = app.tag == FTag::ExistsL;
  Term param_term = param ? Term::param(s.tscope) : Term();

  return ap1(
      b, app,
      [&](Branch& n) {
        if (appends) {
          if (names.empty()) die("run_active: unnamed context entry");
          n.marks.push_back(names.front());
          names.pop_front();
        }
      },
      [&](Branch& n) {
        if (param && on_param) on_param(param_term);
        return run_active(n, names, on_param, k);
      });
}

// number of canonical items a continuation contributes
int component_count(const Process& p) {
  switch (p->tag) {
    case ProcTag::Nu: return component_count(p->left);
    case ProcTag::Par: return component_count(p->left) + component_count(p->right);
    case ProcTag::Nil: return 0;
    default: return 1;
  }
}

// --- sums: summand paths -----------------------------------------------------

void flatten_sum_view(const Sum& m, std::vector<Sum>& out) {
  if (m->tag == SumTag::Plus) {
    flatten_sum_view(m->left, out);
    flatten_sum_view(m->right, out);
  } else {
    out.push_back(m);
  }
}

int summand_count(const Sum& m) {
  if (m->tag == SumTag::Plus) return summand_count(m->left) + summand_count(m->right);
  return 1;
}

// the &L choices selecting flattened summand `index`
std::vector<int> summand_path(const Sum& m, int index) {
  std::vector<int> path;
  const Sum* cur = &m;
  while ((*cur)->tag == SumTag::Plus) {
    int left = summand_count((*cur)->left);
    if (index < left) {
      path.push_back(1);
      cur = &(*cur)->left;
    } else {
      index -= left;
      path.push_back(2);
      cur = &(*cur)->right;
    }
  }
  return path;
}

Sum summand_at(const Sum& m, int index) {
  std::vector<Sum> parts;
  flatten_sum_view(m, parts);
  return parts[index];
}

// --- the derivation driver -----------------------------------------------------

struct Driver {
  const Env& env;
  Config cfg;
  std::vector<long> ids;
  long next_id = 0;
  long local_counter = 0;  // transient entry names inside closing branches
  std::map<std::string, Term> sym2term;
  std::deque<std::string> pending_syms;  // config symbols awaiting their exL parameter
  WorldExpr lock_world = w_identity();
  int inter_pos = -1;
  std::map<std::string, int> env_pos;
  std::vector<std::string> created_order;  // derivation-created symbols
  std::vector<EnabledAction> plan;         // one action per trace event

  explicit Driver(const Env& e) : env(e) {}

  std::string item_mark(size_t i) const { return "item:" + std::to_string(ids[i]); }

  Term term_of(const Term& t) const {
    if (t->tag == TermTag::Fn && t->args.empty()) {
      auto it = sym2term.find(t->symbol);
      if (it != sym2term.end()) return it->second;
    }
    return t;
  }

  void on_channel_param(const Term& param) {
    if (pending_syms.empty()) die("unexpected channel parameter");
    sym2term[pending_syms.front()] = param;
    created_order.push_back(pending_syms.front());
    pending_syms.pop_front();
  }

  // opens a released continuation into the configuration, returning the
  // names its components take and queueing its fresh symbols
  struct Released {
    Process shape;
    std::deque<std::string> names;
  };
  Released release(const Process& cont) {
    Released r;
    r.shape = cont;
    Config probe = open_config(env, cfg.rates, cont, cfg.fresh_counter);
    for (const auto& sym : probe.opened) pending_syms.push_back(sym);
    for (const auto& it : probe.items) {
      cfg.items.push_back(it);
      ids.push_back(next_id);
      r.names.push_back("item:" + std::to_string(next_id));
      ++next_id;
    }
    cfg.rates = probe.rates;
    cfg.fresh_counter = probe.fresh_counter;
    return r;
  }

  void remove_item(size_t pos) {
    cfg.items.erase(cfg.items.begin() + pos);
    ids.erase(ids.begin() + pos);
  }

  // ---- unfold block (congruence rule; the world does not advance) ---------

  FocProof unfold_first_call(Branch& b, const K& k) {
    size_t pos = 0;
    while (pos < cfg.items.size() && cfg.items[pos]->tag != ProcTag::Call) ++pos;
    if (pos == cfg.items.size()) die("unfold: no call item");
    Process call = cfg.items[pos];
    std::string mark = item_mark(pos);
    auto git = env_pos.find(call->defname);
    if (git == env_pos.end()) die("no theory clause for " + call->defname);

    std::vector<Term> args;
    for (const auto& a : call->args) args.push_back(term_of(a));

    remove_item(pos);
    Released rel = release(unfold_call(env, call->defname, call->args));

    return decide_cplf(b, git->second, [&](Branch& n) {
      FocApp fu{FTag::ForallL};
      fu.world_witness = w_identity();
      return ap1(n, fu, [&](Branch& n2) {
        return ap1(n2, {FTag::AtLF}, [&](Branch& n3) {
          std::function<FocProof(Branch&, size_t)> inst = [&](Branch& m, size_t ai) -> FocProof {
            if (ai < args.size()) {
              FocApp fa{FTag::ForallL};
              fa.term_witness = args[ai];
              return ap1(m, fa, [&](Branch& m2) { return inst(m2, ai + 1); });
            }
            FocApp wl{FTag::WithL};
            wl.which = 1;
            return ap1(m, wl, [&](Branch& m2) {
              FocApp ll{FTag::LimpL};
              ll.split = positions_of(m2, {mark});
              return ap2(
                  m2, ll, [&](Branch& lhs) { return close_ri(lhs, mark); },
                  [&](Branch& rhs) {
                    return ap1(rhs, {FTag::ShiftL}, [&](Branch& act) {
                      std::deque<std::string> names = rel.names;
                      return run_active(
                          act, names, [&](const Term& pt) { on_channel_param(pt); },
                          [&](Branch& done) { return k(done); });
                    });
                  });
            });
          };
          return inst(n3, 0);
        });
      });
    });
  }

  bool has_call() const {
    for (const auto& it : cfg.items)
      if (it->tag == ProcTag::Call) return true;
    return false;
  }

  // ---- interaction block ----------------------------------------------------

  // cplf inter; faw u := s; at; -oL consuming the lock; &L(which); shift;
  // actives leave the guards and the continuation entry
  FocProof focus_inter(Branch& b, int which, const K& k) {
    return decide_cplf(b, inter_pos, [&](Branch& n) {
      FocApp fu{FTag::ForallL};
      fu.world_witness = lock_world;
      return ap1(n, fu, [&](Branch& n2) {
        return ap1(n2, {FTag::AtLF}, [&](Branch& n3) {
          FocApp ll{FTag::LimpL};
          ll.split = positions_of(n3, {"lock"});
          return ap2(
              n3, ll, [&](Branch& lhs) { return close_ri(lhs, "lock"); },
              [&](Branch& rhs) {
                FocApp wl{FTag::WithL};
                wl.which = which;
                return ap1(rhs, wl, [&](Branch& n4) {
                  return ap1(n4, {FTag::ShiftL}, [&](Branch& n5) {
                    std::deque<std::string> names =
                        which == 1 ? std::deque<std::string>{"dt:0", "cont"}
                                   : std::deque<std::string>{"dt:0", "dt:1", "cont"};
                    return run_active(n5, names, {}, k);
                  });
                });
              });
        });
      });
    });
  }

  // lf on an unlocked sum item: -oL on a dt guard, the &L path, for inputs
  // the message instantiation, then the released continuation's actives
  FocProof unlock_sum(Branch& b, size_t item, int summand, const std::string& guard,
                      const std::string& token, const std::optional<Term>& message,
                      const Released& rel, const K& k) {
    std::string mark = item_mark(item);
    const Sum& sum = cfg.items[item]->sum;
    std::vector<int> path = summand_path(sum, summand);
    Sum chosen = summand_at(sum, summand);
    if (message && chosen->tag != SumTag::In) die("message witness on a non-input");

    return decide_lf(b, mark, [&](Branch& n) {
      FocApp ll{FTag::LimpL};
      ll.split = positions_of(n, {guard});
      return ap2(
          n, ll, [&](Branch& lhs) { return close_ri(lhs, guard); },
          [&](Branch& rhs) {
            std::function<FocProof(Branch&, size_t)> descend = [&](Branch& m,
                                                                   size_t pi) -> FocProof {
              if (pi < path.size()) {
                FocApp wl{FTag::WithL};
                wl.which = path[pi];
                return ap1(m, wl, [&](Branch& m2) { return descend(m2, pi + 1); });
              }
              K go_active = [&](Branch& m3) {
                std::deque<std::string> names;
                names.push_back(token);
                for (const auto& nm : rel.names) names.push_back(nm);
                return run_active(m3, names, [&](const Term& pt) { on_channel_param(pt); }, k);
              };
              if (chosen->tag == SumTag::In) {
                FocApp fa{FTag::ForallL};
                fa.term_witness = term_of(*message);
                return ap1(m, fa,
                           [&](Branch& m2) { return ap1(m2, {FTag::ShiftL}, go_active); });
              }
              return ap1(m, {FTag::ShiftL}, go_active);
            };
            return descend(rhs, 0);
          });
    });
  }

  // [rho_r neg act @ s]: dnLF, atLF, shift, lp re-emits the advanced lock
  FocProof relock(Branch& b, const K& k) {
    return ap1(b, {FTag::DownLF}, [&](Branch& n) {
      return ap1(n, {FTag::AtLF}, [&](Branch& n2) {
        return ap1(n2, {FTag::ShiftL}, [&](Branch& n3) {
          std::deque<std::string> names{"lock"};
          return run_active(n3, names, {}, k);
        });
      });
    });
  }

  FocProof cleanup_int(Branch& b, const Rational& rate, const K& k) {
    return decide_lf(b, "cont", [&](Branch& n) {
      FocApp fa{FTag::ForallL};
      fa.term_witness = Term::rate(rate);
      return ap1(n, fa, [&](Branch& n2) {
        FocApp ll{FTag::LimpL};
        ll.split = positions_of(n2, {"tok:tau"});
        return ap2(
            n2, ll,
            [&](Branch& lhs) {
              return ap1(lhs, {FTag::AtRF}, [&](Branch& l2) { return close_ri(l2, "tok:tau"); });
            },
            [&](Branch& rhs) { return relock(rhs, k); });
      });
    });
  }

  FocProof cleanup_syn(Branch& b, const Term& chan, const Term& msg, const Rational& rate,
                       const K& k) {
    return decide_lf(b, "cont", [&](Branch& n) {
      FocApp fx{FTag::ForallL};
      fx.term_witness = chan;
      return ap1(n, fx, [&](Branch& n2) {
        FocApp fr{FTag::ForallL};
        fr.world_witness = w_rate(rate);
        return ap1(n2, fr, [&](Branch& n3) {
          FocApp fm{FTag::ForallL};
          fm.term_witness = msg;
          return ap1(n3, fm, [&](Branch& n4) {
            FocApp ll{FTag::LimpL};
            ll.split = positions_of(n4, {"tok:out", "tok:in"});
            return ap2(
                n4, ll,
                [&](Branch& lhs) {
                  return ap1(lhs, {FTag::AtRF}, [&](Branch& l2) {
                    FocApp tr{FTag::TensorR};
                    tr.split = positions_of(l2, {"tok:out"});
                    return ap2(
                        l2, tr, [&](Branch& l3) { return close_ri(l3, "tok:out"); },
                        [&](Branch& l3) { return close_ri(l3, "tok:in"); });
                  });
                },
                [&](Branch& rhs) {
                  FocApp ll2{FTag::LimpL};
                  return ap2(
                      rhs, ll2,
                      [&](Branch& lhs2) {
                        // [(pos rt x at r) @ s]: atRF, posR, then the lookup
                        return ap1(lhs2, {FTag::AtRF}, [&](Branch& l2) {
                          return ap1(l2, {FTag::ShiftR}, [&](Branch& l3) {
                            std::deque<std::string> none;
                            return run_active(l3, none, {},
                                              [&](Branch& l4) { return close_rt(l4, chan); });
                          });
                        });
                      },
                      [&](Branch& rhs2) { return relock(rhs2, k); });
                });
          });
        });
      });
    });
  }

  FocProof step_block(Branch& b, const EnabledAction& a, const K& k) {
    if (a.kind == Event::Kind::Internal) {
      Sum chosen = summand_at(cfg.items[a.item]->sum, a.summand);
      Rational rate = chosen->rate;
      size_t pos = a.item;
      return focus_inter(b, 1, [&](Branch& n) {
        Released rel = release(chosen->cont);
        Process item_saved = cfg.items[pos];  // still present for mark lookup
        (void)item_saved;
        return unlock_sum(n, pos, a.summand, "dt:0", "tok:tau", std::nullopt, rel,
                          [&](Branch& n2) {
                            remove_item(pos);
                            return cleanup_int(n2, rate, [&](Branch& n3) {
                              lock_world = w_lit(eval(
                                  w_compose(lock_world, w_rate(rate)), {}, Domain::Rates));
                              return k(n3);
                            });
                          });
      });
    }

    Sum out_s = summand_at(cfg.items[a.out_item]->sum, a.out_summand);
    Sum in_s = summand_at(cfg.items[a.in_item]->sum, a.in_summand);
    Rational rate = a.propensity;
    Term chan = term_of(out_s->channel);
    Term msg = term_of(out_s->message);
    size_t out_pos = a.out_item, in_pos = a.in_item;

    return focus_inter(b, 2, [&](Branch& n) {
      Released rel_out = release(out_s->cont);
      return unlock_sum(
          n, out_pos, a.out_summand, "dt:0", "tok:out", std::nullopt, rel_out, [&](Branch& n2) {
            Released rel_in = release(subst_channel(in_s->cont, out_s->message));
            return unlock_sum(
                n2, in_pos, a.in_summand, "dt:1", "tok:in", out_s->message, rel_in,
                [&](Branch& n3) {
                  size_t hi = std::max(out_pos, in_pos), lo = std::min(out_pos, in_pos);
                  remove_item(hi);
                  remove_item(lo);
                  return cleanup_syn(n3, chan, msg, rate, [&](Branch& n4) {
                    lock_world =
                        w_lit(eval(w_compose(lock_world, w_rate(rate)), {}, Domain::Rates));
                    return k(n4);
                  });
                });
          });
    });
  }

  // ---- closing block ---------------------------------------------------------

  // rf on ([Q] at rid) * act @ t; the act component consumes the lock
  FocProof close_block(Branch& b) {
    std::vector<std::string> item_names;
    for (size_t i = 0; i < cfg.items.size(); ++i) item_names.push_back(item_mark(i));
    return ap1(b, {FTag::Rf}, [&](Branch& n) {
      FocApp tr{FTag::TensorR};
      tr.split = positions_of(n, item_names);
      return ap2(
          n, tr,
          [&](Branch& lhs) {
            return ap1(lhs, {FTag::AtRF}, [&](Branch& l2) {
              std::deque<std::string> entries(item_names.begin(), item_names.end());
              std::deque<Term> nus;
              for (const auto& sym : created_order) nus.push_back(sym2term.at(sym));
              Process q = goal_process();
              return close_process(l2, q, entries, nus);
            });
          },
          [&](Branch& rhs) { return close_ri(rhs, "lock"); });
    });
  }

  // the final process: items right-nested, derivation-created channels
  // re-bound outermost in creation order
  Process goal_body() const {
    Process body = pr_nil();
    if (!cfg.items.empty()) {
      body = cfg.items.back();
      for (int i = static_cast<int>(cfg.items.size()) - 2; i >= 0; --i)
        body = pr_par(cfg.items[i], body);
    }
    return body;
  }

  Process goal_process() const {
    Process body = goal_body();
    for (int i = static_cast<int>(created_order.size()) - 1; i >= 0; --i)
      body = bind_channel(body, created_order[i], cfg.rates.at(created_order[i]));
    return body;
  }

  // [ [P] @ rid ] against the canonical entries named by `entries`
  FocProof close_process(Branch& b, const Process& p, std::deque<std::string>& entries,
                         std::deque<Term>& nus) {
    switch (p->tag) {
      case ProcTag::Nil: return ap0(b, {FTag::OneR});
      case ProcTag::Par: {
        int left_n = component_count(p->left);
        std::vector<std::string> left_names(entries.begin(), entries.begin() + left_n);
        FocApp tr{FTag::TensorR};
        tr.split = positions_of(b, left_names);
        return ap2(
            b, tr,
            [&](Branch& lhs) {
              std::deque<std::string> le(left_names.begin(), left_names.end());
              return close_process(lhs, p->left, le, nus);
            },
            [&](Branch& rhs) {
              std::deque<std::string> re(entries.begin() + left_n, entries.end());
              return close_process(rhs, p->right, re, nus);
            });
      }
      case ProcTag::Nu: {
        if (nus.empty()) die("close: missing channel witness");
        Term param = nus.front();
        nus.pop_front();
        FocApp ex{FTag::ExistsR};
        ex.term_witness = param;
        return ap1(b, ex, [&](Branch& n) {
          FocApp tr{FTag::TensorR};
          return ap2(
              n, tr,
              [&](Branch& lhs) {
                return ap1(lhs, {FTag::BangR}, [&](Branch& l2) {
                  std::deque<std::string> none;
                  return run_active(l2, none, {},
                                    [&](Branch& l3) { return close_rt(l3, param); });
                });
              },
              [&](Branch& rhs) { return close_process(rhs, p->left, entries, nus); });
        });
      }
      case ProcTag::Call: {
        if (entries.empty()) die("close: missing entry for a call");
        std::string mark = entries.front();
        entries.pop_front();
        return close_ri(b, mark);
      }
      case ProcTag::SumP: {
        if (entries.empty()) die("close: missing entry for a sum");
        std::string mark = entries.front();
        entries.pop_front();
        // posR, -oR, lp(dt), then the goal mirrors the sum's shape
        std::string guard = "dt:c" + std::to_string(local_counter++);
        return ap1(b, {FTag::ShiftR}, [&](Branch& n) {
          // -oR then the dt atom into delta
          return ap1(n, {FTag::LimpR}, [&](Branch& n2) {
            FocApp lp{FTag::AtomL};
            lp.principal = 0;
            return ap1(
                n2, lp, [&](Branch& n3) { n3.marks.push_back(guard); },
                [&](Branch& n3) { return close_sum_goal(n3, p->sum, mark, guard, {}); });
          });
        });
      }
    }
    die("close: unhandled process form");
  }

  // active goal mirroring (part of) the sum: with-goals branch, input
  // summands introduce their parameter, then the neutral is closed by
  // focusing the matching canonical entry
  FocProof close_sum_goal(Branch& b, const Sum& m, const std::string& item_mark_,
                          const std::string& guard, std::vector<int> path) {
    if (m->tag == SumTag::Plus) {
      FocApp wr{FTag::WithR};
      FocApplyResult r = must_apply(b.seq, wr);
      Branch b1 = b, b2 = b;
      b1.seq = r.premises[0];
      b2.seq = r.premises[1];
      std::vector<int> p1 = path, p2 = path;
      p1.push_back(1);
      p2.push_back(2);
      FocProof s1 = close_sum_goal(b1, m->left, item_mark_, guard, p1);
      FocProof s2 = close_sum_goal(b2, m->right, item_mark_, guard, p2);
      return mk_foc_proof(wr, b.seq, {s1, s2});
    }

    // single summand: for inputs a fresh parameter enters first
    std::optional<Term> in_param;
    K at_neutral = [&](Branch& n) {
      return decide_lf(n, item_mark_, [&](Branch& n2) {
        FocApp ll{FTag::LimpL};
        ll.split = positions_of(n2, {guard});
        return ap2(
            n2, ll, [&](Branch& lhs) { return close_ri(lhs, guard); },
            [&](Branch& rhs) {
              std::function<FocProof(Branch&, size_t)> descend = [&](Branch& mm,
                                                                     size_t pi) -> FocProof {
                if (pi < path.size()) {
                  FocApp wl{FTag::WithL};
                  wl.which = path[pi];
                  return ap1(mm, wl, [&](Branch& m2) { return descend(m2, pi + 1); });
                }
                K go = [&](Branch& m3) {
                  // actives: the token, then the continuation components
                  std::string tok = "tok:c" + std::to_string(local_counter++);
                  Process cont = in_param ? subst_channel(m->cont, *in_param) : m->cont;
                  int n_comp = component_count(cont);
                  std::vector<std::string> sub_names;
                  for (int c2 = 0; c2 < n_comp; ++c2)
                    sub_names.push_back("sub:c" + std::to_string(local_counter++));
                  std::deque<std::string> names;
                  names.push_back(tok);
                  for (const auto& nm : sub_names) names.push_back(nm);
                  std::deque<Term> sub_nus;
                  return run_active(
                      m3, names, [&](const Term& pt) { sub_nus.push_back(pt); },
                      [&](Branch& m4) {
                        return ap1(m4, {FTag::Rf}, [&](Branch& m5) {
                          FocApp tr{FTag::TensorR};
                          tr.split = positions_of(m5, {tok});
                          return ap2(
                              m5, tr, [&](Branch& l) { return close_ri(l, tok); },
                              [&](Branch& r2) {
                                std::deque<std::string> entries(sub_names.begin(),
                                                                sub_names.end());
                                return close_process(r2, cont, entries, sub_nus);
                              });
                        });
                      });
                };
                if (m->tag == SumTag::In) {
                  FocApp fa{FTag::ForallL};
                  fa.term_witness = *in_param;
                  return ap1(mm, fa, [&](Branch& m2) { return ap1(m2, {FTag::ShiftL}, go); });
                }
                return ap1(mm, {FTag::ShiftL}, go);
              };
              return descend(rhs, 0);
            });
      });
    };

    if (m->tag == SumTag::In) {
      // goal: fa n. neg (in x n * [P n]): introduce the parameter
      in_param = Term::param(b.seq.tscope);
      return ap1(b, {FTag::ForallR}, [&](Branch& n) {
        return ap1(n, {FTag::ShiftRA}, at_neutral);
      });
    }
    return ap1(b, {FTag::ShiftRA}, at_neutral);
  }

  // ---- spine ------------------------------------------------------------------

  FocProof build(Branch& b, const std::vector<Event>& events, size_t k) {
    if (has_call()) {
      return unfold_first_call(b, [&](Branch& n) { return build(n, events, k); });
    }
    if (k == events.size()) return close_block(b);
    return step_block(b, plan[k], [&](Branch& n) { return build(n, events, k + 1); });
  }
};

// forward pass: choose actions, compute the final configuration
struct Forward {
  Config cfg;
  std::vector<EnabledAction> plan;
  std::vector<std::string> created;  // symbols opened after the root
};

Forward forward_pass(const Env& e, const RateTable& rates, const Trace& t) {
  Forward f;
  f.cfg = open_config(e, rates, t.initial);
  size_t root_opened = f.cfg.opened.size();
  for (size_t k = 0; k <= t.events.size(); ++k) {
    f.cfg = expand_config(e, f.cfg);
    if (k == t.events.size()) break;
    auto actions = enabled_actions(e, f.cfg);
    const EnabledAction* chosen = nullptr;
    for (const auto& a : actions)
      if (event_equal(a.event(), t.events[k])) {
        chosen = &a;
        break;
      }
    if (!chosen)
      die("trace does not replay at step " + std::to_string(k) + ": " + to_string(t.events[k]));
    f.plan.push_back(*chosen);
    f.cfg = apply_action(e, f.cfg, *chosen);
  }
  for (size_t i = root_opened; i < f.cfg.opened.size(); ++i) f.created.push_back(f.cfg.opened[i]);
  return f;
}

}  // namespace

FocProof trace_to_derivation(const Env& e, const RateTable& rates, const Trace& t) {
  Forward f = forward_pass(e, rates, t);

  // the goal process: the final items with derivation-created channels
  // re-bound, in creation order
  Process q;
  {
    Process body = pr_nil();
    if (!f.cfg.items.empty()) {
      body = f.cfg.items.back();
      for (int i = static_cast<int>(f.cfg.items.size()) - 2; i >= 0; --i)
        body = pr_par(f.cfg.items[i], body);
    }
    for (int i = static_cast<int>(f.created.size()) - 1; i >= 0; --i)
      body = bind_channel(body, f.created[i], f.cfg.rates.at(f.created[i]));
    q = body;
  }

  World final_world = trace_world(t, t.events.size());
  FocSequent root = canonical_sequent(e, rates, t.initial, q, w_identity(), w_lit(final_world));

  Driver d(e);
  d.cfg = open_config(e, rates, t.initial);
  d.next_id = 0;
  d.plan = f.plan;
  d.inter_pos = static_cast<int>(root.gamma.size()) - 1;
  {
    int idx = 0;
    for (const auto& [name, def] : e.defs) {
      (void)def;
      d.env_pos[name] = idx++;
    }
  }

  Branch b;
  b.seq = root;
  b.marks.push_back("lock");
  for (size_t i = 0; i < d.cfg.items.size(); ++i) {
    d.ids.push_back(d.next_id);
    b.marks.push_back("item:" + std::to_string(d.next_id));
    ++d.next_id;
  }
  return d.build(b, t.events, 0);
}

// --- soundness direction ---------------------------------------------------------

namespace {

bool is_interaction_clause(const Neg& n) {
  static Neg inter = interaction_theory().prop;
  return neg_equal(n, inter, Domain::Rates);
}

// an environment clause's definition name, if this is one
std::optional<std::string> env_clause_name(const Neg& n) {
  if (n->tag != NegTag::ForallW || n->a->tag != NegTag::At) return std::nullopt;
  const Neg* cur = &n->a->a;
  while ((*cur)->tag == NegTag::ForallT) cur = &(*cur)->a;
  if ((*cur)->tag != NegTag::With) return std::nullopt;
  const Neg& l = (*cur)->a;
  if (l->tag != NegTag::Limp || l->p->tag != PosTag::Atom) return std::nullopt;
  return l->p->pred;
}

bool is_lock(const NegJudgement& j) {
  return j.prop->tag == NegTag::OfPos && j.prop->p->tag == PosTag::Atom &&
         j.prop->p->pred == "act";
}

bool canonical_shape(const FocSequent& s) {
  if (!is_neutral(s)) return false;
  int locks = 0;
  for (const auto& j : s.delta) {
    if (is_lock(j)) {
      ++locks;
      continue;
    }
    const Neg& n = j.prop;
    bool can_item = (n->tag == NegTag::Limp && n->p->tag == PosTag::Atom && n->p->pred == "dt") ||
                    (n->tag == NegTag::OfPos && n->p->tag == PosTag::Atom &&
                     !reserved_atom(n->p->pred));
    if (!can_item) return false;
  }
  if (locks != 1) return false;
  const Pos& g = s.goal.stable_goal;
  return g && g->tag == PosTag::Tensor && g->b->tag == PosTag::Atom && g->b->pred == "act";
}

WorldNF lock_world_of(const FocSequent& s) {
  for (const auto& j : s.delta)
    if (is_lock(j)) return world_nf(j.world, Domain::Rates);
  die("no lock in a canonical sequent");
}

// collect the canonical frontiers strictly below p
void canonical_descendants(const FocProof& p, std::vector<FocProof>& out) {
  for (const auto& q : p->premises) {
    if (canonical_shape(q->conclusion)) {
      out.push_back(q);
      continue;
    }
    canonical_descendants(q, out);
  }
}

const FocProofNode* find_tag(const FocProof& p, FTag t) {
  if (p->rule.tag == t) return p.get();
  for (const auto& q : p->premises) {
    if (canonical_shape(q->conclusion)) continue;  // do not cross frontiers
    if (const FocProofNode* r = find_tag(q, t)) return r;
  }
  return nullptr;
}

// witnesses of the cleanup focus inside a syn block: fa x, faw r, fa m
struct SynWitnesses {
  Term chan;
  Term msg;
};

std::optional<SynWitnesses> syn_witnesses(const FocProof& p) {
  // the cleanup is the lf whose focus is the released continuation: a
  // term-universal whose body is world-universal
  std::function<const FocProofNode*(const FocProof&)> find = [&](const FocProof& q)
      -> const FocProofNode* {
    if (q->rule.tag == FTag::Lf) {
      const NegJudgement& j = q->conclusion.delta[q->rule.principal];
      if (j.prop->tag == NegTag::ForallT && j.prop->a->tag == NegTag::ForallW) return q.get();
    }
    for (const auto& r : q->premises) {
      if (canonical_shape(r->conclusion)) continue;
      if (const FocProofNode* f = find(r)) return f;
    }
    return nullptr;
  };
  const FocProofNode* lf = find(p);
  if (!lf) return std::nullopt;
  // descend: lf -> faL(x) -> faL(r world) -> faL(m)
  const FocProofNode* n1 = lf->premises[0].get();
  if (n1->rule.tag != FTag::ForallL || !n1->rule.term_witness) return std::nullopt;
  const FocProofNode* n2 = n1->premises[0].get();
  if (n2->rule.tag != FTag::ForallL) return std::nullopt;
  const FocProofNode* n3 = n2->premises[0].get();
  if (n3->rule.tag != FTag::ForallL || !n3->rule.term_witness) return std::nullopt;
  return SynWitnesses{*n1->rule.term_witness, *n3->rule.term_witness};
}

Process decode_item(const NegJudgement& j);
Sum decode_sum(const Neg& n);

Process decode_proc(const Pos& p) {
  switch (p->tag) {
    case PosTag::One: return pr_nil();
    case PosTag::Tensor: return pr_par(decode_proc(p->a), decode_proc(p->b));
    case PosTag::Atom: return pr_call(p->pred, p->args);
    case PosTag::OfNeg: {
      const Neg& n = p->n;
      if (n->tag != NegTag::Limp || n->p->tag != PosTag::Atom || n->p->pred != "dt")
        die("decode: unexpected shifted proposition");
      return pr_sum(decode_sum(n->a));
    }
    case PosTag::ExistsT: {
      const Pos& body = p->a;
      if (body->tag != PosTag::Tensor || body->a->tag != PosTag::Bang)
        die("decode: unexpected restriction image");
      const Neg& rt = body->a->n;
      if (rt->tag != NegTag::At) die("decode: unrated restriction");
      World w = eval(rt->world, {}, Domain::Rates);
      if (w.rates().size() != 1) die("decode: restriction rate is not a single constant");
      return pr_nu(w.rates()[0], decode_proc(body->b));
    }
    default: die("decode: not a process image");
  }
}

Sum decode_sum(const Neg& n) {
  switch (n->tag) {
    case NegTag::With: return sm_plus(decode_sum(n->a), decode_sum(n->b));
    case NegTag::OfPos: {
      const Pos& p = n->p;
      if (p->tag != PosTag::Tensor || p->a->tag != PosTag::Atom) die("decode: bad summand");
      const Pos& tok = p->a;
      if (tok->pred == "out")
        return sm_out(tok->args.at(0), tok->args.at(1), decode_proc(p->b));
      if (tok->pred == "tau") {
        const Term& r = tok->args.at(0);
        if (r->tag != TermTag::RateLit) die("decode: tau rate is not a literal");
        return sm_tau(r->rate, decode_proc(p->b));
      }
      die("decode: unknown action token " + tok->pred);
    }
    case NegTag::ForallT: {
      const Neg& body = n->a;
      if (body->tag != NegTag::OfPos || body->p->tag != PosTag::Tensor ||
          body->p->a->tag != PosTag::Atom || body->p->a->pred != "in")
        die("decode: bad input summand");
      // strip the bound message argument; the channel crossed one binder
      Term chan = subst_term_in_term(body->p->a->args.at(0), Term::fn("#dummy"), 0);
      return sm_in(chan, decode_proc(body->p->b));
    }
    default: die("decode: not a sum image");
  }
}

Process decode_item(const NegJudgement& j) {
  const Neg& n = j.prop;
  if (n->tag == NegTag::Limp && n->p->tag == PosTag::Atom && n->p->pred == "dt")
    return pr_sum(decode_sum(n->a));
  if (n->tag == NegTag::OfPos && n->p->tag == PosTag::Atom)
    return pr_call(n->p->pred, n->p->args);
  die("decode: not a canonical item");
}

struct Walker {
  const Env& env;
  Config cfg;                       // replay configuration
  std::map<int, std::string> param2sym;  // exL level -> created channel
  std::vector<Event> events;
  std::vector<SpinePoint> spine;

  explicit Walker(const Env& e) : env(e) {}

  Term to_config_term(const Term& t) const {
    if (t->tag == TermTag::Param) {
      auto it = param2sym.find(t->index);
      if (it == param2sym.end()) die("walk: unknown channel parameter");
      return Term::fn(it->second);
    }
    return t;
  }

  void expand_once() {
    size_t before = cfg.opened.size();
    int params_before = static_cast<int>(param2sym.size());
    cfg = expand_config(env, cfg);
    for (size_t i = before; i < cfg.opened.size(); ++i)
      param2sym[params_before++] = cfg.opened[i];
  }

  void apply(const Event& ev) {
    auto actions = enabled_actions(env, cfg);
    const EnabledAction* chosen = nullptr;
    for (const auto& a : actions)
      if (event_equal(a.event(), ev)) {
        chosen = &a;
        break;
      }
    if (!chosen) die("walk: extracted event does not replay: " + to_string(ev));
    size_t before = cfg.opened.size();
    int params_before = static_cast<int>(param2sym.size());
    cfg = apply_action(env, cfg, *chosen);
    for (size_t i = before; i < cfg.opened.size(); ++i)
      param2sym[params_before++] = cfg.opened[i];
  }

  void walk(const FocProof& node) {
    if (!canonical_shape(node->conclusion)) die("walk: not a canonical neutral sequent");
    spine.push_back({node->conclusion, events.size(), lock_world_of(node->conclusion)});

    switch (node->rule.tag) {
      case FTag::Rf: return;  // the closing block
      case FTag::Cplf: {
        const NegJudgement& j = node->conclusion.gamma[node->rule.principal];
        std::vector<FocProof> next;
        canonical_descendants(node, next);
        if (next.size() != 1) die("walk: interaction block without a canonical premise");

        if (is_interaction_clause(j.prop)) {
          const FocProofNode* wl = find_tag(node, FTag::WithL);
          if (!wl) die("walk: no branch selection under inter");
          WorldNF before = lock_world_of(node->conclusion);
          WorldNF after = lock_world_of(next[0]->conclusion);
          // the advance s -> s.r determines the rate
          World wb = eval(w_identity(), {}, Domain::Rates);
          {
            // rebuild worlds from normal forms: canonical sequents carry
            // closed worlds, so single concrete factors suffice
            auto value = [](const WorldNF& nf) {
              World acc = World::identity(Domain::Rates);
              for (const auto& f : nf.factors) {
                if (!f.concrete) die("walk: symbolic lock world");
                acc = compose(acc, f.value);
              }
              return acc;
            };
            World vb = value(before), va = value(after);
            auto res = reaches(vb, va);
            if (!res || res->rates().size() != 1) die("walk: lock world did not advance by one rate");
            Event ev;
            ev.rate = res->rates()[0];
            if (wl->rule.which == 1) {
              ev.kind = Event::Kind::Internal;
            } else {
              ev.kind = Event::Kind::Synchronize;
              auto ws = syn_witnesses(node);
              if (!ws) die("walk: missing synchronization witnesses");
              ev.channel = to_config_term(ws->chan);
              ev.message = to_config_term(ws->msg);
            }
            expand_once();
            apply(ev);
            events.push_back(ev);
            (void)wb;
          }
        } else if (env_clause_name(j.prop)) {
          // congruence block: the world must not advance
          if (!(lock_world_of(node->conclusion) == lock_world_of(next[0]->conclusion)))
            die("walk: congruence block advanced the world");
          // configuration side: unfolding happens inside expand_once at
          // the next interaction; nothing to do here
        } else {
          die("walk: focus on a non-canonical unrestricted judgement");
        }
        walk(next[0]);
        return;
      }
      default: die("walk: canonical sequent decided by an unexpected rule");
    }
  }
};

}  // namespace

Trace derivation_to_trace(const Env& e, const FocProof& p) {
  CheckReport r = check_focused(p);
  if (!r.ok) die("derivation does not check: " + to_string(r));
  if (!canonical_shape(p->conclusion)) die("conclusion is not a canonical sequent");

  // decode the initial configuration from the root
  Trace t;
  {
    std::vector<Process> items;
    for (const auto& j : p->conclusion.delta)
      if (!is_lock(j)) items.push_back(decode_item(j));
    Process body = pr_nil();
    if (!items.empty()) {
      body = items.back();
      for (int i = static_cast<int>(items.size()) - 2; i >= 0; --i) body = pr_par(items[i], body);
    }
    t.initial = body;
  }

  Walker w(e);
  // rates from the unrestricted zone
  RateTable rates;
  for (const auto& j : p->conclusion.gamma) {
    const Neg& n = j.prop;
    if (n->tag == NegTag::Atom && n->pred == "rt" && n->args.size() == 1 &&
        n->args[0]->tag == TermTag::Fn && n->args[0]->args.empty()) {
      World rw = eval(j.world, {}, Domain::Rates);
      if (rw.rates().size() == 1) rates[n->args[0]->symbol] = rw.rates()[0];
    }
  }
  w.cfg = open_config(e, rates, t.initial);
  w.walk(p);
  t.events = std::move(w.events);
  return t;
}

std::vector<SpinePoint> canonical_spine(const Env& e, const FocProof& p) {
  Walker w(e);
  RateTable rates;
  for (const auto& j : p->conclusion.gamma) {
    const Neg& n = j.prop;
    if (n->tag == NegTag::Atom && n->pred == "rt" && n->args.size() == 1 &&
        n->args[0]->tag == TermTag::Fn && n->args[0]->args.empty()) {
      World rw = eval(j.world, {}, Domain::Rates);
      if (rw.rates().size() == 1) rates[n->args[0]->symbol] = rw.rates()[0];
    }
  }
  std::vector<Process> items;
  for (const auto& j : p->conclusion.delta)
    if (!is_lock(j)) items.push_back(decode_item(j));
  Process body = pr_nil();
  if (!items.empty()) {
    body = items.back();
    for (int i = static_cast<int>(items.size()) - 2; i >= 0; --i) body = pr_par(items[i], body);
  }
  w.cfg = open_config(e, rates, body);
  w.walk(p);
  return w.spine;
}

}  // namespace hyll::spi
