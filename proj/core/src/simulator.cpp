#include "hyll/simulator.hpp"

#include <cmath>
#include <stdexcept>

namespace hyll::spi {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : state(splitmix64(seed) | 1ULL) {}

std::uint64_t Rng::next() {
  // xorshift64* (Vigna); period 2^64 - 1, state never zero
  state ^= state >> 12;
  state ^= state << 25;
  state ^= state >> 27;
  return state * 2685821657736338717ULL;
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

Rng replication_stream(std::uint64_t seed, std::uint64_t run) {
  return Rng(splitmix64(seed + run));
}

RaceOutcome race(const std::vector<EnabledAction>& actions, Rng& rng) {
  if (actions.empty()) throw std::invalid_argument("race: no enabled actions");
  double total = 0.0;
  for (const auto& a : actions) total += to_double(a.propensity);
  if (!(total > 0.0)) throw std::invalid_argument("race: total propensity must be positive");

  RaceOutcome out;
  double u1 = rng.uniform();
  out.delay = -std::log1p(-u1) / total;  // Exp(R) by inverse transform

  double u2 = rng.uniform();
  double mark = u2 * total;
  double acc = 0.0;
  out.chosen = static_cast<int>(actions.size()) - 1;
  for (size_t i = 0; i < actions.size(); ++i) {
    acc += to_double(actions[i].propensity);
    if (mark < acc) {
      out.chosen = static_cast<int>(i);
      break;
    }
  }
  return out;
}

SimResult simulate(const Env& e, const RateTable& rates, const Process& p, const SimConfig& cfg) {
  SimResult result;
  result.trace.initial = p;
  Rng rng(cfg.seed);

  Config state = expand_config(e, open_config(e, rates, p));
  for (int step = 0; step < cfg.max_steps; ++step) {
    auto actions = enabled_actions(e, state);
    if (actions.empty()) break;  // deadlock terminates the run
    RaceOutcome o = race(actions, rng);
    if (cfg.stop_time >= 0.0 && result.total_time + o.delay > cfg.stop_time) break;
    result.total_time += o.delay;
    result.delays.push_back(o.delay);
    // traces identify steps by their event; apply the first action with
    // the chosen signature so the run replays first-match deterministic
    Event ev = actions[o.chosen].event();
    const EnabledAction* applied = &actions[o.chosen];
    for (const auto& a : actions)
      if (event_equal(a.event(), ev)) {
        applied = &a;
        break;
      }
    result.trace.events.push_back(ev);
    state = expand_config(e, apply_action(e, state, *applied));
  }

  if (cfg.certify) {
    FocProof d = trace_to_derivation(e, rates, result.trace);
    result.certificate = check_focused(d);
    result.certified = result.certificate.ok;
  }
  return result;
}

}  // namespace hyll::spi
