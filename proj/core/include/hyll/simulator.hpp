#ifndef HYLL_SIMULATOR_HPP
#define HYLL_SIMULATOR_HPP

#include <cstdint>

#include "hyll/spi.hpp"

namespace hyll::spi {

// Deterministic shift-register PRNG (xorshift64*), bit-exact across
// platforms.  Streams for independent replication runs derive from the
// base seed by a splitmix64 hop: seed_k = splitmix64(seed + k).
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  // uniform in [0, 1), 53 mantissa bits
  double uniform();
};

std::uint64_t splitmix64(std::uint64_t x);
Rng replication_stream(std::uint64_t seed, std::uint64_t run);

struct SimConfig {
  std::uint64_t seed = 0;
  int max_steps = 0;
  double stop_time = -1.0;  // negative: no time bound
  bool certify = false;
};

struct SimResult {
  Trace trace;
  std::vector<double> delays;
  double total_time = 0.0;
  bool certified = false;       // only meaningful when cfg.certify
  CheckReport certificate;      // the checker's verdict on the derivation
};

struct RaceOutcome {
  int chosen = -1;
  double delay = 0.0;
};

// Resolves the exponential race: the winner is index i with probability
// propensity_i / R, the delay is Exp(R) sampled by inverse transform.
// Two draws per call: the delay first, then the selection.
RaceOutcome race(const std::vector<EnabledAction>& actions, Rng& rng);

SimResult simulate(const Env& e, const RateTable& rates, const Process& p, const SimConfig& cfg);

}  // namespace hyll::spi

#endif
