#pragma once

#include <cstdint>
#include <vector>

#include "rumor/generators.hpp"
#include "rumor/spreading_time.hpp"

namespace rumor::oracles {

/// Two-colour urn: each draw picks a ball uniformly and adds add_per_draw
/// balls of the drawn colour.
struct UrnState {
  std::uint64_t type1 = 1;
  std::uint64_t type2 = 1;
  std::uint64_t add_per_draw = 1;

  double fraction() const { return static_cast<double>(type1) / static_cast<double>(type1 + type2); }
};

void urn_step(UrnState& urn, Engine& eng);

/// Type-1 fraction after `steps` draws.
double polya_limit_sample(UrnState initial, std::uint64_t steps, std::uint64_t seed);

struct BranchingTrace {
  std::vector<double> times;
  std::vector<std::uint64_t> population;  // Z(times[i])
  std::uint64_t events = 0;               // deaths processed
  bool truncated = false;                 // event cap hit before the horizon
};

/// Continuous-time branching process with Z(0) = 1: every individual
/// lives an independent F-distributed time and is then replaced by an
/// offspring-distributed number of children. Z is sampled at the given
/// times (ascending, within [0, horizon]). Exceeding `event_cap` deaths
/// stops the run and sets `truncated`; samples past that point are left
/// at the population reached when the cap hit.
BranchingTrace simulate_branching(const OffspringSpec& offspring, const SpreadingTimeSpec& dist,
                                  double horizon, const std::vector<double>& sample_times,
                                  std::uint64_t seed, std::uint64_t event_cap = 10'000'000);

/// Number of renewals in [0, t] with i.i.d. holding times from dist.
std::uint64_t simulate_renewal(const SpreadingTimeSpec& dist, double t, std::uint64_t seed);

}  // namespace rumor::oracles
