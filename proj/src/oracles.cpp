#include "rumor/oracles.hpp"

#include <algorithm>
#include <queue>

#include "rumor/error.hpp"

namespace rumor::oracles {

void urn_step(UrnState& urn, Engine& eng) {
  if (uniform_index(eng, urn.type1 + urn.type2) < urn.type1) {
    urn.type1 += urn.add_per_draw;
  } else {
    urn.type2 += urn.add_per_draw;
  }
}

double polya_limit_sample(UrnState initial, std::uint64_t steps, std::uint64_t seed) {
  if (initial.type1 == 0 || initial.type2 == 0 || initial.add_per_draw == 0) {
    fail(ErrorKind::InvalidArgument, "urn counts and additions must be positive");
  }
  if (steps < 1) fail(ErrorKind::InvalidArgument, "urn needs at least one step");
  Engine eng(seed);
  for (std::uint64_t i = 0; i < steps; ++i) urn_step(initial, eng);
  return initial.fraction();
}

BranchingTrace simulate_branching(const OffspringSpec& offspring, const SpreadingTimeSpec& dist,
                                  double horizon, const std::vector<double>& sample_times,
                                  std::uint64_t seed, std::uint64_t event_cap) {
  if (!(horizon > 0)) fail(ErrorKind::InvalidArgument, "horizon must be > 0");
  if (!std::is_sorted(sample_times.begin(), sample_times.end()) ||
      (!sample_times.empty() && (sample_times.front() < 0 || sample_times.back() > horizon))) {
    fail(ErrorKind::InvalidArgument, "sample times must be ascending within [0, horizon]");
  }
  Engine eng(seed);
  SpreadingTimeSampler life(dist);
  OffspringSampler children(offspring);

  BranchingTrace trace;
  trace.times = sample_times;
  trace.population.assign(sample_times.size(), 0);

  // Pending death times of the living population.
  std::priority_queue<double, std::vector<double>, std::greater<>> deaths;
  deaths.push(life(eng));
  std::size_t next_sample = 0;
  while (next_sample < sample_times.size()) {
    const double t_next = deaths.empty() ? horizon + 1.0 : deaths.top();
    // Deaths at exactly t count as having happened by t.
    while (next_sample < sample_times.size() && sample_times[next_sample] < t_next) {
      trace.population[next_sample++] = deaths.size();
    }
    if (deaths.empty() || t_next > horizon) break;
    if (trace.events >= event_cap) {
      trace.truncated = true;
      while (next_sample < sample_times.size()) trace.population[next_sample++] = deaths.size();
      break;
    }
    deaths.pop();
    ++trace.events;
    const std::uint32_t k = children(eng);
    for (std::uint32_t i = 0; i < k; ++i) deaths.push(t_next + life(eng));
  }
  return trace;
}

std::uint64_t simulate_renewal(const SpreadingTimeSpec& dist, double t, std::uint64_t seed) {
  if (!(t >= 0)) fail(ErrorKind::InvalidArgument, "renewal horizon must be >= 0");
  Engine eng(seed);
  SpreadingTimeSampler hold(dist);
  std::uint64_t count = 0;
  double clock = hold(eng);
  while (clock <= t) {
    ++count;
    clock += hold(eng);
  }
  return count;
}

}  // namespace rumor::oracles
