#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rumor/generators.hpp"
#include "rumor/spreading_time.hpp"

namespace rumor::theory {

/// Regularized incomplete beta I_x(a, b) by modified Lentz continued
/// fraction, switching to 1 - I_{1-x}(b, a) past x = (a+1)/(a+b+2).
double inc_beta(double x, double a, double b);

/// Limit probability of correct detection on the d-regular tree, d >= 3.
double alpha_d(std::uint64_t d);

struct CkValue {
  double value = 0.0;
  bool clamped = false;  // |value| fell below 1e-12 and was set to 0
};

/// lim P(C^k) on the d-regular tree with exponential spreading times.
CkValue ck_limit_checked(std::uint64_t d, std::uint64_t k);
double ck_limit(std::uint64_t d, std::uint64_t k);

/// k (k + 1) (1/2)^(k-1).
double ck_upper_bound(std::uint64_t k);

/// Beta parameters of the limiting parent-side subtree fraction for the
/// k-th infected node: (k - 1 + 1/(d-2), 1 + 1/(d-2)).
std::pair<double, double> beta_limit_params(std::uint64_t d, std::uint64_t k);

/// Root alpha > 0 of gamma * integral e^{-alpha y} dF(y) = 1, gamma > 1.
double malthusian(double gamma, const SpreadingTimeSpec& dist);

/// c' = (m - 1) / (alpha m^2 integral y e^{-alpha y} dF(y)).
double branching_constant(double gamma, const SpreadingTimeSpec& dist);

/// Smallest fixed point of the offspring pgf on [0, 1].
double extinction_prob(const OffspringSpec& offspring);

struct TheoryCurve {
  std::uint64_t d = 3;
  std::vector<CkValue> values;  // values[k-1] for k = 1..K
};

TheoryCurve theory_curve(std::uint64_t d, std::uint64_t k_max);

}  // namespace rumor::theory
