#include "rumor/theory.hpp"

#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "rumor/error.hpp"

namespace rumor::theory {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10000;

// Continued fraction for I_x(a, b), valid (fast) for x < (a+1)/(a+b+2).
double beta_cf(double x, double a, double b) {
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  fail(ErrorKind::InvalidArgument, "inc_beta continued fraction did not converge");
}

double front_factor(double x, double a, double b) {
  // x^a (1-x)^b / (a B(a, b)) in log space.
  const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta) / a;
}

void require_degree(std::uint64_t d) {
  if (d < 3) fail(ErrorKind::InvalidArgument, "degree must be >= 3");
}

}  // namespace

double inc_beta(double x, double a, double b) {
  if (!(a > 0) || !(b > 0) || !(x >= 0 && x <= 1) || !std::isfinite(a) || !std::isfinite(b)) {
    fail(ErrorKind::InvalidArgument, "inc_beta needs a, b > 0 and x in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (x <= (a + 1.0) / (a + b + 2.0)) return front_factor(x, a, b) * beta_cf(x, a, b);
  return 1.0 - front_factor(1.0 - x, b, a) * beta_cf(1.0 - x, b, a);
}

double alpha_d(std::uint64_t d) {
  require_degree(d);
  const double e = 1.0 / static_cast<double>(d - 2);
  // d I(e, 1+e) - (d-1) rewritten as 1 - d I(1+e, e), which avoids the
  // cancellation between two numbers of size d when d is large.
  return 1.0 - static_cast<double>(d) * inc_beta(0.5, 1.0 + e, e);
}

CkValue ck_limit_checked(std::uint64_t d, std::uint64_t k) {
  require_degree(d);
  if (k < 1) fail(ErrorKind::InvalidArgument, "k must be >= 1");
  const double e = 1.0 / static_cast<double>(d - 2);
  const double kk = static_cast<double>(k);
  // I(1/2; e, k+e) - 1 = -I(1/2; k+e, e) by symmetry at x = 1/2.
  const double value = inc_beta(0.5, kk - 1.0 + e, 1.0 + e) -
                       static_cast<double>(d - 1) * inc_beta(0.5, kk + e, e);
  if (std::abs(value) < 1e-12) return {0.0, true};
  return {value, false};
}

double ck_limit(std::uint64_t d, std::uint64_t k) { return ck_limit_checked(d, k).value; }

double ck_upper_bound(std::uint64_t k) {
  if (k < 1) fail(ErrorKind::InvalidArgument, "k must be >= 1");
  const double kk = static_cast<double>(k);
  return kk * (kk + 1.0) * std::ldexp(1.0, -static_cast<int>(k - 1));
}

std::pair<double, double> beta_limit_params(std::uint64_t d, std::uint64_t k) {
  require_degree(d);
  if (k < 1) fail(ErrorKind::InvalidArgument, "k must be >= 1");
  const double e = 1.0 / static_cast<double>(d - 2);
  return {static_cast<double>(k) - 1.0 + e, 1.0 + e};
}

double malthusian(double gamma, const SpreadingTimeSpec& dist) {
  if (!(gamma > 1) || !std::isfinite(gamma)) fail(ErrorKind::InvalidArgument, "gamma must be > 1");
  dist.validate();
  // g(a) = gamma L(a) - 1 is decreasing with g(0) = gamma - 1 > 0.
  auto g = [&](double a) { return gamma * dist.laplace(a) - 1.0; };
  double hi = 1.0 / dist.mean();
  while (g(hi) > 0) {
    hi *= 2.0;
    if (hi > 1e300) fail(ErrorKind::InvalidArgument, "malthusian root not bracketed");
  }
  double lo = 0.0;
  std::uintmax_t iters = 400;
  auto tol = [](double x, double y) { return std::abs(x - y) <= 1e-13 * std::max(1.0, std::abs(x)); };
  auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, gamma - 1.0, g(hi), tol, iters);
  return 0.5 * (a + b);
}

double branching_constant(double gamma, const SpreadingTimeSpec& dist) {
  const double a = malthusian(gamma, dist);
  return (gamma - 1.0) / (a * gamma * gamma * dist.laplace_moment(a));
}

double extinction_prob(const OffspringSpec& offspring) {
  offspring.validate();
  if (offspring.pmf(1) >= 1.0) return 0.0;  // eta == 1 surely: f(s) = s
  if (offspring.mean() <= 1.0) return 1.0;
  double s = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    const double next = offspring.pgf(s);
    if (std::abs(next - s) < 1e-15) return next;
    s = next;
  }
  return s;
}

TheoryCurve theory_curve(std::uint64_t d, std::uint64_t k_max) {
  TheoryCurve curve;
  curve.d = d;
  for (std::uint64_t k = 1; k <= k_max; ++k) curve.values.push_back(ck_limit_checked(d, k));
  return curve;
}

}  // namespace rumor::theory
