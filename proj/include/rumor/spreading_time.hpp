#pragma once

#include <string>
#include <string_view>

#include "rumor/rng.hpp"

namespace rumor {

/// Edge spreading-time law. All kinds satisfy F(0) = F(0+) = 0.
struct SpreadingTimeSpec {
  enum class Kind { Exponential, Deterministic, Uniform, Gamma };

  Kind kind = Kind::Exponential;
  double p1 = 1.0;  // rate | value | lo | shape
  double p2 = 0.0;  // unused | unused | hi | rate

  static SpreadingTimeSpec exponential(double rate);
  static SpreadingTimeSpec deterministic(double value);
  static SpreadingTimeSpec uniform(double lo, double hi);
  static SpreadingTimeSpec gamma(double shape, double rate);

  /// Parses the shell grammar `exp:RATE`, `det:VALUE`, `unif:LO,HI`,
  /// `gamma:SHAPE,RATE`. Throws Parse / InvalidArgument.
  static SpreadingTimeSpec parse(std::string_view text);

  /// Throws InvalidArgument when the parameters break the kind's domain.
  void validate() const;

  double mean() const;

  /// Laplace-Stieltjes transform: integral of e^{-s y} dF(y), s >= 0.
  double laplace(double s) const;
  /// Integral of y e^{-s y} dF(y) (minus the transform's derivative).
  double laplace_moment(double s) const;

  std::string to_string() const;

  friend bool operator==(const SpreadingTimeSpec&, const SpreadingTimeSpec&) = default;
};

/// Draws one spreading time; strictly positive with probability one.
class SpreadingTimeSampler {
 public:
  explicit SpreadingTimeSampler(const SpreadingTimeSpec& spec);

  double operator()(Engine& eng);

 private:
  SpreadingTimeSpec spec_;
  std::gamma_distribution<double> gamma_;
};

}  // namespace rumor
