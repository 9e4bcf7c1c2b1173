#include "rumor/spreading_time.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

#include "rumor/error.hpp"

namespace rumor {

namespace {

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto field = text.substr(0, comma);
    // std::from_chars for double is unavailable on older libstdc++ builds.
    std::string buf(field);
    char* end = nullptr;
    double value = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size()) {
      fail(ErrorKind::Parse, "bad number '" + buf + "' in distribution");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

SpreadingTimeSpec SpreadingTimeSpec::exponential(double rate) {
  SpreadingTimeSpec s{Kind::Exponential, rate, 0.0};
  s.validate();
  return s;
}

SpreadingTimeSpec SpreadingTimeSpec::deterministic(double value) {
  SpreadingTimeSpec s{Kind::Deterministic, value, 0.0};
  s.validate();
  return s;
}

SpreadingTimeSpec SpreadingTimeSpec::uniform(double lo, double hi) {
  SpreadingTimeSpec s{Kind::Uniform, lo, hi};
  s.validate();
  return s;
}

SpreadingTimeSpec SpreadingTimeSpec::gamma(double shape, double rate) {
  SpreadingTimeSpec s{Kind::Gamma, shape, rate};
  s.validate();
  return s;
}

SpreadingTimeSpec SpreadingTimeSpec::parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    fail(ErrorKind::Parse, "distribution '" + std::string(text) + "' lacks ':'");
  }
  auto name = text.substr(0, colon);
  auto args = parse_numbers(text.substr(colon + 1));
  auto need = [&](std::size_t k) {
    if (args.size() != k) {
      fail(ErrorKind::Parse, "distribution '" + std::string(name) + "' takes " +
                                 std::to_string(k) + " parameter(s)");
    }
  };
  if (name == "exp") {
    need(1);
    return exponential(args[0]);
  }
  if (name == "det") {
    need(1);
    return deterministic(args[0]);
  }
  if (name == "unif") {
    need(2);
    return uniform(args[0], args[1]);
  }
  if (name == "gamma") {
    need(2);
    return gamma(args[0], args[1]);
  }
  fail(ErrorKind::Parse, "unknown distribution '" + std::string(name) + "'");
}

void SpreadingTimeSpec::validate() const {
  auto bad = [&](const char* why) { fail(ErrorKind::InvalidArgument, to_string() + ": " + why); };
  auto finite = [](double v) { return std::isfinite(v); };
  switch (kind) {
    case Kind::Exponential:
      if (!finite(p1) || p1 <= 0) bad("rate must be > 0");
      break;
    case Kind::Deterministic:
      if (!finite(p1) || p1 <= 0) bad("value must be > 0");
      break;
    case Kind::Uniform:
      if (!finite(p1) || !finite(p2) || p1 < 0 || p2 <= p1) bad("need 0 <= lo < hi");
      break;
    case Kind::Gamma:
      if (!finite(p1) || !finite(p2) || p1 <= 0 || p2 <= 0) bad("shape and rate must be > 0");
      break;
  }
}

double SpreadingTimeSpec::mean() const {
  switch (kind) {
    case Kind::Exponential: return 1.0 / p1;
    case Kind::Deterministic: return p1;
    case Kind::Uniform: return 0.5 * (p1 + p2);
    case Kind::Gamma: return p1 / p2;
  }
  return 0.0;
}

double SpreadingTimeSpec::laplace(double s) const {
  switch (kind) {
    case Kind::Exponential: return p1 / (p1 + s);
    case Kind::Deterministic: return std::exp(-s * p1);
    case Kind::Uniform: {
      const double w = p2 - p1;
      if (s * w < 1e-8) return std::exp(-s * p1) * (1.0 - 0.5 * s * w);
      // e^{-s lo} (1 - e^{-s w}) / (s w)
      return std::exp(-s * p1) * -std::expm1(-s * w) / (s * w);
    }
    case Kind::Gamma: return std::pow(p2 / (p2 + s), p1);
  }
  return 0.0;
}

double SpreadingTimeSpec::laplace_moment(double s) const {
  switch (kind) {
    case Kind::Exponential: return p1 / ((p1 + s) * (p1 + s));
    case Kind::Deterministic: return p1 * std::exp(-s * p1);
    case Kind::Uniform: {
      const double lo = p1, hi = p2, w = hi - lo;
      if (s * hi < 1e-3) {
        // Moment series E[y] - s E[y^2] + s^2/2 E[y^3] - s^3/6 E[y^4].
        const double m1 = 0.5 * (lo + hi);
        const double m2 = (lo * lo + lo * hi + hi * hi) / 3.0;
        const double m3 = (lo + hi) * (lo * lo + hi * hi) / 4.0;
        const double m4 = (std::pow(hi, 5) - std::pow(lo, 5)) / (5.0 * w);
        return m1 - s * m2 + s * s * m3 / 2.0 - s * s * s * m4 / 6.0;
      }
      // (1/w) * [ (lo/s + 1/s^2) e^{-s lo} - (hi/s + 1/s^2) e^{-s hi} ]
      const double a = (lo / s + 1.0 / (s * s)) * std::exp(-s * lo);
      const double b = (hi / s + 1.0 / (s * s)) * std::exp(-s * hi);
      return (a - b) / w;
    }
    case Kind::Gamma: return p1 / p2 * std::pow(p2 / (p2 + s), p1 + 1.0);
  }
  return 0.0;
}

std::string SpreadingTimeSpec::to_string() const {
  switch (kind) {
    case Kind::Exponential: return "exp:" + fmt_double(p1);
    case Kind::Deterministic: return "det:" + fmt_double(p1);
    case Kind::Uniform: return "unif:" + fmt_double(p1) + "," + fmt_double(p2);
    case Kind::Gamma: return "gamma:" + fmt_double(p1) + "," + fmt_double(p2);
  }
  return "?";
}

SpreadingTimeSampler::SpreadingTimeSampler(const SpreadingTimeSpec& spec)
    : spec_(spec),
      gamma_(spec.kind == SpreadingTimeSpec::Kind::Gamma ? spec.p1 : 1.0,
             spec.kind == SpreadingTimeSpec::Kind::Gamma ? 1.0 / spec.p2 : 1.0) {
  spec_.validate();
}

double SpreadingTimeSampler::operator()(Engine& eng) {
  using Kind = SpreadingTimeSpec::Kind;
  switch (spec_.kind) {
    case Kind::Exponential:
      return -std::log(uniform01_open_low(eng)) / spec_.p1;
    case Kind::Deterministic:
      return spec_.p1;
    case Kind::Uniform: {
      // lo = 0 must still give a strictly positive draw.
      double u = spec_.p1 > 0 ? uniform01(eng) : uniform01_open_low(eng);
      return spec_.p1 + (spec_.p2 - spec_.p1) * u;
    }
    case Kind::Gamma: {
      double x;
      do {
        x = gamma_(eng);
      } while (!(x > 0));
      return x;
    }
  }
  return 0.0;
}

}  // namespace rumor
