#pragma once

// Pearson correlation with a two-sided t-test and a coarse strength label.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>

#include "equimine/errors.hpp"
#include "equimine/numeric.hpp"

namespace equimine::stats {

inline constexpr double kDefaultAlpha = 0.05;
inline constexpr double kTailTolerance = 1e-10;

enum class Strength { kNegligible, kWeak, kModerate, kStrong };
enum class Direction { kNegative, kNone, kPositive };

inline std::string_view to_string(Strength s) {
  switch (s) {
    case Strength::kStrong: return "strong";
    case Strength::kModerate: return "moderate";
    case Strength::kWeak: return "weak";
    case Strength::kNegligible: return "negligible";
  }
  return "negligible";
}

inline std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::kPositive: return "positive";
    case Direction::kNegative: return "negative";
    case Direction::kNone: return "none";
  }
  return "none";
}

struct StrengthLabel {
  Strength strength = Strength::kNegligible;
  Direction direction = Direction::kNone;
};

struct TTestResult {
  double t_stat = 0.0;
  double critical_value = 0.0;
  bool significant = false;
};

struct CorrelationResult {
  double r = 0.0;
  std::size_t n = 0;
  double t_stat = 0.0;
  double critical_value = 0.0;
  bool significant = false;
  StrengthLabel strength;
};

// Sample Pearson coefficient, two-pass.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ValidationError("pearson inputs differ in length (" + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()) + ")");
  }
  const std::size_t n = x.size();
  if (n < 3) throw ValidationError("pearson needs at least 3 samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw ValidationError("pearson input is not finite");
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw ZeroVarianceError("first pearson series is constant");
  if (syy == 0.0) throw ZeroVarianceError("second pearson series is constant");
  const double r = sxy / (std::sqrt(sxx) * std::sqrt(syy));
  return std::clamp(r, -1.0, 1.0);
}

// Critical t for an upper-tail probability, found by Newton iteration on the
// quadrature-based tail function.
inline double t_critical_upper(double tail_probability, double dof) {
  if (!(tail_probability > 0.0 && tail_probability < 0.5)) {
    throw RangeError("upper-tail probability must lie in (0, 0.5)");
  }
  if (!(dof > 0.0)) throw RangeError("t distribution needs positive degrees of freedom");
  auto f = [&](double t) { return numeric::student_t_upper_tail(t, dof, kTailTolerance) - tail_probability; };
  auto df = [&](double t) { return -numeric::student_t_pdf(t, dof); };
  double hi = 1.0;
  while (f(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e8) throw RangeError("critical value search exceeded bracket");
  }
  return numeric::bracketed_newton(f, df, 0.0, hi, 1e-12);
}

// Two-sided critical value at level alpha.
inline double t_critical_two_sided(double alpha, double dof) { return t_critical_upper(0.5 * alpha, dof); }

inline TTestResult t_test(double r, std::size_t n, double alpha = kDefaultAlpha) {
  if (n < 3) throw ValidationError("t-test needs n >= 3");
  if (!(std::abs(r) <= 1.0)) throw ValidationError("correlation must lie in [-1, 1]");
  if (!(alpha > 0.0 && alpha < 1.0)) throw RangeError("significance level must lie in (0, 1)");
  TTestResult out;
  const double dof = static_cast<double>(n - 2);
  out.critical_value = t_critical_two_sided(alpha, dof);
  if (std::abs(r) == 1.0) {
    out.t_stat = std::numeric_limits<double>::infinity();
    out.significant = true;
    return out;
  }
  out.t_stat = std::abs(r - 0.0) / std::sqrt((1.0 - r * r) / dof);
  out.significant = out.t_stat > out.critical_value;
  return out;
}

inline StrengthLabel classify_strength(double r) {
  StrengthLabel out;
  const double a = std::abs(r);
  if (a >= 0.8) {
    out.strength = Strength::kStrong;
  } else if (a >= 0.5) {
    out.strength = Strength::kModerate;
  } else if (a >= 0.3) {
    out.strength = Strength::kWeak;
  }
  out.direction = r > 0.0 ? Direction::kPositive : (r < 0.0 ? Direction::kNegative : Direction::kNone);
  return out;
}

inline CorrelationResult correlate(std::span<const double> x, std::span<const double> y,
                                   double alpha = kDefaultAlpha) {
  CorrelationResult out;
  out.r = pearson(x, y);
  out.n = x.size();
  const auto t = t_test(out.r, out.n, alpha);
  out.t_stat = t.t_stat;
  out.critical_value = t.critical_value;
  out.significant = t.significant;
  out.strength = classify_strength(out.r);
  return out;
}

}  // namespace equimine::stats
