#pragma once

// Numerical primitives shared by the mining curve and the t-test:
// adaptive Gauss-Kronrod quadrature, the Student-t density and a
// safeguarded Newton root finder.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "equimine/errors.hpp"

namespace equimine::numeric {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename F>
Segment kronrod15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double kronrod = f_center * kKronrodWeights[7];
  double gauss = f_center * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * sum;
    // Odd Kronrod nodes coincide with the Gauss nodes.
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

// Globally adaptive G7-K15 quadrature over a finite interval. Bisects the
// segment with the largest error estimate until the summed estimate drops
// below `abs_tol`. Throws NumericalError if `max_segments` is exhausted.
template <typename F>
QuadratureResult integrate(const F& f, double a, double b, double abs_tol, std::size_t max_segments = 4000) {
  if (a == b) return {};
  if (a > b) {
    auto r = integrate(f, b, a, abs_tol, max_segments);
    r.value = -r.value;
    return r;
  }
  std::priority_queue<detail::Segment> heap;
  auto first = detail::kronrod15(f, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  std::size_t evaluations = 15;
  while (error > abs_tol) {
    if (heap.size() >= max_segments) {
      throw NumericalError("adaptive quadrature did not converge on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "]",
                           error);
    }
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NumericalError("adaptive quadrature hit floating-point resolution", error);
    }
    const auto left = detail::kronrod15(f, worst.a, mid);
    const auto right = detail::kronrod15(f, mid, worst.b);
    evaluations += 30;
    heap.push(left);
    heap.push(right);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    if (error <= abs_tol) {
      // Resum from the segments so the running update cannot drift.
      total = 0.0;
      error = 0.0;
      auto copy = heap;
      while (!copy.empty()) {
        total += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }
  return {total, error, evaluations};
}

// Integral over [a, +inf) via the substitution t = a + u / (1 - u).
template <typename F>
QuadratureResult integrate_to_infinity(const F& f, double a, double abs_tol, std::size_t max_segments = 4000) {
  auto mapped = [&](double u) {
    const double one_minus = 1.0 - u;
    if (one_minus <= 0.0) return 0.0;
    const double t = a + u / one_minus;
    if (!std::isfinite(t)) return 0.0;
    return f(t) / (one_minus * one_minus);
  };
  return integrate(mapped, 0.0, 1.0, abs_tol, max_segments);
}

// Normalizing constant Gamma((v+1)/2) / (sqrt(v*pi) Gamma(v/2)).
inline double student_t_coefficient(double dof) {
  return std::exp(std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof)) / std::sqrt(dof * std::numbers::pi);
}

inline double student_t_pdf(double y, double dof) {
  return student_t_coefficient(dof) * std::pow(1.0 + y * y / dof, -0.5 * (dof + 1.0));
}

// P(T > t) for t >= 0, by quadrature of the density over [0, t].
inline double student_t_upper_tail(double t, double dof, double abs_tol = 1e-10) {
  const double coeff = student_t_coefficient(dof);
  auto density = [&](double y) { return coeff * std::pow(1.0 + y * y / dof, -0.5 * (dof + 1.0)); };
  if (t < 0.0) return 1.0 - student_t_upper_tail(-t, dof, abs_tol);
  return 0.5 - integrate(density, 0.0, t, abs_tol).value;
}

// Root of a monotone function on [lo, hi] by Newton steps that fall back to
// bisection whenever a step leaves the bracket.
template <typename F, typename DF>
double bracketed_newton(const F& f, const DF& df, double lo, double hi, double x_tol = 1e-12,
                        std::size_t max_iterations = 200) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) throw RangeError("root is not bracketed");
  double x = 0.5 * (lo + hi);
  for (std::size_t i = 0; i < max_iterations; ++i) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (f_lo > 0.0)) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
    }
    const double slope = df(x);
    double next = slope != 0.0 ? x - fx / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < x_tol || hi - lo < x_tol) return next;
    x = next;
  }
  throw ConvergenceError("bracketed Newton iteration did not converge", max_iterations);
}

// splitmix64 generator with a fixed bits-to-double mapping. Distribution
// objects in <random> are implementation-defined and are not used where
// outputs must be reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace equimine::numeric
