#pragma once

// Asteroid extraction-rate curve: a located and scaled Student-t density,
// renormalized over t >= 0 so that the whole extractable value V is mined
// over the positive half-line. Income over a window integrates the rate.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "equimine/errors.hpp"
#include "equimine/numeric.hpp"

namespace equimine::mining {

inline constexpr double kDefaultDof = 5.0;
inline constexpr double kDefaultLocation = 15.0;  // years until mining is achieved
inline constexpr double kDefaultScale = 5.0;
inline constexpr double kDefaultTotalValue = 70e12;
// Absolute quadrature tolerance on the rate integral; income error is this times V.
inline constexpr double kIncomeTolerance = 1e-9;

enum class IncomeMode { kCumulative, kPaperLiteral };

inline std::string_view to_string(IncomeMode mode) {
  return mode == IncomeMode::kCumulative ? "cumulative" : "paper-literal";
}

inline IncomeMode parse_income_mode(std::string_view name) {
  if (name == "cumulative") return IncomeMode::kCumulative;
  if (name == "paper-literal") return IncomeMode::kPaperLiteral;
  throw ValidationError("unknown income mode '" + std::string(name) + "'");
}

class MiningCurveParams {
 public:
  MiningCurveParams(double dof = kDefaultDof, double location = kDefaultLocation, double scale = kDefaultScale,
                    double total_value = kDefaultTotalValue)
      : dof_(dof), location_(location), scale_(scale), total_value_(total_value) {
    if (!(std::isfinite(dof) && dof > 0.0)) throw ValidationError("mining curve dof must be positive");
    if (!(std::isfinite(scale) && scale > 0.0)) throw ValidationError("mining curve scale must be positive");
    if (!std::isfinite(location)) throw ValidationError("mining curve location must be finite");
    if (!(std::isfinite(total_value) && total_value >= 0.0)) {
      throw ValidationError("total extractable value must be non-negative");
    }
    // Mass of the located density on t >= 0 is P(Y > -location/scale).
    const double y0 = location / scale;
    const double coeff = numeric::student_t_coefficient(dof);
    auto density = [&](double y) { return coeff * std::pow(1.0 + y * y / dof, -0.5 * (dof + 1.0)); };
    positive_mass_ = 0.5 + numeric::integrate(density, 0.0, y0, 1e-14).value;
    if (!(positive_mass_ > 0.0 && positive_mass_ <= 1.0 + 1e-12)) {
      throw ValidationError("mining curve has no usable mass on t >= 0");
    }
    positive_mass_ = std::min(positive_mass_, 1.0);
  }

  double dof() const noexcept { return dof_; }
  double location() const noexcept { return location_; }
  double scale() const noexcept { return scale_; }
  double total_value() const noexcept { return total_value_; }
  double positive_mass() const noexcept { return positive_mass_; }

 private:
  double dof_;
  double location_;
  double scale_;
  double total_value_;
  double positive_mass_ = 1.0;
};

struct RevenueWindow {
  double t1 = 0.0;
  double t2 = std::numeric_limits<double>::infinity();
  double cost = 0.0;

  void validate() const {
    if (!(std::isfinite(t1) && t1 >= 0.0)) throw ValidationError("revenue window start must be finite and >= 0");
    if (std::isnan(t2) || t2 < t1) throw ValidationError("revenue window end must not precede its start");
    if (!(std::isfinite(cost) && cost >= 0.0)) throw ValidationError("cost must be finite and non-negative");
  }
};

// Located/scaled density before renormalization to the positive half-line.
inline double unnormalized_rate(double t, const MiningCurveParams& p) {
  return numeric::student_t_pdf((t - p.location()) / p.scale(), p.dof()) / p.scale();
}

// Fraction of V extracted per year at time t.
inline double extraction_rate(double t, const MiningCurveParams& p) {
  if (t < 0.0) return 0.0;
  if (std::isinf(t)) return 0.0;
  return unnormalized_rate(t, p) / p.positive_mass();
}

// Fraction of V extracted over [t1, t2]; t2 may be +inf.
// The window is split at the mode and a few scales either side so a narrow
// peak cannot slip between the first quadrature nodes.
inline double extracted_fraction(double t1, double t2, const MiningCurveParams& p, double tol = kIncomeTolerance) {
  auto rate = [&](double t) { return extraction_rate(t, p); };
  std::vector<double> cuts{t1};
  for (double k : {-20.0, -3.0, 0.0, 3.0, 20.0}) {
    const double c = p.location() + k * p.scale();
    if (c > t1 && c < t2) cuts.push_back(c);
  }
  const double piece_tol = tol / static_cast<double>(cuts.size() + 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += numeric::integrate(rate, cuts[i], cuts[i + 1], piece_tol).value;
  }
  if (std::isinf(t2)) return total + numeric::integrate_to_infinity(rate, cuts.back(), piece_tol).value;
  return total + numeric::integrate(rate, cuts.back(), t2, piece_tol).value;
}

inline double income(const RevenueWindow& window, const MiningCurveParams& p,
                     IncomeMode mode = IncomeMode::kCumulative) {
  window.validate();
  if (mode == IncomeMode::kPaperLiteral) {
    // Integral of the rate's derivative: a density difference.
    return p.total_value() * (extraction_rate(window.t2, p) - extraction_rate(window.t1, p));
  }
  if (window.t1 == window.t2) return 0.0;
  return p.total_value() * extracted_fraction(window.t1, window.t2, p);
}

inline double profit(double income_value, double cost) { return income_value - cost; }

}  // namespace equimine::mining
