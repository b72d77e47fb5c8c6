#pragma once

// Country development score (weighted sum of seven primary indicators) and
// the leave-one-out Global Equity index.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "equimine/errors.hpp"

namespace equimine::equity {

inline constexpr std::size_t kIndicatorCount = 7;

// Canonical indicator order used by every 7-vector in the library.
inline constexpr std::array<std::string_view, kIndicatorCount> kIndicatorNames = {"ei", "idg", "cea", "ma",
                                                                                  "hr", "er",  "sa"};

// Published development-score coefficients (EI, IDG, CEA, MA, HR, ER, SA).
inline constexpr std::array<double, kIndicatorCount> kDefaultWeights = {0.187, 0.387,  0.097, 0.0436,
                                                                        0.086, 0.0831, 0.117};

struct IndicatorVector {
  double ei = 0.0;
  double idg = 0.0;
  double cea = 0.0;
  double ma = 0.0;
  double hr = 0.0;
  double er = 0.0;
  double sa = 0.0;

  std::array<double, kIndicatorCount> as_array() const { return {ei, idg, cea, ma, hr, er, sa}; }

  static IndicatorVector from_array(std::span<const double> v) {
    if (v.size() != kIndicatorCount) throw ValidationError("indicator vector needs exactly 7 values");
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  }

  void validate() const {
    for (double x : as_array()) {
      if (!std::isfinite(x)) throw ValidationError("indicator vector has a non-finite field");
    }
  }
};

inline double country_score(const IndicatorVector& v, std::span<const double> weights = kDefaultWeights) {
  if (weights.size() != kIndicatorCount) {
    throw ValidationError("development score needs 7 weights, got " + std::to_string(weights.size()));
  }
  v.validate();
  const auto x = v.as_array();
  double score = 0.0;
  for (std::size_t i = 0; i < kIndicatorCount; ++i) score += weights[i] * x[i];
  return score;
}

struct YearScores {
  int year = 0;
  std::vector<double> scores;  // one per country, same order every year
};

struct EquitySeries {
  std::string country;
  std::vector<std::pair<int, double>> scores_by_year;
};

// Leave-one-out ratios of one year slice: score_k / mean of the others.
inline std::vector<double> leave_one_out_ratios(const YearScores& slice, std::span<const std::string> countries = {}) {
  const std::size_t n = slice.scores.size();
  if (n < 2) throw ValidationError("equity index needs at least 2 countries");
  double total = 0.0;
  for (double s : slice.scores) {
    if (!std::isfinite(s)) throw ValidationError("non-finite development score in year " + std::to_string(slice.year));
    total += s;
  }
  std::vector<double> ratios(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double others = (total - slice.scores[k]) / static_cast<double>(n - 1);
    if (others == 0.0) {
      throw SingularityError(k < countries.size() ? countries[k] : "#" + std::to_string(k), slice.year);
    }
    ratios[k] = slice.scores[k] / others;
  }
  return ratios;
}

// Variance of leave-one-out ratios within each year, averaged over years:
// GE = 1/(T n) sum_t sum_k (ratio_kt - mean_t)^2.
inline double global_equity_index(std::span<const YearScores> years, std::span<const std::string> countries = {}) {
  if (years.empty()) throw ValidationError("equity index needs at least one year");
  const std::size_t n = years.front().scores.size();
  if (n < 2) throw ValidationError("equity index needs at least 2 countries");
  double sum = 0.0;
  for (const auto& slice : years) {
    if (slice.scores.size() != n) {
      throw ValidationError("year " + std::to_string(slice.year) + " has " + std::to_string(slice.scores.size()) +
                            " scores, expected " + std::to_string(n));
    }
    const auto ratios = leave_one_out_ratios(slice, countries);
    double mean = 0.0;
    for (double r : ratios) mean += r;
    mean /= static_cast<double>(n);
    for (double r : ratios) sum += (r - mean) * (r - mean);
  }
  return sum / (static_cast<double>(years.size()) * static_cast<double>(n));
}

}  // namespace equimine::equity
