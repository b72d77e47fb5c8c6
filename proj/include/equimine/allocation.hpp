#pragma once

// Splits a mining profit pool across countries in proportion to their
// scores, boosting the poorest countries by a poverty multiplier.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "equimine/errors.hpp"

namespace equimine::allocation {

enum class AllocationMode { kConserve, kPaperLiteral };

inline std::string_view to_string(AllocationMode mode) {
  return mode == AllocationMode::kConserve ? "conserve" : "paper-literal";
}

inline AllocationMode parse_allocation_mode(std::string_view name) {
  if (name == "conserve") return AllocationMode::kConserve;
  if (name == "paper-literal") return AllocationMode::kPaperLiteral;
  throw ValidationError("unknown allocation mode '" + std::string(name) + "'");
}

struct PovertyPolicy {
  std::size_t bottom_count = 20;
  double multiplier = 1.2;
};

struct CountryGdp {
  std::string country;
  double gdp = 0.0;
};

struct CountryShare {
  std::string country;
  double gamma = 1.0;
  double raw_share = 0.0;
  double conserved_share = 0.0;
};

struct AllocationResult {
  std::vector<CountryShare> shares;
  double total_profit = 0.0;
  double over_allocation = 0.0;  // sum of raw shares minus total_profit
  AllocationMode mode = AllocationMode::kConserve;

  // The share reported under `mode`.
  double share(std::size_t k) const {
    return mode == AllocationMode::kConserve ? shares[k].conserved_share : shares[k].raw_share;
  }
};

// Gamma per country, in input order. The `bottom_count` lowest-GDP countries
// get the multiplier; ties at the cutoff resolve by label.
inline std::vector<double> poverty_multipliers(std::span<const CountryGdp> gdp, const PovertyPolicy& policy = {}) {
  if (!(std::isfinite(policy.multiplier) && policy.multiplier >= 1.0)) {
    throw ValidationError("poverty multiplier must be >= 1");
  }
  if (policy.bottom_count == 0) throw ValidationError("poverty bottom count must be positive");
  if (policy.bottom_count > gdp.size()) {
    throw ValidationError("poverty bottom count " + std::to_string(policy.bottom_count) + " exceeds country count " +
                          std::to_string(gdp.size()));
  }
  std::set<std::string> seen;
  for (const auto& c : gdp) {
    if (!seen.insert(c.country).second) throw ValidationError("duplicate country '" + c.country + "' in GDP table");
    if (!(std::isfinite(c.gdp) && c.gdp >= 0.0)) {
      throw ValidationError("GDP for '" + c.country + "' must be finite and non-negative");
    }
  }
  std::vector<std::size_t> order(gdp.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (gdp[a].gdp != gdp[b].gdp) return gdp[a].gdp < gdp[b].gdp;
    return gdp[a].country < gdp[b].country;
  });
  std::vector<double> gamma(gdp.size(), 1.0);
  for (std::size_t r = 0; r < policy.bottom_count; ++r) gamma[order[r]] = policy.multiplier;
  return gamma;
}

inline AllocationResult allocate(double total_profit, std::span<const std::string> countries,
                                 std::span<const double> scores, std::span<const double> gammas,
                                 AllocationMode mode = AllocationMode::kConserve) {
  const std::size_t n = scores.size();
  if (countries.size() != n || gammas.size() != n) {
    throw ValidationError("allocation inputs have mismatched lengths");
  }
  if (!(std::isfinite(total_profit) && total_profit >= 0.0)) {
    throw ValidationError("total profit must be finite and non-negative");
  }
  double score_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(scores[k]) || scores[k] < 0.0) {
      throw ValidationError("allocation score for '" + countries[k] + "' must be finite and non-negative");
    }
    if (!(std::isfinite(gammas[k]) && gammas[k] > 0.0)) {
      throw ValidationError("poverty multiplier for '" + countries[k] + "' must be positive");
    }
    score_sum += scores[k];
  }
  if (!(score_sum > 0.0)) throw ValidationError("allocation scores must have a positive sum");

  AllocationResult out;
  out.total_profit = total_profit;
  out.mode = mode;
  out.shares.resize(n);
  double raw_total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    auto& s = out.shares[k];
    s.country = countries[k];
    s.gamma = gammas[k];
    s.raw_share = gammas[k] * total_profit * scores[k] / score_sum;
    raw_total += s.raw_share;
  }
  // Rescaling the raw shares keeps hand-sized cases exact.
  for (auto& s : out.shares) {
    s.conserved_share = raw_total > 0.0 ? s.raw_share * total_profit / raw_total : 0.0;
  }
  out.over_allocation = raw_total - total_profit;
  return out;
}

}  // namespace equimine::allocation
