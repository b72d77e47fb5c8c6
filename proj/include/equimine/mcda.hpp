#pragma once

// Analytic hierarchy process: weights from a pairwise comparison matrix by
// the arithmetic-mean, geometric-mean and eigenvalue methods, plus the
// CI/CR consistency check against the random index table.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "equimine/errors.hpp"

namespace equimine::mcda {

inline constexpr double kReciprocityTolerance = 1e-9;
inline constexpr double kPowerIterationTolerance = 1e-12;
inline constexpr std::size_t kPowerIterationCap = 10'000;
inline constexpr double kConsistencyThreshold = 0.1;

enum class WeightingMethod { kArithmeticMean, kGeometricMean, kEigenvalue };

inline std::string_view to_string(WeightingMethod method) {
  switch (method) {
    case WeightingMethod::kArithmeticMean: return "arithmetic-mean";
    case WeightingMethod::kGeometricMean: return "geometric-mean";
    case WeightingMethod::kEigenvalue: return "eigenvalue";
  }
  return "unknown";
}

inline WeightingMethod parse_weighting_method(std::string_view name) {
  if (name == "arithmetic-mean" || name == "arithmetic") return WeightingMethod::kArithmeticMean;
  if (name == "geometric-mean" || name == "geometric") return WeightingMethod::kGeometricMean;
  if (name == "eigenvalue" || name == "eigen") return WeightingMethod::kEigenvalue;
  throw ValidationError("unknown weighting method '" + std::string(name) + "'");
}

// Square positive reciprocal matrix. Construction validates reciprocity to a
// relative tolerance and then stores the exactly reciprocal version
// (lower triangle := 1 / upper triangle).
class PairwiseMatrix {
 public:
  PairwiseMatrix(std::vector<std::vector<double>> entries, std::vector<std::string> labels = {})
      : labels_(std::move(labels)) {
    n_ = entries.size();
    if (n_ == 0) throw ValidationError("pairwise matrix is empty");
    if (labels_.empty()) {
      for (std::size_t i = 0; i < n_; ++i) labels_.push_back("c" + std::to_string(i + 1));
    }
    if (labels_.size() != n_) throw ValidationError("pairwise matrix label count does not match its size");
    data_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      if (entries[i].size() != n_) {
        throw ValidationError("pairwise matrix row " + std::to_string(i + 1) + " has " +
                              std::to_string(entries[i].size()) + " entries, expected " + std::to_string(n_));
      }
      for (std::size_t j = 0; j < n_; ++j) {
        const double v = entries[i][j];
        if (!std::isfinite(v) || v <= 0.0) {
          throw ValidationError("pairwise entry (" + labels_[i] + ", " + labels_[j] + ") must be positive");
        }
        data_[i * n_ + j] = v;
      }
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (at(i, i) != 1.0) throw ValidationError("pairwise diagonal entry for '" + labels_[i] + "' is not 1");
      for (std::size_t j = i + 1; j < n_; ++j) {
        if (std::abs(at(i, j) * at(j, i) - 1.0) > kReciprocityTolerance) {
          throw ValidationError("pairwise entries (" + labels_[i] + ", " + labels_[j] + ") are not reciprocal");
        }
        data_[j * n_ + i] = 1.0 / at(i, j);
      }
    }
  }

  std::size_t size() const noexcept { return n_; }
  double at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  // Builds the perfectly consistent matrix a_ij = v_i / v_j.
  static PairwiseMatrix from_priorities(const std::vector<double>& v, std::vector<std::string> labels = {}) {
    std::vector<std::vector<double>> m(v.size(), std::vector<double>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m[i][j] = i == j ? 1.0 : v[i] / v[j];
    return PairwiseMatrix(std::move(m), std::move(labels));
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
  std::vector<std::string> labels_;
};

struct WeightVector {
  std::vector<double> weights;
  WeightingMethod method = WeightingMethod::kEigenvalue;
  std::vector<std::string> labels;
};

namespace detail {

inline void normalize_sum(std::vector<double>& v) {
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  for (auto& x : v) x /= total;
}

inline std::vector<double> arithmetic_mean(const PairwiseMatrix& m) {
  const std::size_t n = m.size();
  std::vector<double> col_sum(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) col_sum[j] += m.at(i, j);
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w[i] += m.at(i, j) / col_sum[j];
    w[i] /= static_cast<double>(n);
  }
  normalize_sum(w);
  return w;
}

inline std::vector<double> geometric_mean(const PairwiseMatrix& m) {
  const std::size_t n = m.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double log_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) log_sum += std::log(m.at(i, j));
    w[i] = std::exp(log_sum / static_cast<double>(n));
  }
  normalize_sum(w);
  return w;
}

inline std::vector<double> multiply(const PairwiseMatrix& m, const std::vector<double>& v) {
  const std::size_t n = m.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] += m.at(i, j) * v[j];
  return out;
}

inline std::vector<double> power_iteration(const PairwiseMatrix& m) {
  const std::size_t n = m.size();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  for (std::size_t iter = 1; iter <= kPowerIterationCap; ++iter) {
    auto next = multiply(m, w);
    normalize_sum(next);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(next[i] - w[i]));
    w = std::move(next);
    if (diff < kPowerIterationTolerance) return w;
  }
  throw ConvergenceError("power iteration for the dominant eigenvector did not converge", kPowerIterationCap);
}

}  // namespace detail

inline WeightVector derive_weights(const PairwiseMatrix& matrix, WeightingMethod method) {
  WeightVector out;
  out.method = method;
  out.labels = matrix.labels();
  switch (method) {
    case WeightingMethod::kArithmeticMean: out.weights = detail::arithmetic_mean(matrix); break;
    case WeightingMethod::kGeometricMean: out.weights = detail::geometric_mean(matrix); break;
    case WeightingMethod::kEigenvalue: out.weights = detail::power_iteration(matrix); break;
  }
  return out;
}

// Random consistency index by matrix order, n = 1..10.
class RiTable {
 public:
  RiTable() : values_{0.00, 0.00, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49} {}
  explicit RiTable(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t max_order() const noexcept { return values_.size(); }

  double lookup(std::size_t n) const {
    if (n < 1 || n > values_.size()) {
      throw RangeError("no random index for matrix order " + std::to_string(n) + " (table covers 1.." +
                       std::to_string(values_.size()) + ")");
    }
    return values_[n - 1];
  }

 private:
  std::vector<double> values_;
};

struct ConsistencyReport {
  std::size_t n = 0;
  double lambda_max = 0.0;
  double ci = 0.0;
  double ri = 0.0;
  double cr = 0.0;
  bool passes = true;
};

// CI/CR from a known dominant eigenvalue. Orders 1 and 2 are consistent by
// construction, so CR is 0 there regardless of RI.
inline ConsistencyReport consistency_from_lambda(double lambda_max, std::size_t n, double ri) {
  ConsistencyReport r;
  r.n = n;
  r.lambda_max = lambda_max;
  r.ri = ri;
  r.ci = n > 1 ? (lambda_max - static_cast<double>(n)) / static_cast<double>(n - 1) : 0.0;
  r.cr = (n <= 2 || ri == 0.0) ? 0.0 : r.ci / ri;
  r.passes = r.cr < kConsistencyThreshold;
  return r;
}

// Rayleigh-style estimate: mean over i of (A w)_i / w_i with eigenvalue-method w.
inline double lambda_max(const PairwiseMatrix& matrix, const std::vector<double>& eigen_weights) {
  const auto aw = detail::multiply(matrix, eigen_weights);
  double sum = 0.0;
  for (std::size_t i = 0; i < aw.size(); ++i) sum += aw[i] / eigen_weights[i];
  return sum / static_cast<double>(aw.size());
}

inline ConsistencyReport consistency(const PairwiseMatrix& matrix, const RiTable& table = {},
                                     std::optional<double> ri_override = std::nullopt) {
  const std::size_t n = matrix.size();
  const double ri = ri_override ? *ri_override : table.lookup(n);
  const auto w = derive_weights(matrix, WeightingMethod::kEigenvalue);
  return consistency_from_lambda(lambda_max(matrix, w.weights), n, ri);
}

}  // namespace equimine::mcda
