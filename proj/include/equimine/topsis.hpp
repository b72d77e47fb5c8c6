#pragma once

// TOPSIS ranking: indicator forwarding, vector normalization and relative
// closeness to the per-column ideal and anti-ideal solutions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "equimine/errors.hpp"

namespace equimine::topsis {

struct IndicatorKind {
  enum class Type { kBenefit, kCost, kIntermediate };

  Type type = Type::kBenefit;
  double best = 0.0;  // only meaningful for kIntermediate

  static IndicatorKind benefit() { return {Type::kBenefit, 0.0}; }
  static IndicatorKind cost() { return {Type::kCost, 0.0}; }
  static IndicatorKind intermediate(double x_best) { return {Type::kIntermediate, x_best}; }

  friend bool operator==(const IndicatorKind&, const IndicatorKind&) = default;
};

struct DecisionMatrix {
  std::vector<std::vector<double>> values;  // alternatives x indicators
  std::vector<std::string> alternatives;
  std::vector<std::string> indicators;
  std::vector<IndicatorKind> kinds;

  std::size_t rows() const noexcept { return values.size(); }
  std::size_t cols() const noexcept { return kinds.size(); }

  void validate() const {
    if (values.empty()) throw ValidationError("decision matrix has no alternatives");
    if (kinds.empty()) throw ValidationError("decision matrix has no indicators");
    if (alternatives.size() != values.size()) throw ValidationError("alternative label count mismatch");
    if (indicators.size() != kinds.size()) throw ValidationError("indicator label count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i].size() != kinds.size()) {
        throw ValidationError("alternative '" + alternatives[i] + "' has " + std::to_string(values[i].size()) +
                              " values, expected " + std::to_string(kinds.size()));
      }
      for (double v : values[i]) {
        if (!std::isfinite(v)) throw ValidationError("alternative '" + alternatives[i] + "' has a non-finite value");
      }
    }
    for (std::size_t j = 0; j < kinds.size(); ++j) {
      if (kinds[j].type == IndicatorKind::Type::kIntermediate && !std::isfinite(kinds[j].best)) {
        throw ValidationError("intermediate indicator '" + indicators[j] + "' needs a finite best value");
      }
    }
  }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(rows());
    for (std::size_t i = 0; i < rows(); ++i) out[i] = values[i][j];
    return out;
  }

  void set_column(std::size_t j, std::span<const double> col) {
    for (std::size_t i = 0; i < rows(); ++i) values[i][j] = col[i];
  }
};

struct TopsisScores {
  std::vector<double> d_plus;
  std::vector<double> d_minus;
  std::vector<double> s;
  std::vector<double> s_normalized;
  std::vector<std::size_t> ranking;  // alternative indices, best first
  std::vector<std::size_t> rank;     // 1-based rank of each alternative
};

// Converts one indicator column to benefit orientation.
inline std::vector<double> forward_column(std::span<const double> column, IndicatorKind kind) {
  if (column.empty()) throw ValidationError("cannot forward an empty indicator column");
  for (double v : column) {
    if (!std::isfinite(v)) throw ValidationError("indicator column contains a non-finite value");
  }
  std::vector<double> out(column.begin(), column.end());
  switch (kind.type) {
    case IndicatorKind::Type::kBenefit: break;
    case IndicatorKind::Type::kCost: {
      const double top = *std::max_element(column.begin(), column.end());
      for (auto& x : out) x = top - x;
      break;
    }
    case IndicatorKind::Type::kIntermediate: {
      if (!std::isfinite(kind.best)) throw ValidationError("intermediate indicator needs a finite best value");
      double spread = 0.0;
      for (double x : column) spread = std::max(spread, std::abs(x - kind.best));
      if (spread == 0.0) {
        std::fill(out.begin(), out.end(), 1.0);
      } else {
        for (auto& x : out) x = 1.0 - std::abs(x - kind.best) / spread;
      }
      break;
    }
  }
  return out;
}

inline DecisionMatrix forward(const DecisionMatrix& matrix) {
  matrix.validate();
  DecisionMatrix out = matrix;
  for (std::size_t j = 0; j < matrix.cols(); ++j) {
    const auto col = matrix.column(j);
    out.set_column(j, forward_column(col, matrix.kinds[j]));
    out.kinds[j] = IndicatorKind::benefit();
  }
  return out;
}

// Column-wise Euclidean normalization of a forwarded matrix.
inline DecisionMatrix normalize(const DecisionMatrix& matrix) {
  matrix.validate();
  DecisionMatrix out = matrix;
  for (std::size_t j = 0; j < matrix.cols(); ++j) {
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
      const double v = matrix.values[i][j];
      if (v < 0.0) {
        throw ValidationError("indicator '" + matrix.indicators[j] + "' has a negative value after forwarding");
      }
      sum_sq += v * v;
    }
    if (sum_sq == 0.0) throw DegenerateColumnError(matrix.indicators[j]);
    const double norm = std::sqrt(sum_sq);
    for (std::size_t i = 0; i < matrix.rows(); ++i) out.values[i][j] = matrix.values[i][j] / norm;
  }
  return out;
}

// Scores a forwarded and normalized matrix. Optional per-indicator weights
// multiply the normalized columns before distances are taken.
inline TopsisScores score(const DecisionMatrix& matrix, std::optional<std::vector<double>> weights = std::nullopt) {
  matrix.validate();
  const std::size_t n = matrix.rows();
  const std::size_t m = matrix.cols();
  std::vector<double> w(m, 1.0);
  if (weights) {
    if (weights->size() != m) {
      throw ValidationError("TOPSIS weight vector has " + std::to_string(weights->size()) + " entries, expected " +
                            std::to_string(m));
    }
    for (double x : *weights) {
      if (!std::isfinite(x) || x < 0.0) throw ValidationError("TOPSIS weights must be finite and non-negative");
    }
    w = *weights;
  }

  std::vector<std::vector<double>> z(n, std::vector<double>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) z[i][j] = w[j] * matrix.values[i][j];

  std::vector<double> best(m), worst(m);
  for (std::size_t j = 0; j < m; ++j) {
    best[j] = worst[j] = z[0][j];
    for (std::size_t i = 1; i < n; ++i) {
      best[j] = std::max(best[j], z[i][j]);
      worst[j] = std::min(worst[j], z[i][j]);
    }
  }

  TopsisScores out;
  out.d_plus.resize(n);
  out.d_minus.resize(n);
  out.s.resize(n);
  bool degenerate = false;
  for (std::size_t i = 0; i < n; ++i) {
    double plus = 0.0, minus = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      plus += (best[j] - z[i][j]) * (best[j] - z[i][j]);
      minus += (worst[j] - z[i][j]) * (worst[j] - z[i][j]);
    }
    out.d_plus[i] = std::sqrt(plus);
    out.d_minus[i] = std::sqrt(minus);
    const double denom = out.d_plus[i] + out.d_minus[i];
    if (denom > 0.0) {
      out.s[i] = out.d_minus[i] / denom;
    } else {
      degenerate = true;
    }
  }
  if (n == 1) {
    out.s[0] = 1.0;
  } else if (degenerate) {
    // A row at both ideals means every row is identical.
    std::fill(out.s.begin(), out.s.end(), 0.5);
  }

  const double total = std::accumulate(out.s.begin(), out.s.end(), 0.0);
  out.s_normalized.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.s_normalized[i] = total > 0.0 ? out.s[i] / total : 1.0 / static_cast<double>(n);
  }

  out.ranking.resize(n);
  std::iota(out.ranking.begin(), out.ranking.end(), std::size_t{0});
  std::stable_sort(out.ranking.begin(), out.ranking.end(),
                   [&](std::size_t a, std::size_t b) { return out.s[a] > out.s[b]; });
  out.rank.resize(n);
  for (std::size_t r = 0; r < n; ++r) out.rank[out.ranking[r]] = r + 1;
  return out;
}

// forward -> normalize -> score.
inline TopsisScores rank(const DecisionMatrix& raw, std::optional<std::vector<double>> weights = std::nullopt) {
  // A sole alternative scores 1 by definition, even when forwarding leaves a
  // zero column (any cost column of one row).
  if (raw.rows() == 1) return score(forward(raw), std::move(weights));
  return score(normalize(forward(raw)), std::move(weights));
}

}  // namespace equimine::topsis
