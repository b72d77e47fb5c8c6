#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "equimine/numeric.hpp"
#include "equimine/topsis.hpp"
#include "oracles.hpp"

using namespace equimine::topsis;

namespace {

DecisionMatrix make(std::vector<std::vector<double>> values, std::vector<IndicatorKind> kinds) {
  DecisionMatrix m;
  m.values = std::move(values);
  m.kinds = std::move(kinds);
  for (std::size_t i = 0; i < m.values.size(); ++i) m.alternatives.push_back("a" + std::to_string(i));
  for (std::size_t j = 0; j < m.kinds.size(); ++j) m.indicators.push_back("x" + std::to_string(j));
  return m;
}

struct RandomCase {
  DecisionMatrix matrix;
  std::vector<oracle::TopsisColumn> columns;
};

RandomCase random_case(equimine::numeric::Rng& rng, std::size_t n = 5, std::size_t m = 4) {
  RandomCase c;
  std::vector<IndicatorKind> kinds;
  for (std::size_t j = 0; j < m; ++j) {
    const int kind = static_cast<int>(rng.next() % 3);
    const double best = rng.uniform(2.0, 8.0);
    c.columns.push_back({kind, best});
    kinds.push_back(kind == 0 ? IndicatorKind::benefit()
                              : kind == 1 ? IndicatorKind::cost() : IndicatorKind::intermediate(best));
  }
  std::vector<std::vector<double>> values(n, std::vector<double>(m));
  for (auto& row : values)
    for (auto& v : row) v = rng.uniform(0.0, 10.0);
  c.matrix = make(values, kinds);
  return c;
}

}  // namespace

TEST(ForwardColumn, IntermediateKind) {
  const std::vector<double> col{1, 3, 5};
  const auto out = forward_column(col, IndicatorKind::intermediate(3));
  EXPECT_EQ(out, (std::vector<double>{0, 1, 0}));
}

TEST(ForwardColumn, BenefitIsIdentity) {
  const std::vector<double> col{2, 7};
  EXPECT_EQ(forward_column(col, IndicatorKind::benefit()), col);
}

TEST(ForwardColumn, CostSubtractsFromMax) {
  const std::vector<double> col{2, 7, 4};
  EXPECT_EQ(forward_column(col, IndicatorKind::cost()), (std::vector<double>{5, 0, 3}));
}

TEST(ForwardColumn, AllAtBestGivesOnes) {
  const std::vector<double> col{3, 3, 3};
  EXPECT_EQ(forward_column(col, IndicatorKind::intermediate(3)), (std::vector<double>{1, 1, 1}));
}

TEST(ForwardColumn, EmptyColumnIsRejected) {
  EXPECT_THROW(forward_column({}, IndicatorKind::benefit()), equimine::ValidationError);
}

TEST(Normalize, PythagoreanColumn) {
  const auto z = normalize(make({{3}, {4}}, {IndicatorKind::benefit()}));
  EXPECT_DOUBLE_EQ(z.values[0][0], 0.6);
  EXPECT_DOUBLE_EQ(z.values[1][0], 0.8);
}

TEST(Normalize, SingleAlternative) {
  EXPECT_EQ(normalize(make({{5}}, {IndicatorKind::benefit()})).values[0][0], 1.0);
}

TEST(Normalize, EqualEntries) {
  const auto z = normalize(make({{1}, {1}}, {IndicatorKind::benefit()}));
  EXPECT_NEAR(z.values[0][0], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(z.values[1][0], 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Normalize, ZeroColumnNamesIndicator) {
  auto m = make({{0, 1}, {0, 2}}, {IndicatorKind::benefit(), IndicatorKind::benefit()});
  m.indicators = {"launches", "patents"};
  try {
    normalize(m);
    FAIL() << "expected DegenerateColumnError";
  } catch (const equimine::DegenerateColumnError& e) {
    EXPECT_EQ(e.indicator(), "launches");
  }
}

TEST(Score, SymmetricCase) {
  const auto s = score(make({{1, 0}, {0, 1}}, {IndicatorKind::benefit(), IndicatorKind::benefit()}));
  EXPECT_DOUBLE_EQ(s.d_plus[0], 1.0);
  EXPECT_DOUBLE_EQ(s.d_plus[1], 1.0);
  EXPECT_DOUBLE_EQ(s.d_minus[0], 1.0);
  EXPECT_DOUBLE_EQ(s.d_minus[1], 1.0);
  EXPECT_DOUBLE_EQ(s.s[0], 0.5);
  EXPECT_DOUBLE_EQ(s.s[1], 0.5);
  EXPECT_EQ(s.ranking, (std::vector<std::size_t>{0, 1}));  // stable ties
}

TEST(Score, DominanceForcesExtremes) {
  const auto s = rank(make({{2, 2}, {1, 1}}, {IndicatorKind::benefit(), IndicatorKind::benefit()}));
  EXPECT_DOUBLE_EQ(s.s[0], 1.0);
  EXPECT_DOUBLE_EQ(s.s[1], 0.0);
  EXPECT_EQ(s.rank, (std::vector<std::size_t>{1, 2}));
}

TEST(Score, SingleAlternativeScoresOne) {
  const auto s = rank(make({{4, 2}}, {IndicatorKind::benefit(), IndicatorKind::cost()}));
  EXPECT_EQ(s.s[0], 1.0);
  EXPECT_EQ(s.s_normalized[0], 1.0);
}

TEST(Score, IdenticalRowsScoreOneHalf) {
  const auto s = rank(make({{3, 1}, {3, 1}, {3, 1}}, {IndicatorKind::benefit(), IndicatorKind::benefit()}));
  for (double x : s.s) EXPECT_EQ(x, 0.5);
  for (double x : s.s_normalized) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
}

TEST(Score, WeightLengthIsValidated) {
  const auto m = make({{1, 0}, {0, 1}}, {IndicatorKind::benefit(), IndicatorKind::benefit()});
  EXPECT_THROW(score(m, std::vector<double>{1.0}), equimine::ValidationError);
}

TEST(Score, UniformWeightScalingIsNeutral) {
  equimine::numeric::Rng rng(4);
  const auto c = random_case(rng);
  const auto base = rank(c.matrix);
  const auto weighted = rank(c.matrix, std::vector<double>(4, 0.25));
  for (std::size_t i = 0; i < base.s.size(); ++i) EXPECT_NEAR(base.s[i], weighted.s[i], 1e-14);
}

TEST(Score, MatchesStepByStepOracle) {
  equimine::numeric::Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = random_case(rng);
    const auto got = rank(c.matrix);
    const auto want = oracle::topsis(c.matrix.values, c.columns);
    for (std::size_t i = 0; i < got.s.size(); ++i) {
      EXPECT_NEAR(got.d_plus[i], want.d_plus[i], 1e-12);
      EXPECT_NEAR(got.d_minus[i], want.d_minus[i], 1e-12);
      EXPECT_NEAR(got.s[i], want.s[i], 1e-12);
      EXPECT_NEAR(got.s_normalized[i], want.s_tilde[i], 1e-12);
    }
  }
}

TEST(ScoreProperties, RangeAndNormalization) {
  equimine::numeric::Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = rank(random_case(rng, 3 + trial % 6, 1 + trial % 5).matrix);
    for (double x : s.s) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    EXPECT_NEAR(std::accumulate(s.s_normalized.begin(), s.s_normalized.end(), 0.0), 1.0, 1e-9);
  }
}

TEST(ScoreProperties, MonotonicDominance) {
  equimine::numeric::Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_case(rng);
    const auto forwarded = forward(c.matrix);
    // Make row 1 dominate row 0 after forwarding by copying and bumping.
    auto m = forwarded;
    m.values[1] = m.values[0];
    m.values[1][trial % 4] += 0.5;
    const auto s = score(normalize(m));
    EXPECT_GE(s.s[1], s.s[0]);
  }
}

// Euclidean column normalization depends on every row, so a duplicated row
// reweights the columns and can reverse the order of the others.
TEST(ScoreProperties, DuplicatingARowCanReverseOrder) {
  const auto m = make({{1, 0}, {0, 2}, {0.9, 0.9}}, {IndicatorKind::benefit(), IndicatorKind::benefit()});
  const auto base = rank(m);
  EXPECT_LT(base.s[0], base.s[1]);
  auto dup = m;
  dup.values.push_back(dup.values[1]);
  dup.alternatives.push_back("dup");
  const auto with_dup = rank(dup);
  EXPECT_GT(with_dup.s[0], with_dup.s[1]);
  EXPECT_EQ(with_dup.s[1], with_dup.s[3]);
}

TEST(ScoreProperties, DuplicateRowScoresMatchOriginal) {
  equimine::numeric::Rng rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    auto c = random_case(rng);
    c.matrix.values.push_back(c.matrix.values[trial % 5]);
    c.matrix.alternatives.push_back("dup");
    const auto s = rank(c.matrix);
    EXPECT_EQ(s.s[5], s.s[trial % 5]);
    EXPECT_LT(s.rank[trial % 5], s.rank[5]);  // stable tie order
  }
}

TEST(ScoreProperties, ColumnScaleInvariance) {
  equimine::numeric::Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    auto c = random_case(rng);
    const auto base = rank(c.matrix);
    const std::size_t j = trial % 4;
    const double factor = rng.uniform(0.1, 50.0);
    for (auto& row : c.matrix.values) row[j] *= factor;
    if (c.matrix.kinds[j].type == IndicatorKind::Type::kIntermediate) c.matrix.kinds[j].best *= factor;
    const auto scaled = rank(c.matrix);
    for (std::size_t i = 0; i < base.s.size(); ++i) EXPECT_NEAR(base.s[i], scaled.s[i], 1e-12);
  }
}
