// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "equimine/allocation.hpp"
#include "equimine/equity.hpp"
#include "equimine/mcda.hpp"
#include "equimine/mining.hpp"
#include "equimine/numeric.hpp"
#include "equimine/pipeline.hpp"
#include "equimine/sensnet.hpp"
#include "equimine/stats.hpp"
#include "equimine/topsis.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using equimine::numeric::Rng;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  const auto r = equimine::mcda::consistency_from_lambda(7.72, 7, 1.32);
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.pass = std::abs(r.ci - 0.12) <= 1e-4 && std::abs(r.cr - 0.0909) <= 1e-4 && elapsed < 1e-3;
  o.detail = fmt("CI=%.6f CR=%.6f time=%.2es", r.ci, r.cr, elapsed);
  return o;
}

Outcome criterion2() {
  const double table[] = {0.00, 0.00, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49};
  Outcome o;
  Rng rng(2);
  for (std::size_t n = 1; n <= 10; ++n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(0.5, 5.0);
    const auto r = equimine::mcda::consistency(equimine::mcda::PairwiseMatrix::from_priorities(v));
    if (r.ri != table[n - 1]) o.pass = false;
  }
  o.detail = "RI for n=1..10 checked via consistency()";
  return o;
}

Outcome criterion3() {
  using namespace equimine::mcda;
  const auto t0 = Clock::now();
  Rng rng(3);
  double worst = 0.0, worst_ci = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 7);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(0.1, 10.0);
    const auto m = PairwiseMatrix::from_priorities(v);
    const auto a = derive_weights(m, WeightingMethod::kArithmeticMean).weights;
    const auto g = derive_weights(m, WeightingMethod::kGeometricMean).weights;
    const auto e = derive_weights(m, WeightingMethod::kEigenvalue).weights;
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max({worst, std::abs(a[i] - g[i]), std::abs(a[i] - e[i]), std::abs(g[i] - e[i])});
    }
    worst_ci = std::max(worst_ci, std::abs(consistency(m).ci));
  }
  const double elapsed = seconds_since(t0);
  return {worst <= 1e-8 && worst_ci < 1e-8 && elapsed < 5.0,
          fmt("max weight gap=%.2e max CI=%.2e time=%.3fs", worst, worst_ci, elapsed)};
}

Outcome criterion4() {
  using namespace equimine::topsis;
  const auto t0 = Clock::now();
  Rng rng(4);
  double worst = 0.0;
  bool dominance = true;
  for (int trial = 0; trial < 500; ++trial) {
    DecisionMatrix m;
    std::vector<oracle::TopsisColumn> cols;
    for (std::size_t j = 0; j < 4; ++j) {
      const int kind = static_cast<int>(rng.next() % 3);
      const double best = rng.uniform(2.0, 8.0);
      cols.push_back({kind, best});
      m.kinds.push_back(kind == 0 ? IndicatorKind::benefit()
                                  : kind == 1 ? IndicatorKind::cost() : IndicatorKind::intermediate(best));
      m.indicators.push_back("x" + std::to_string(j));
    }
    for (std::size_t i = 0; i < 5; ++i) {
      std::vector<double> row(4);
      for (auto& v : row) v = rng.uniform(0.0, 10.0);
      m.values.push_back(row);
      m.alternatives.push_back("a" + std::to_string(i));
    }
    const auto got = rank(m);
    const auto want = oracle::topsis(m.values, cols);
    for (std::size_t i = 0; i < 5; ++i) {
      worst = std::max({worst, std::abs(got.s[i] - want.s[i]), std::abs(got.d_plus[i] - want.d_plus[i]),
                        std::abs(got.d_minus[i] - want.d_minus[i]),
                        std::abs(got.s_normalized[i] - want.s_tilde[i])});
    }
    // Dominance on forwarded values: an alternative that is >= another on
    // every forwarded column never scores lower.
    auto fwd = forward(m);
    fwd.values[1] = fwd.values[0];
    fwd.values[1][static_cast<std::size_t>(trial % 4)] += 0.25;
    const auto s = score(normalize(fwd));
    if (s.s[1] < s.s[0]) dominance = false;
  }
  const double elapsed = seconds_since(t0);
  return {worst <= 1e-12 && dominance && elapsed < 2.0,
          fmt("max oracle gap=%.2e dominance=%g time=%.3fs", worst, dominance ? 1.0 : 0.0, elapsed)};
}

Outcome criterion5() {
  using namespace equimine::equity;
  const std::vector<YearScores> identical{{2019, {2, 2, 2}}, {2020, {7, 7, 7}}};
  const double zero = global_equity_index(identical);
  const std::vector<YearScores> hand{{2020, {2, 1}}};
  const double hand_ge = global_equity_index(hand);
  Rng rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<YearScores> years;
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 10);
    for (int t = 0; t < 1 + trial % 4; ++t) {
      YearScores y{2000 + t, {}};
      for (std::size_t k = 0; k < n; ++k) y.scores.push_back(rng.uniform(0.05, 3.0));
      years.push_back(y);
    }
    const double base = global_equity_index(years);
    for (auto& y : years) {
      const double c = rng.uniform(0.01, 100.0);
      for (auto& s : y.scores) s *= c;
    }
    worst = std::max(worst, std::abs(global_equity_index(years) - base));
  }
  return {zero == 0.0 && std::abs(hand_ge - 0.5625) <= 1e-12 && worst <= 1e-12,
          fmt("GE(identical)=%g GE([2,1])=%.12f max scale gap=%.2e", zero, hand_ge, worst)};
}

Outcome criterion6() {
  using namespace equimine::mining;
  Rng rng(6);
  double worst_rel = 0.0, worst_add = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const MiningCurveParams p(rng.uniform(1.0, 30.0), rng.uniform(0.0, 40.0), rng.uniform(0.5, 10.0), 70e12);
    worst_rel = std::max(worst_rel, std::abs(income(RevenueWindow{}, p) - 70e12) / 70e12);
    const double t1 = rng.uniform(0.0, 20.0), t2 = t1 + rng.uniform(0.0, 20.0), t3 = t2 + rng.uniform(0.0, 20.0);
    const double gap = income({t1, t2, 0.0}, p) + income({t2, t3, 0.0}, p) - income({t1, t3, 0.0}, p);
    worst_add = std::max(worst_add, std::abs(gap) / 70e12);
  }
  return {worst_rel <= 1e-6 && worst_add <= 1e-9,
          fmt("max full-horizon rel err=%.2e max additivity gap=%.2e*V", worst_rel, worst_add)};
}

Outcome criterion7() {
  using namespace equimine::allocation;
  Rng rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.next() % 40;
    std::vector<std::string> names;
    std::vector<double> scores, gammas;
    for (std::size_t k = 0; k < n; ++k) {
      names.push_back("c" + std::to_string(k));
      scores.push_back(rng.uniform(0.01, 5.0));
      gammas.push_back(rng.uniform() < 0.4 ? 1.2 : 1.0);
    }
    const double total = rng.uniform(1.0, 1e13);
    const auto r = allocate(total, names, scores, gammas, AllocationMode::kConserve);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += r.share(k);
    worst = std::max(worst, std::abs(sum - total) / total);
  }
  const std::vector<std::string> names{"poor", "rich"};
  const std::vector<double> scores{1, 1}, gammas{1.2, 1.0};
  const auto h = allocate(110, names, scores, gammas, AllocationMode::kPaperLiteral);
  const bool hand = h.shares[0].raw_share == 66.0 && h.shares[1].raw_share == 55.0 &&
                    h.shares[0].conserved_share == 60.0 && h.shares[1].conserved_share == 50.0;
  return {worst <= 1e-9 && hand, fmt("max conservation rel err=%.2e hand case=%g", worst, hand ? 1.0 : 0.0)};
}

Outcome criterion8() {
  using namespace equimine::stats;
  Rng rng(8);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 40);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform(-10.0, 10.0);
      y[i] = 0.3 * x[i] + rng.uniform(-10.0, 10.0);
    }
    worst = std::max(worst, std::abs(pearson(x, y) - oracle::pearson(x, y)));
  }
  const double t = t_test(0.78, 7).t_stat;
  const double crit = t_critical_upper(0.25, 98.0);
  return {worst <= 1e-12 && std::abs(t - 2.7871) <= 1e-3 && std::abs(crit - 0.677) <= 0.02,
          fmt("max oracle gap=%.2e t(0.78,7)=%.5f t_crit(n=100,P=0.25)=%.4f", worst, t, crit)};
}

Outcome criterion9() {
  using namespace equimine::sensnet;
  const auto t0 = Clock::now();
  const double h = 1e-5;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed * 104729);
    const auto p = NetworkParams::initialize(LayerSpec{{7, 16, 1}}, seed);
    VectorXd x(7), y(1);
    for (Eigen::Index i = 0; i < 7; ++i) x(i) = rng.uniform(-2.0, 2.0);
    y(0) = rng.uniform();
    const auto back = backward(forward(x, p), y, p);
    auto loss = [&](const NetworkParams& q) { return 0.5 * (forward(x, q).output() - y).squaredNorm(); };
    auto check = [&](double fd, double bp) {
      worst = std::max(worst, std::abs(fd - bp) / std::max({std::abs(fd), std::abs(bp), 1e-8}));
    };
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
      for (Eigen::Index j = 0; j < p.weights[l].rows(); ++j) {
        for (Eigen::Index k = 0; k < p.weights[l].cols(); ++k) {
          auto a = p, b = p;
          a.weights[l](j, k) += h;
          b.weights[l](j, k) -= h;
          check((loss(a) - loss(b)) / (2 * h), back.weight_grads[l](j, k));
        }
        auto a = p, b = p;
        a.biases[l](j) += h;
        b.biases[l](j) -= h;
        check((loss(a) - loss(b)) / (2 * h), back.bias_grads[l](j));
      }
    }
  }
  const double elapsed = seconds_since(t0);
  return {worst < 1e-5 && elapsed < 10.0, fmt("max relative error=%.2e time=%.3fs", worst, elapsed)};
}

Outcome criterion10() {
  using namespace equimine::sensnet;
  int first = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const Eigen::Index factor = static_cast<Eigen::Index>(seed % 7);
    MatrixXd x(60, 7);
    VectorXd y(60);
    for (Eigen::Index i = 0; i < 60; ++i) {
      for (Eigen::Index j = 0; j < 7; ++j) x(i, j) = rng.uniform();
      y(i) = 3.0 * x(i, factor) + 1.0;
    }
    TrainConfig cfg;
    cfg.seed = seed;
    cfg.epochs = 2000;
    const auto r = sensitivity_sweep(x, y, cfg, SweepConfig{0.1, 3, 0.07});
    if (std::max_element(r.sensitivity.begin(), r.sensitivity.end()) - r.sensitivity.begin() == factor) ++first;
  }

  // Sample dataset sweep: informational band flag, but it must be reported.
  auto config = equimine::pipeline::RunConfig::load(fs::path(EQUIMINE_DATA_DIR) / "sample" / "run.json");
  config.out_dir = fs::temp_directory_path() / "equimine_acceptance_sweep";
  fs::remove_all(config.out_dir);
  equimine::pipeline::Pipeline pipeline(config);
  const auto& report = pipeline.sensitivity();
  const bool reported = std::isfinite(report.max_relative_variation) && !report.sweep_summary.empty() &&
                        report.within_band == (report.max_relative_variation <= 0.07);
  return {first == 10 && reported,
          fmt("generating indicator first in %g/10 seeds; sample max variation=%.4f within 7%% band=%g", first,
              report.max_relative_variation, report.within_band ? 1.0 : 0.0)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion12() {
  auto config = equimine::pipeline::RunConfig::load(fs::path(EQUIMINE_DATA_DIR) / "sample" / "run.json");
  const fs::path a = fs::temp_directory_path() / "equimine_acceptance_a";
  const fs::path b = fs::temp_directory_path() / "equimine_acceptance_b";
  fs::remove_all(a);
  fs::remove_all(b);
  config.out_dir = a;
  const int ra = equimine::pipeline::run_pipeline(config);
  config.out_dir = b;
  const int rb = equimine::pipeline::run_pipeline(config);
  std::size_t files = 0, same = 0;
  if (ra == 0 && rb == 0) {
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      if (slurp(entry.path()) == slurp(b / entry.path().filename())) ++same;
    }
  }
  return {ra == 0 && rb == 0 && files >= 8 && files == same,
          fmt("exit codes %g/%g, %g files compared", ra, rb, static_cast<double>(files)) +
              fmt(", %g byte-identical", static_cast<double>(same))};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "CI/CR reproduction", criterion1},
      {2, "RI table", criterion2},
      {3, "AHP method agreement", criterion3},
      {4, "TOPSIS oracle equivalence", criterion4},
      {5, "equity index properties", criterion5},
      {6, "mining conservation", criterion6},
      {7, "allocation conservation", criterion7},
      {8, "Pearson/t-test", criterion8},
      {9, "gradient checks", criterion9},
      {10, "sensitivity qualitative check", criterion10},
      {12, "end-to-end determinism", criterion12},
  };

  int failures = 0;
  bool property_suite = true;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    if (c.id >= 3 && c.id <= 10 && !o.pass) property_suite = false;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    if (c.id == 10) {
      // Unreproducible published numbers are covered by the property checks 3-10.
      std::printf("%s criterion 11 (property-based coverage of unreproducible values): criteria 3-10 %s\n",
                  property_suite ? "PASS" : "FAIL", property_suite ? "all pass" : "have failures");
      if (!property_suite) ++failures;
    }
  }
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
