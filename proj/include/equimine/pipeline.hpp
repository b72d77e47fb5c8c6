#pragma once

// End-to-end batch pipeline behind the CLI. Each stage computes lazily,
// caches its result and can write its own report into the output directory.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "equimine/allocation.hpp"
#include "equimine/equity.hpp"
#include "equimine/errors.hpp"
#include "equimine/io.hpp"
#include "equimine/mcda.hpp"
#include "equimine/mining.hpp"
#include "equimine/sensnet.hpp"
#include "equimine/stats.hpp"
#include "equimine/topsis.hpp"

namespace equimine::pipeline {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

enum class AllocationBasis { kEquity, kTopsis };

inline std::string_view to_string(AllocationBasis b) { return b == AllocationBasis::kEquity ? "equity" : "topsis"; }

inline AllocationBasis parse_allocation_basis(std::string_view name) {
  if (name == "equity") return AllocationBasis::kEquity;
  if (name == "topsis") return AllocationBasis::kTopsis;
  throw ValidationError("unknown allocation basis '" + std::string(name) + "'");
}

struct RunConfig {
  fs::path indicators;
  fs::path pairwise;   // optional: default weights are used when empty
  fs::path gdp;
  fs::path scenario;   // optional: default curve and full horizon
  fs::path train;      // optional: default training config
  fs::path decision;   // TOPSIS decision matrix
  fs::path topsis_pairwise;  // optional AHP matrix weighting TOPSIS indicators
  fs::path out_dir = "out";
  mcda::WeightingMethod weight_method = mcda::WeightingMethod::kEigenvalue;
  mining::IncomeMode income_mode = mining::IncomeMode::kCumulative;
  allocation::AllocationMode alloc_mode = allocation::AllocationMode::kConserve;
  AllocationBasis alloc_basis = AllocationBasis::kEquity;
  allocation::PovertyPolicy poverty;
  double alpha = stats::kDefaultAlpha;
  std::optional<std::uint64_t> seed;
  bool income_mode_set = false;

  // Paths in the JSON are resolved against the config file's directory.
  static RunConfig from_json(const nlohmann::json& j, const fs::path& base = {}) {
    RunConfig c;
    auto path = [&](const char* key) -> fs::path {
      if (!j.contains(key) || j[key].is_null()) return {};
      fs::path p = j[key].get<std::string>();
      return p.is_absolute() || base.empty() ? p : base / p;
    };
    try {
      c.indicators = path("indicators");
      c.pairwise = path("pairwise");
      c.gdp = path("gdp");
      c.scenario = path("scenario");
      c.train = path("train");
      c.decision = path("decision");
      c.topsis_pairwise = path("topsis_pairwise");
      if (j.contains("out")) c.out_dir = path("out");
      if (j.contains("weight_method")) c.weight_method = mcda::parse_weighting_method(j["weight_method"].get<std::string>());
      if (j.contains("income_mode")) {
        c.income_mode = mining::parse_income_mode(j["income_mode"].get<std::string>());
        c.income_mode_set = true;
      }
      if (j.contains("alloc_mode")) c.alloc_mode = allocation::parse_allocation_mode(j["alloc_mode"].get<std::string>());
      if (j.contains("alloc_basis")) c.alloc_basis = parse_allocation_basis(j["alloc_basis"].get<std::string>());
      if (j.contains("poverty")) {
        c.poverty.bottom_count = j["poverty"].value("bottom_count", c.poverty.bottom_count);
        c.poverty.multiplier = j["poverty"].value("multiplier", c.poverty.multiplier);
      }
      c.alpha = j.value("alpha", c.alpha);
      if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("malformed run config: ") + e.what());
    }
    return c;
  }

  static RunConfig load(const fs::path& path) {
    return from_json(io::read_json(path), path.parent_path());
  }

  Json to_json() const {
    Json j;
    j["indicators"] = indicators.generic_string();
    j["pairwise"] = pairwise.generic_string();
    j["gdp"] = gdp.generic_string();
    j["scenario"] = scenario.generic_string();
    j["train"] = train.generic_string();
    j["decision"] = decision.generic_string();
    j["topsis_pairwise"] = topsis_pairwise.generic_string();
    j["weight_method"] = mcda::to_string(weight_method);
    j["income_mode"] = income_mode_set ? std::string(mining::to_string(income_mode)) : std::string("scenario");
    j["alloc_mode"] = allocation::to_string(alloc_mode);
    j["alloc_basis"] = to_string(alloc_basis);
    j["poverty"] = {{"bottom_count", poverty.bottom_count}, {"multiplier", poverty.multiplier}};
    j["alpha"] = alpha;
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    return j;
  }
};

// Raised by a stage; carries the stage name and extra report fields.
class StageError : public Error {
 public:
  StageError(std::string stage, std::string cause_kind, const std::string& what, Json details = Json::object())
      : Error("stage", what), stage_(std::move(stage)), cause_(std::move(cause_kind)), details_(std::move(details)) {}

  const std::string& stage() const noexcept { return stage_; }
  const std::string& cause() const noexcept { return cause_; }
  const Json& details() const noexcept { return details_; }

  Json to_json() const {
    Json j;
    j["status"] = "error";
    j["stage"] = stage_;
    j["kind"] = cause_;
    j["message"] = what();
    for (const auto& [k, v] : details_.items()) j[k] = v;
    return j;
  }

 private:
  std::string stage_;
  std::string cause_;
  Json details_;
};

// Six significant digits for report values.
inline Json sig6(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::strtod(buf, nullptr);
}

inline std::string full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct EquityResult {
  std::vector<std::string> countries;  // sorted
  std::vector<equity::YearScores> years;
  std::vector<double> weights;
  double ge = 0.0;
};

struct MiningResult {
  io::MiningScenario scenario;
  mining::IncomeMode mode = mining::IncomeMode::kCumulative;
  double income_cumulative = 0.0;
  double income_literal = 0.0;
  double income() const { return mode == mining::IncomeMode::kCumulative ? income_cumulative : income_literal; }
  double profit() const { return mining::profit(income(), scenario.window.cost); }
};

class Pipeline {
 public:
  explicit Pipeline(RunConfig config) : config_(std::move(config)) { digest_ = compute_digest(); }

  const RunConfig& config() const noexcept { return config_; }
  const std::string& digest() const noexcept { return digest_; }

  // ---- stages -------------------------------------------------------------

  const std::map<mcda::WeightingMethod, mcda::WeightVector>& weights() {
    if (!weights_) {
      run_stage("weights", [&] {
        std::map<mcda::WeightingMethod, mcda::WeightVector> all;
        if (!config_.pairwise.empty()) {
          const auto m = io::load_pairwise_matrix(config_.pairwise);
          for (auto method : {mcda::WeightingMethod::kArithmeticMean, mcda::WeightingMethod::kGeometricMean,
                              mcda::WeightingMethod::kEigenvalue}) {
            all.emplace(method, mcda::derive_weights(m, method));
          }
        }
        weights_ = std::move(all);
      });
    }
    return *weights_;
  }

  const mcda::ConsistencyReport& consistency() {
    if (!consistency_) {
      run_stage("consistency", [&] {
        if (config_.pairwise.empty()) throw ValidationError("consistency check needs a pairwise matrix");
        const auto m = io::load_pairwise_matrix(config_.pairwise);
        consistency_ = mcda::consistency(m);
      });
      if (!consistency_->passes) {
        Json details;
        details["n"] = consistency_->n;
        details["lambda_max"] = sig6(consistency_->lambda_max);
        details["ci"] = sig6(consistency_->ci);
        details["ri"] = sig6(consistency_->ri);
        details["cr"] = sig6(consistency_->cr);
        throw StageError("consistency", "inconsistent-matrix",
                         "pairwise matrix fails the consistency check (CR " + std::to_string(consistency_->cr) +
                             " >= 0.1)",
                         details);
      }
    }
    return *consistency_;
  }

  // Weights for the development score: derived from the pairwise matrix when
  // one is configured (after it passes the consistency check), otherwise the
  // published defaults.
  std::vector<double> score_weights() {
    if (config_.pairwise.empty()) return {equity::kDefaultWeights.begin(), equity::kDefaultWeights.end()};
    consistency();
    const auto& w = weights().at(config_.weight_method);
    std::vector<double> ordered(equity::kIndicatorCount, 0.0);
    if (w.labels.size() != equity::kIndicatorCount) {
      throw StageError("weights", "validation", "pairwise matrix must compare exactly the 7 primary indicators");
    }
    for (std::size_t k = 0; k < equity::kIndicatorCount; ++k) {
      const auto it = std::find_if(w.labels.begin(), w.labels.end(),
                                   [&](const std::string& l) { return io::lower(l) == equity::kIndicatorNames[k]; });
      if (it == w.labels.end()) {
        throw StageError("weights", "validation",
                         "pairwise matrix has no label for indicator '" + std::string(equity::kIndicatorNames[k]) + "'");
      }
      ordered[k] = w.weights[static_cast<std::size_t>(it - w.labels.begin())];
    }
    return ordered;
  }

  const std::vector<io::IndicatorRecord>& records() {
    if (!records_) run_stage("equity", [&] { records_ = io::load_indicator_table(require(config_.indicators, "indicators")); });
    return *records_;
  }

  const EquityResult& equity() {
    if (!equity_) {
      const auto w = score_weights();
      const auto& recs = records();
      run_stage("equity", [&] {
        EquityResult r;
        r.weights = w;
        std::map<int, std::map<std::string, double>> by_year;
        std::set<std::string> countries;
        for (const auto& rec : recs) {
          by_year[rec.year][rec.country] = equity::country_score(rec.indicators, w);
          countries.insert(rec.country);
        }
        r.countries.assign(countries.begin(), countries.end());
        for (const auto& [year, scores] : by_year) {
          equity::YearScores slice{year, {}};
          for (const auto& c : r.countries) {
            const auto it = scores.find(c);
            if (it == scores.end()) {
              throw ValidationError("country '" + c + "' has no record for year " + std::to_string(year));
            }
            slice.scores.push_back(it->second);
          }
          r.years.push_back(std::move(slice));
        }
        r.ge = equity::global_equity_index(r.years, r.countries);
        equity_ = std::move(r);
      });
    }
    return *equity_;
  }

  const topsis::DecisionMatrix& decision_matrix() {
    if (!decision_) run_stage("topsis", [&] { decision_ = io::load_decision_matrix(require(config_.decision, "decision")); });
    return *decision_;
  }

  const topsis::TopsisScores& topsis() {
    if (!topsis_) {
      const auto& m = decision_matrix();
      run_stage("topsis", [&] {
        std::optional<std::vector<double>> w;
        if (!config_.topsis_pairwise.empty()) {
          const auto pm = io::load_pairwise_matrix(config_.topsis_pairwise);
          const auto cr = mcda::consistency(pm);
          if (!cr.passes) throw ValidationError("TOPSIS weight matrix fails the consistency check");
          const auto derived = mcda::derive_weights(pm, config_.weight_method);
          std::vector<double> ordered(m.cols());
          for (std::size_t j = 0; j < m.cols(); ++j) {
            const auto it = std::find(derived.labels.begin(), derived.labels.end(), m.indicators[j]);
            if (it == derived.labels.end()) {
              throw ValidationError("TOPSIS weight matrix has no label '" + m.indicators[j] + "'");
            }
            ordered[j] = derived.weights[static_cast<std::size_t>(it - derived.labels.begin())];
          }
          w = std::move(ordered);
        }
        topsis_weights_ = w;
        topsis_ = topsis::rank(m, w);
      });
    }
    return *topsis_;
  }

  const MiningResult& mining() {
    if (!mining_) {
      run_stage("mining", [&] {
        MiningResult r;
        if (!config_.scenario.empty()) r.scenario = io::load_scenario(config_.scenario);
        r.mode = config_.income_mode_set ? config_.income_mode : r.scenario.mode;
        r.income_cumulative = mining::income(r.scenario.window, r.scenario.params, mining::IncomeMode::kCumulative);
        r.income_literal = mining::income(r.scenario.window, r.scenario.params, mining::IncomeMode::kPaperLiteral);
        mining_ = std::move(r);
      });
    }
    return *mining_;
  }

  const allocation::AllocationResult& allocation() {
    if (!allocation_) {
      std::vector<std::string> countries;
      std::vector<double> scores;
      if (config_.alloc_basis == AllocationBasis::kEquity) {
        const auto& eq = equity();
        countries = eq.countries;
        scores = eq.years.back().scores;  // latest year
      } else {
        const auto& m = decision_matrix();
        const auto& t = topsis();
        countries = m.alternatives;
        scores = t.s_normalized;
      }
      const auto& mine = mining();
      run_stage("allocation", [&] {
        const auto gdp_table = io::load_gdp_table(require(config_.gdp, "gdp"));
        std::vector<allocation::CountryGdp> gdp;
        for (const auto& c : countries) {
          const auto it = std::find_if(gdp_table.begin(), gdp_table.end(),
                                       [&](const allocation::CountryGdp& g) { return g.country == c; });
          if (it == gdp_table.end()) throw ValidationError("no GDP entry for country '" + c + "'");
          gdp.push_back(*it);
        }
        const auto gammas = allocation::poverty_multipliers(gdp, config_.poverty);
        const double total = mine.profit();
        if (!(total >= 0.0)) {
          throw ValidationError("mining profit " + std::to_string(total) + " is negative; nothing to allocate");
        }
        allocation_ = allocation::allocate(total, countries, scores, gammas, config_.alloc_mode);
      });
    }
    return *allocation_;
  }

  struct CorrelationRow {
    std::string variable;
    stats::CorrelationResult result;
  };

  const std::vector<CorrelationRow>& correlation() {
    if (!correlation_) {
      const auto& recs = records();
      const auto w = score_weights();
      const auto& eq = equity();
      run_stage("correlation", [&] {
        std::vector<CorrelationRow> rows;
        std::vector<double> score;
        for (const auto& rec : recs) score.push_back(equity::country_score(rec.indicators, w));
        for (std::size_t k = 0; k < equity::kIndicatorCount; ++k) {
          std::vector<double> x;
          for (const auto& rec : recs) x.push_back(rec.indicators.as_array()[k]);
          rows.push_back({std::string(equity::kIndicatorNames[k]), stats::correlate(x, score, config_.alpha)});
        }
        if (!config_.gdp.empty()) {
          const auto gdp_table = io::load_gdp_table(config_.gdp);
          std::vector<double> g, s;
          for (std::size_t i = 0; i < eq.countries.size(); ++i) {
            for (const auto& entry : gdp_table) {
              if (entry.country == eq.countries[i]) {
                g.push_back(entry.gdp);
                s.push_back(eq.years.back().scores[i]);
              }
            }
          }
          if (g.size() >= 3) rows.push_back({"gdp", stats::correlate(g, s, config_.alpha)});
        }
        correlation_ = std::move(rows);
      });
    }
    return *correlation_;
  }

  sensnet::TrainConfig train_config() {
    sensnet::TrainConfig c;
    if (!config_.train.empty()) c = io::load_train_config(config_.train);
    if (config_.seed) c.seed = *config_.seed;
    return c;
  }

  const sensnet::SensitivityReport& sensitivity() {
    if (!sensitivity_) {
      const auto& recs = records();
      const auto w = score_weights();
      run_stage("sensitivity", [&] {
        const auto cfg = train_config();
        Eigen::MatrixXd x(static_cast<Eigen::Index>(recs.size()), static_cast<Eigen::Index>(equity::kIndicatorCount));
        Eigen::VectorXd y(static_cast<Eigen::Index>(recs.size()));
        for (std::size_t i = 0; i < recs.size(); ++i) {
          const auto v = recs[i].indicators.as_array();
          for (std::size_t k = 0; k < v.size(); ++k) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v[k];
          y(static_cast<Eigen::Index>(i)) = equity::country_score(recs[i].indicators, w);
        }
        sensitivity_ = sensnet::sensitivity_sweep(x, y, cfg);
      });
    }
    return *sensitivity_;
  }

  // ---- reports --------------------------------------------------------------

  void write_weights() {
    const auto& all = weights();
    Json j = header();
    if (all.empty()) {
      j["source"] = "default";
      j["labels"] = Json(equity::kIndicatorNames);
    } else {
      j["source"] = config_.pairwise.generic_string();
      j["labels"] = all.begin()->second.labels;
    }
    Json methods = Json::object();
    for (const auto& [method, w] : all) methods[std::string(mcda::to_string(method))] = rounded(w.weights);
    j["methods"] = methods;
    j["selected_method"] = all.empty() ? std::string("default") : std::string(mcda::to_string(config_.weight_method));
    j["score_weights"] = rounded(score_weights());
    write_json("weights.json", j);
  }

  void write_consistency() {
    const auto& c = consistency();
    Json j = header();
    j["n"] = c.n;
    j["lambda_max"] = sig6(c.lambda_max);
    j["ci"] = sig6(c.ci);
    j["ri"] = sig6(c.ri);
    j["cr"] = sig6(c.cr);
    j["passes"] = c.passes;
    write_json("consistency.json", j);
  }

  void write_equity() {
    const auto& eq = equity();
    Json j = header();
    j["weights"] = rounded(eq.weights);
    j["countries"] = eq.countries;
    Json years = Json::array();
    for (const auto& slice : eq.years) {
      Json scores = Json::object();
      for (std::size_t k = 0; k < eq.countries.size(); ++k) scores[eq.countries[k]] = sig6(slice.scores[k]);
      years.push_back({{"year", slice.year}, {"scores", scores}});
    }
    j["years"] = years;
    j["period_count"] = eq.years.size();
    j["ge"] = sig6(eq.ge);
    write_json("equity.json", j);
  }

  void write_topsis() {
    const auto& m = decision_matrix();
    const auto& t = topsis();
    Json j = header();
    Json kinds = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const auto& k = m.kinds[c];
      Json entry = {{"indicator", m.indicators[c]}};
      switch (k.type) {
        case topsis::IndicatorKind::Type::kBenefit: entry["kind"] = "benefit"; break;
        case topsis::IndicatorKind::Type::kCost: entry["kind"] = "cost"; break;
        case topsis::IndicatorKind::Type::kIntermediate:
          entry["kind"] = "intermediate";
          entry["best"] = sig6(k.best);
          break;
      }
      kinds.push_back(entry);
    }
    j["indicators"] = kinds;
    j["weights"] = topsis_weights_ ? rounded(*topsis_weights_) : Json(nullptr);
    Json alts = Json::array();
    std::string csv = "label,d_plus,d_minus,s,s_normalized,rank\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
      alts.push_back({{"label", m.alternatives[i]},
                      {"d_plus", sig6(t.d_plus[i])},
                      {"d_minus", sig6(t.d_minus[i])},
                      {"s", sig6(t.s[i])},
                      {"s_normalized", sig6(t.s_normalized[i])},
                      {"rank", t.rank[i]}});
      csv += csv_label(m.alternatives[i]) + "," + full_precision(t.d_plus[i]) + "," + full_precision(t.d_minus[i]) +
             "," + full_precision(t.s[i]) + "," + full_precision(t.s_normalized[i]) + "," +
             std::to_string(t.rank[i]) + "\n";
    }
    j["alternatives"] = alts;
    write_json("topsis.json", j);
    write_text("topsis.csv", csv);
  }

  void write_mining() {
    const auto& r = mining();
    const auto& p = r.scenario.params;
    Json j = header();
    j["scenario"] = r.scenario.name;
    j["params"] = {{"dof", sig6(p.dof())},
                   {"location", sig6(p.location())},
                   {"scale", sig6(p.scale())},
                   {"total_value", sig6(p.total_value())},
                   {"positive_mass", sig6(p.positive_mass())}};
    j["window"] = {{"t1", sig6(r.scenario.window.t1)}, {"t2", sig6(r.scenario.window.t2)}, {"cost", sig6(r.scenario.window.cost)}};
    j["mode"] = mining::to_string(r.mode);
    j["income"] = {{"cumulative", sig6(r.income_cumulative)}, {"paper_literal", sig6(r.income_literal)}};
    j["profit"] = {{"cumulative", sig6(mining::profit(r.income_cumulative, r.scenario.window.cost))},
                   {"paper_literal", sig6(mining::profit(r.income_literal, r.scenario.window.cost))}};
    j["selected"] = {{"income", sig6(r.income())}, {"profit", sig6(r.profit())}};
    if (!r.scenario.metadata.empty()) j["metadata"] = r.scenario.metadata;
    write_json("mining.json", j);
  }

  void write_allocation() {
    const auto& a = allocation();
    Json j = header();
    j["mode"] = allocation::to_string(a.mode);
    j["basis"] = to_string(config_.alloc_basis);
    j["poverty"] = {{"bottom_count", config_.poverty.bottom_count}, {"multiplier", sig6(config_.poverty.multiplier)}};
    j["total_profit"] = sig6(a.total_profit);
    j["over_allocation"] = sig6(a.over_allocation);
    Json rows = Json::array();
    for (std::size_t k = 0; k < a.shares.size(); ++k) {
      const auto& s = a.shares[k];
      rows.push_back({{"country", s.country},
                      {"gamma", sig6(s.gamma)},
                      {"raw_share", sig6(s.raw_share)},
                      {"conserved_share", sig6(s.conserved_share)},
                      {"share", sig6(a.share(k))}});
    }
    j["countries"] = rows;
    write_json("allocation.json", j);
  }

  void write_correlation() {
    const auto& rows = correlation();
    Json j = header();
    j["alpha"] = sig6(config_.alpha);
    Json out = Json::array();
    for (const auto& row : rows) {
      const auto& c = row.result;
      out.push_back({{"variable", row.variable},
                     {"r", sig6(c.r)},
                     {"n", c.n},
                     {"t_stat", sig6(c.t_stat)},
                     {"critical_value", sig6(c.critical_value)},
                     {"significant", c.significant},
                     {"strength", stats::to_string(c.strength.strength)},
                     {"direction", stats::to_string(c.strength.direction)}});
    }
    j["correlations"] = out;
    write_json("correlation.json", j);
  }

  void write_sensitivity() {
    const auto& s = sensitivity();
    const auto cfg = train_config();
    std::string csv = "indicator,value\n";
    for (std::size_t k = 0; k < s.sensitivity.size(); ++k) {
      csv += std::string(equity::kIndicatorNames[k]) + "," + full_precision(s.sensitivity[k]) + "\n";
    }
    write_text("sensitivity.csv", csv);
    std::string sweep = "weight_id,w,output\n";
    for (const auto& p : s.sweep) sweep += p.weight_id + "," + full_precision(p.w) + "," + full_precision(p.output) + "\n";
    write_text("perturbation.csv", sweep);

    Json j = header();
    j["train"] = {{"layer_sizes", cfg.layers.sizes},
                  {"learning_rate", sig6(cfg.learning_rate)},
                  {"epochs", cfg.epochs},
                  {"seed", cfg.seed}};
    j["final_loss"] = sig6(s.final_loss);
    Json sens = Json::object();
    for (std::size_t k = 0; k < s.sensitivity.size(); ++k) sens[std::string(equity::kIndicatorNames[k])] = sig6(s.sensitivity[k]);
    j["sensitivity"] = sens;
    j["baseline_output"] = sig6(s.baseline_output);
    j["max_relative_variation"] = sig6(s.max_relative_variation);
    j["variation_band"] = 0.07;
    j["within_band"] = s.within_band;
    write_json("sensitivity.json", j);
  }

  void write_all() {
    write_weights();
    if (!config_.pairwise.empty()) write_consistency();
    write_equity();
    write_topsis();
    write_mining();
    write_allocation();
    write_correlation();
    write_sensitivity();
  }

 private:
  template <typename F>
  void run_stage(const std::string& stage, F&& body) {
    try {
      body();
    } catch (const StageError&) {
      throw;
    } catch (const Error& e) {
      throw StageError(stage, e.kind(), e.what());
    } catch (const std::exception& e) {
      throw StageError(stage, "internal", e.what());
    }
  }

  static const fs::path& require(const fs::path& p, const char* name) {
    if (p.empty()) throw ValidationError(std::string("run config is missing '") + name + "'");
    return p;
  }

  static Json rounded(const std::vector<double>& v) {
    Json out = Json::array();
    for (double x : v) out.push_back(sig6(x));
    return out;
  }

  static std::string csv_label(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }

  Json header() const {
    Json j;
    j["config_digest"] = digest_;
    return j;
  }

  void write_text(const std::string& name, const std::string& text) const {
    fs::create_directories(config_.out_dir);
    std::ofstream out(config_.out_dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw StageError("output", "io", "cannot write '" + (config_.out_dir / name).string() + "'");
    out << text;
  }

  void write_json(const std::string& name, const Json& j) const { write_text(name, j.dump(2) + "\n"); }

  std::string compute_digest() const {
    Json canonical = config_.to_json();
    canonical.erase("indicators");
    canonical.erase("pairwise");
    canonical.erase("gdp");
    canonical.erase("scenario");
    canonical.erase("train");
    canonical.erase("decision");
    canonical.erase("topsis_pairwise");
    std::uint64_t h = fnv1a(canonical.dump());
    for (const auto* p : {&config_.indicators, &config_.pairwise, &config_.gdp, &config_.scenario, &config_.train,
                          &config_.decision, &config_.topsis_pairwise}) {
      h = fnv1a("|", h);
      if (!p->empty() && fs::exists(*p)) h = fnv1a(io::read_file(*p), h);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  RunConfig config_;
  std::string digest_;
  std::optional<std::map<mcda::WeightingMethod, mcda::WeightVector>> weights_;
  std::optional<mcda::ConsistencyReport> consistency_;
  std::optional<std::vector<io::IndicatorRecord>> records_;
  std::optional<EquityResult> equity_;
  std::optional<topsis::DecisionMatrix> decision_;
  std::optional<std::vector<double>> topsis_weights_;
  std::optional<topsis::TopsisScores> topsis_;
  std::optional<MiningResult> mining_;
  std::optional<allocation::AllocationResult> allocation_;
  std::optional<std::vector<CorrelationRow>> correlation_;
  std::optional<sensnet::SensitivityReport> sensitivity_;
};

// Runs every stage and writes all reports; returns the process exit status.
// On failure the error JSON is written to <out>/error.json and returned in
// `error_out` when provided.
inline int run_pipeline(const RunConfig& config, Json* error_out = nullptr) {
  try {
    Pipeline p(config);
    p.write_all();
    return 0;
  } catch (const StageError& e) {
    const Json j = e.to_json();
    if (error_out) *error_out = j;
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    std::ofstream(config.out_dir / "error.json", std::ios::binary | std::ios::trunc) << j.dump(2) << "\n";
    return 2;
  }
}

}  // namespace equimine::pipeline
