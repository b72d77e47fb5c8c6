#pragma once

// Small sigmoid feedforward network with backpropagation, used to measure
// how strongly each indicator drives the development score.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "equimine/errors.hpp"
#include "equimine/numeric.hpp"

namespace equimine::sensnet {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
inline double sigmoid_prime(double x) {
  const double s = sigmoid(x);
  return s * (1.0 - s);
}

struct LayerSpec {
  std::vector<std::size_t> sizes = {7, 16, 1};

  std::size_t layers() const noexcept { return sizes.size() - 1; }  // weighted layers
  std::size_t inputs() const { return sizes.front(); }
  std::size_t outputs() const { return sizes.back(); }

  void validate() const {
    if (sizes.size() < 2) throw ValidationError("network needs at least input and output layers");
    for (auto s : sizes) {
      if (s == 0) throw ValidationError("layer widths must be >= 1");
    }
  }
};

struct NetworkParams {
  std::vector<MatrixXd> weights;  // weights[l] is sizes[l+1] x sizes[l]
  std::vector<VectorXd> biases;
  std::uint64_t seed = 0;

  // Uniform in [-0.5, 0.5]; each layer draws its weights row-major, then biases.
  static NetworkParams initialize(const LayerSpec& spec, std::uint64_t seed) {
    spec.validate();
    NetworkParams p;
    p.seed = seed;
    numeric::Rng rng(seed);
    for (std::size_t l = 0; l < spec.layers(); ++l) {
      const auto rows = static_cast<Eigen::Index>(spec.sizes[l + 1]);
      const auto cols = static_cast<Eigen::Index>(spec.sizes[l]);
      MatrixXd w(rows, cols);
      for (Eigen::Index j = 0; j < rows; ++j)
        for (Eigen::Index k = 0; k < cols; ++k) w(j, k) = rng.uniform(-0.5, 0.5);
      VectorXd b(rows);
      for (Eigen::Index j = 0; j < rows; ++j) b(j) = rng.uniform(-0.5, 0.5);
      p.weights.push_back(std::move(w));
      p.biases.push_back(std::move(b));
    }
    return p;
  }

  static NetworkParams zeros(const LayerSpec& spec) {
    spec.validate();
    NetworkParams p;
    for (std::size_t l = 0; l < spec.layers(); ++l) {
      const auto rows = static_cast<Eigen::Index>(spec.sizes[l + 1]);
      p.weights.push_back(MatrixXd::Zero(rows, static_cast<Eigen::Index>(spec.sizes[l])));
      p.biases.push_back(VectorXd::Zero(rows));
    }
    return p;
  }

  LayerSpec spec() const {
    LayerSpec s;
    s.sizes.clear();
    if (weights.empty()) return s;
    s.sizes.push_back(static_cast<std::size_t>(weights.front().cols()));
    for (const auto& w : weights) s.sizes.push_back(static_cast<std::size_t>(w.rows()));
    return s;
  }

  void validate() const {
    if (weights.empty() || weights.size() != biases.size()) {
      throw ValidationError("network parameters have inconsistent layer counts");
    }
    for (std::size_t l = 0; l < weights.size(); ++l) {
      if (biases[l].size() != weights[l].rows()) throw ValidationError("bias size does not match weight rows");
      if (l > 0 && weights[l].cols() != weights[l - 1].rows()) {
        throw ValidationError("weight shapes do not chain between layers");
      }
      if (!weights[l].allFinite() || !biases[l].allFinite()) throw ValidationError("network parameters not finite");
    }
  }
};

struct ForwardTrace {
  std::vector<VectorXd> pre_activations;  // z for layers 1..L
  std::vector<VectorXd> activations;      // a for layers 0..L (a[0] is the input)

  const VectorXd& output() const { return activations.back(); }
};

struct BackwardTrace {
  std::vector<VectorXd> deltas;  // dC/dz per weighted layer
  std::vector<MatrixXd> weight_grads;
  std::vector<VectorXd> bias_grads;
  double loss = 0.0;
};

inline ForwardTrace forward(const VectorXd& input, const NetworkParams& params) {
  params.validate();
  if (input.size() != params.weights.front().cols()) {
    throw ValidationError("input width " + std::to_string(input.size()) + " does not match network input " +
                          std::to_string(params.weights.front().cols()));
  }
  ForwardTrace trace;
  trace.activations.push_back(input);
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    VectorXd z = params.weights[l] * trace.activations.back() + params.biases[l];
    VectorXd a = z.unaryExpr([](double x) { return sigmoid(x); });
    trace.pre_activations.push_back(std::move(z));
    trace.activations.push_back(std::move(a));
  }
  return trace;
}

namespace detail {

inline void check_trace(const ForwardTrace& trace, const NetworkParams& params) {
  params.validate();
  const std::size_t layers = params.weights.size();
  if (trace.pre_activations.size() != layers || trace.activations.size() != layers + 1) {
    throw ValidationError("forward trace does not match network depth");
  }
  for (std::size_t l = 0; l < layers; ++l) {
    if (trace.pre_activations[l].size() != params.weights[l].rows() ||
        trace.activations[l].size() != params.weights[l].cols()) {
      throw ValidationError("forward trace does not match network shapes");
    }
  }
}

// Propagates an output-layer delta back through the hidden layers.
inline std::vector<VectorXd> propagate(const ForwardTrace& trace, const NetworkParams& params, VectorXd delta) {
  const std::size_t layers = params.weights.size();
  std::vector<VectorXd> deltas(layers);
  deltas[layers - 1] = std::move(delta);
  for (std::size_t l = layers - 1; l-- > 0;) {
    const VectorXd sp = trace.pre_activations[l].unaryExpr([](double x) { return sigmoid_prime(x); });
    deltas[l] = (params.weights[l + 1].transpose() * deltas[l + 1]).cwiseProduct(sp);
  }
  return deltas;
}

}  // namespace detail

// Quadratic loss C = loss_scale * 1/2 |a_L - target|^2.
inline BackwardTrace backward(const ForwardTrace& trace, const VectorXd& target, const NetworkParams& params,
                              double loss_scale = 1.0) {
  detail::check_trace(trace, params);
  if (target.size() != trace.output().size()) throw ValidationError("target width does not match network output");
  const VectorXd residual = trace.output() - target;
  BackwardTrace out;
  out.loss = loss_scale * 0.5 * residual.squaredNorm();
  const VectorXd sp = trace.pre_activations.back().unaryExpr([](double x) { return sigmoid_prime(x); });
  out.deltas = detail::propagate(trace, params, (loss_scale * residual).cwiseProduct(sp));
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    out.weight_grads.push_back(out.deltas[l] * trace.activations[l].transpose());
    out.bias_grads.push_back(out.deltas[l]);
  }
  return out;
}

// d a_L[output] / d input, the network Jacobian row for one output unit.
inline VectorXd input_gradient(const ForwardTrace& trace, const NetworkParams& params, Eigen::Index output = 0) {
  detail::check_trace(trace, params);
  VectorXd seed = VectorXd::Zero(trace.output().size());
  seed(output) = sigmoid_prime(trace.pre_activations.back()(output));
  const auto deltas = detail::propagate(trace, params, std::move(seed));
  return params.weights.front().transpose() * deltas.front();
}

struct TrainConfig {
  LayerSpec layers;
  double learning_rate = 0.1;
  std::size_t epochs = 5000;
  std::uint64_t seed = 42;
};

// Column-major sample batch: one column per sample.
struct Batch {
  MatrixXd inputs;
  MatrixXd targets;
};

// Mean loss over the batch and its gradient, computed layer-wise on the
// whole batch at once.
struct BatchGradient {
  double loss = 0.0;
  std::vector<MatrixXd> weight_grads;
  std::vector<VectorXd> bias_grads;
};

inline BatchGradient batch_gradient(const Batch& batch, const NetworkParams& params) {
  const auto samples = batch.inputs.cols();
  const std::size_t layers = params.weights.size();
  std::vector<MatrixXd> z(layers), a(layers + 1);
  a[0] = batch.inputs;
  for (std::size_t l = 0; l < layers; ++l) {
    z[l] = (params.weights[l] * a[l]).colwise() + params.biases[l];
    a[l + 1] = z[l].unaryExpr([](double x) { return sigmoid(x); });
  }
  const MatrixXd residual = a[layers] - batch.targets;
  BatchGradient g;
  g.loss = 0.5 * residual.squaredNorm() / static_cast<double>(samples);
  MatrixXd delta = residual.cwiseProduct(z[layers - 1].unaryExpr([](double x) { return sigmoid_prime(x); })) /
                   static_cast<double>(samples);
  g.weight_grads.resize(layers);
  g.bias_grads.resize(layers);
  for (std::size_t l = layers; l-- > 0;) {
    g.weight_grads[l] = delta * a[l].transpose();
    g.bias_grads[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = (params.weights[l].transpose() * delta)
                  .cwiseProduct(z[l - 1].unaryExpr([](double x) { return sigmoid_prime(x); }));
    }
  }
  return g;
}

// Full-batch gradient descent. Throws TrainingError when the loss stops
// being finite.
inline NetworkParams train(const Batch& batch, const TrainConfig& config, double* final_loss = nullptr) {
  config.layers.validate();
  if (batch.inputs.rows() != static_cast<Eigen::Index>(config.layers.inputs()) ||
      batch.targets.rows() != static_cast<Eigen::Index>(config.layers.outputs()) ||
      batch.inputs.cols() != batch.targets.cols() || batch.inputs.cols() == 0) {
    throw ValidationError("training batch shape does not match the layer spec");
  }
  if (!(config.learning_rate > 0.0 && std::isfinite(config.learning_rate))) {
    throw ValidationError("learning rate must be positive");
  }
  auto params = NetworkParams::initialize(config.layers, config.seed);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto g = batch_gradient(batch, params);
    if (!std::isfinite(g.loss)) throw TrainingError("training loss became non-finite", epoch);
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
      params.weights[l] -= config.learning_rate * g.weight_grads[l];
      params.biases[l] -= config.learning_rate * g.bias_grads[l];
    }
    if (!params.weights.back().allFinite()) throw TrainingError("network weights became non-finite", epoch);
  }
  if (final_loss) *final_loss = batch_gradient(batch, params).loss;
  return params;
}

// Per-feature z-score standardization. Constant features map to 0.
struct Standardizer {
  VectorXd mean;
  VectorXd stddev;

  static Standardizer fit(const MatrixXd& rows_by_feature) {
    Standardizer s;
    const auto n = static_cast<double>(rows_by_feature.rows());
    s.mean = rows_by_feature.colwise().mean().transpose();
    s.stddev.resize(rows_by_feature.cols());
    for (Eigen::Index j = 0; j < rows_by_feature.cols(); ++j) {
      const double var = (rows_by_feature.col(j).array() - s.mean(j)).square().sum() / n;
      s.stddev(j) = std::sqrt(var);
    }
    return s;
  }

  MatrixXd apply(const MatrixXd& rows_by_feature) const {
    MatrixXd out = rows_by_feature;
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      if (stddev(j) > 0.0) {
        out.col(j) = (out.col(j).array() - mean(j)) / stddev(j);
      } else {
        out.col(j).setZero();
      }
    }
    return out;
  }
};

// Targets are mapped affinely into [0.1, 0.9] to stay off the sigmoid's
// asymptotes; a constant target maps to 0.5.
inline VectorXd scale_targets(const VectorXd& y) {
  const double lo = y.minCoeff();
  const double hi = y.maxCoeff();
  if (hi == lo) return VectorXd::Constant(y.size(), 0.5);
  return ((y.array() - lo) / (hi - lo) * 0.8 + 0.1).matrix();
}

struct SweepPoint {
  std::string weight_id;
  double w = 0.0;
  double output = 0.0;
};

struct WeightSweepSummary {
  std::string weight_id;
  double w_lo = 0.0;
  double w_hi = 0.0;
  double relative_variation = 0.0;  // (max - min) / |baseline| of the mean output
  double delta_loss = 0.0;          // integral of dC/dw over [w_lo, w_hi]
};

struct SensitivityReport {
  std::vector<double> sensitivity;  // mean |d output / d input_j|
  double final_loss = 0.0;
  double baseline_output = 0.0;
  std::vector<SweepPoint> sweep;
  std::vector<WeightSweepSummary> sweep_summary;
  double max_relative_variation = 0.0;
  bool within_band = false;
  NetworkParams params;
};

struct SweepConfig {
  double relative_span = 0.1;  // each weight swept over w*(1 -/+ span)
  std::size_t steps = 11;
  double band = 0.07;
};

inline constexpr std::size_t kMinimumSamples = 10;

// Trains on standardized (indicator -> score) data, then reports the mean
// absolute input gradient per indicator and a per-weight perturbation sweep.
inline SensitivityReport sensitivity_sweep(const MatrixXd& indicators, const VectorXd& scores,
                                           const TrainConfig& config, const SweepConfig& sweep = {}) {
  if (indicators.rows() != scores.size()) throw ValidationError("indicator rows and score count differ");
  if (indicators.rows() < static_cast<Eigen::Index>(kMinimumSamples)) {
    throw ValidationError("sensitivity sweep needs at least " + std::to_string(kMinimumSamples) + " samples");
  }
  if (config.layers.outputs() != 1 || config.layers.inputs() != static_cast<std::size_t>(indicators.cols())) {
    throw ValidationError("layer spec must map the indicator count to a single output");
  }
  if (sweep.steps < 2) throw ValidationError("perturbation sweep needs at least 2 steps");

  const auto standardizer = Standardizer::fit(indicators);
  Batch batch;
  batch.inputs = standardizer.apply(indicators).transpose();
  batch.targets = scale_targets(scores).transpose();

  SensitivityReport report;
  report.params = train(batch, config, &report.final_loss);
  const auto& params = report.params;

  const auto samples = batch.inputs.cols();
  report.sensitivity.assign(static_cast<std::size_t>(indicators.cols()), 0.0);
  for (Eigen::Index i = 0; i < samples; ++i) {
    const auto trace = forward(batch.inputs.col(i), params);
    const VectorXd g = input_gradient(trace, params);
    for (Eigen::Index j = 0; j < g.size(); ++j) report.sensitivity[static_cast<std::size_t>(j)] += std::abs(g(j));
  }
  for (auto& s : report.sensitivity) s /= static_cast<double>(samples);

  auto mean_output = [&](const NetworkParams& p) {
    MatrixXd a = batch.inputs;
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
      a = ((p.weights[l] * a).colwise() + p.biases[l]).unaryExpr([](double x) { return sigmoid(x); });
    }
    return a.row(0).mean();
  };
  report.baseline_output = mean_output(params);

  NetworkParams probe = params;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    for (Eigen::Index j = 0; j < params.weights[l].rows(); ++j) {
      for (Eigen::Index k = 0; k < params.weights[l].cols(); ++k) {
        const double w0 = params.weights[l](j, k);
        WeightSweepSummary summary;
        summary.weight_id = "w" + std::to_string(l + 1) + "_" + std::to_string(j + 1) + "_" + std::to_string(k + 1);
        summary.w_lo = w0 - sweep.relative_span * std::abs(w0);
        summary.w_hi = w0 + sweep.relative_span * std::abs(w0);
        double lo = report.baseline_output, hi = report.baseline_output;
        double prev_grad = 0.0, prev_w = 0.0;
        for (std::size_t s = 0; s < sweep.steps; ++s) {
          const double w = summary.w_lo + (summary.w_hi - summary.w_lo) * static_cast<double>(s) /
                                              static_cast<double>(sweep.steps - 1);
          probe.weights[l](j, k) = w;
          const auto g = batch_gradient(batch, probe);
          const double out = mean_output(probe);
          lo = std::min(lo, out);
          hi = std::max(hi, out);
          report.sweep.push_back({summary.weight_id, w, out});
          const double grad = g.weight_grads[l](j, k);
          if (s > 0) summary.delta_loss += 0.5 * (grad + prev_grad) * (w - prev_w);
          prev_grad = grad;
          prev_w = w;
        }
        probe.weights[l](j, k) = w0;
        summary.relative_variation =
            report.baseline_output != 0.0 ? (hi - lo) / std::abs(report.baseline_output) : 0.0;
        report.max_relative_variation = std::max(report.max_relative_variation, summary.relative_variation);
        report.sweep_summary.push_back(std::move(summary));
      }
    }
  }
  report.within_band = report.max_relative_variation <= sweep.band;
  return report;
}

}  // namespace equimine::sensnet
