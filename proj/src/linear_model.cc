#include "udirony/linear_model.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "udirony/error.h"
#include "udirony/random.h"

namespace udirony {
namespace {

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sign_of(int label) { return label == 1 ? 1.0 : -1.0; }

double dot(const std::vector<double>& w, const SparseVector& x) {
  double s = 0;
  for (const auto& [i, v] : x.entries) s += w[i] * v;
  return s;
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_dataset(const Dataset& data) {
  if (data.rows.size() != data.labels.size()) throw TrainingError("row and label counts differ");
  for (const auto& row : data.rows) {
    if (!row.entries.empty() && row.entries.back().first >= data.dim) {
      throw TrainingError("feature index exceeds dataset dimension");
    }
  }
}

void require_two_classes(const Dataset& data) {
  bool pos = false, neg = false;
  for (int y : data.labels) {
    if (y == 1) pos = true;
    else if (y == 0) neg = true;
    else throw TrainingError("labels must be 0 or 1");
  }
  if (!pos || !neg) throw TrainingError("training data contains a single class; need both ironic and non-ironic examples");
}

double LinearModel::decision(const SparseVector& x) const {
  double s = bias;
  for (const auto& [i, v] : x.entries) {
    if (i < weights.size()) s += weights[i] * v;
  }
  return s;
}

LinearModel train_svm(const Dataset& data, const SvmConfig& config) {
  check_dataset(data);
  require_two_classes(data);
  const std::size_t n = data.size();
  LinearModel model;
  model.loss = LinearLoss::kHinge;
  model.c = config.c;
  model.weights.assign(data.dim, 0.0);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> qii(n);
  for (std::size_t i = 0; i < n; ++i) qii[i] = data.rows[i].squared_norm() + 1.0;

  auto dual_objective = [&] {
    double sum_alpha = 0;
    for (double a : alpha) sum_alpha += a;
    double wn = model.bias * model.bias;
    for (double w : model.weights) wn += w * w;
    return sum_alpha - 0.5 * wn;
  };

  Rng rng(config.seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    shuffle(order, rng);
    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    for (std::size_t i : order) {
      const SparseVector& x = data.rows[i];
      const double s = sign_of(data.labels[i]);
      const double g = s * (dot(model.weights, x) + model.bias) - 1.0;
      double pg = g;
      if (alpha[i] == 0.0) pg = std::min(g, 0.0);
      else if (alpha[i] == config.c) pg = std::max(g, 0.0);
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (pg == 0.0) continue;
      const double old = alpha[i];
      alpha[i] = std::clamp(old - g / qii[i], 0.0, config.c);
      const double delta = (alpha[i] - old) * s;
      for (const auto& [j, v] : x.entries) model.weights[j] += delta * v;
      model.bias += delta;
    }
    if (config.on_epoch) config.on_epoch(epoch, model, dual_objective());
    if (pg_max - pg_min < config.tolerance) break;
  }
  return model;
}

LinearModel train_logreg(const Dataset& data, const LogRegConfig& config) {
  check_dataset(data);
  require_two_classes(data);
  const std::size_t n = data.size();
  const double lambda = 1.0 / (config.c * static_cast<double>(n));
  const double eta0 = config.learning_rate;

  // w = scale * v keeps the per-step shrinkage O(1) for sparse rows.
  std::vector<double> v(data.dim, 0.0);
  double scale = 1.0;
  double bias = 0.0;
  std::uint64_t t = 0;

  LinearModel model;
  model.loss = LinearLoss::kLogistic;
  model.c = config.c;
  auto materialize = [&] {
    model.weights.resize(data.dim);
    for (std::size_t j = 0; j < data.dim; ++j) model.weights[j] = scale * v[j];
    model.bias = bias;
  };

  const int epochs = config.converge ? config.converge_max_epochs : config.max_epochs;
  double previous = std::numeric_limits<double>::infinity();
  Rng rng(config.seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (int epoch = 1; epoch <= epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t i : order) {
      const SparseVector& x = data.rows[i];
      const double eta = eta0 / (1.0 + eta0 * lambda * static_cast<double>(t));
      const double margin = scale * dot(v, x) + bias;
      const double g = sigmoid(margin) - static_cast<double>(data.labels[i]);
      scale *= (1.0 - eta * lambda);
      if (scale < 1e-9) {
        for (double& w : v) w *= scale;
        scale = 1.0;
      }
      for (const auto& [j, value] : x.entries) v[j] -= eta * g * value / scale;
      bias -= eta * g;
      ++t;
    }
    materialize();
    if (config.on_epoch) config.on_epoch(epoch, model);
    if (config.converge) {
      const double obj = logistic_objective(model, data, config.c);
      if (std::abs(previous - obj) <= config.tolerance * std::max(1.0, std::abs(obj))) break;
      previous = obj;
    }
  }
  materialize();
  return model;
}

double hinge_objective(const LinearModel& model, const Dataset& data, double c) {
  double reg = model.bias * model.bias;
  for (double w : model.weights) reg += w * w;
  double loss = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    loss += std::max(0.0, 1.0 - sign_of(data.labels[i]) * model.decision(data.rows[i]));
  }
  return 0.5 * reg + c * loss;
}

double logistic_objective(const LinearModel& model, const Dataset& data, double c) {
  double reg = 0;
  for (double w : model.weights) reg += w * w;
  double loss = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    loss += softplus(-sign_of(data.labels[i]) * model.decision(data.rows[i]));
  }
  return 0.5 * reg + c * loss;
}

void logistic_gradient(const LinearModel& model, const Dataset& data, double c,
                       std::vector<double>& grad_weights, double& grad_bias) {
  grad_weights = model.weights;
  grad_bias = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double g = c * (sigmoid(model.decision(data.rows[i])) - static_cast<double>(data.labels[i]));
    for (const auto& [j, v] : data.rows[i].entries) grad_weights[j] += g * v;
    grad_bias += g;
  }
}

}  // namespace udirony
