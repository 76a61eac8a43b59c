#include "udirony/mlp.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "udirony/error.h"
#include "udirony/linear_model.h"
#include "udirony/random.h"

namespace udirony {
namespace {

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// Hidden activations and the output pre-activation for one row.
double forward(const MlpModel& m, const SparseVector& x, std::vector<double>& h) {
  h = m.hidden_bias;
  for (const auto& [j, v] : x.entries) {
    if (j >= m.input_dim) continue;
    const double* row = &m.hidden_weights[static_cast<std::size_t>(j) * m.hidden];
    for (std::size_t k = 0; k < m.hidden; ++k) h[k] += v * row[k];
  }
  double o = m.output_bias;
  for (std::size_t k = 0; k < m.hidden; ++k) {
    h[k] = sigmoid(h[k]);
    o += m.output_weights[k] * h[k];
  }
  return o;
}

std::vector<std::size_t> all_rows(const Dataset& data, const std::vector<std::size_t>& rows) {
  if (!rows.empty()) return rows;
  std::vector<std::size_t> out(data.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

double accuracy(const MlpModel& m, const Dataset& data, const std::vector<std::size_t>& rows) {
  std::size_t correct = 0;
  for (std::size_t r : rows) {
    const int label = m.predict_proba(data.rows[r]) > 0.5 ? 1 : 0;
    if (label == data.labels[r]) ++correct;
  }
  return rows.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(rows.size());
}

}  // namespace

double MlpModel::predict_proba(const SparseVector& x) const {
  std::vector<double> h;
  return sigmoid(forward(*this, x, h));
}

MlpModel init_mlp(std::size_t input_dim, const MlpConfig& config) {
  MlpModel m;
  m.input_dim = input_dim;
  m.hidden = config.hidden;
  Rng rng(config.seed);
  const double r = config.init_range;
  m.hidden_weights.resize(input_dim * config.hidden);
  for (double& w : m.hidden_weights) w = uniform(rng, -r, r);
  m.hidden_bias.resize(config.hidden);
  for (double& b : m.hidden_bias) b = uniform(rng, -r, r);
  m.output_weights.resize(config.hidden);
  for (double& w : m.output_weights) w = uniform(rng, -r, r);
  m.output_bias = uniform(rng, -r, r);
  return m;
}

double mlp_loss(const MlpModel& model, const Dataset& data, const std::vector<std::size_t>& rows) {
  const auto ids = all_rows(data, rows);
  std::vector<double> h;
  double total = 0;
  for (std::size_t r : ids) {
    const double o = forward(model, data.rows[r], h);
    total += softplus(o) - static_cast<double>(data.labels[r]) * o;
  }
  return ids.empty() ? 0.0 : total / static_cast<double>(ids.size());
}

MlpGradient mlp_gradient(const MlpModel& model, const Dataset& data, const std::vector<std::size_t>& rows) {
  const auto ids = all_rows(data, rows);
  MlpGradient g;
  g.hidden_weights.assign(model.hidden_weights.size(), 0.0);
  g.hidden_bias.assign(model.hidden, 0.0);
  g.output_weights.assign(model.hidden, 0.0);
  if (ids.empty()) return g;
  const double scale = 1.0 / static_cast<double>(ids.size());
  std::vector<double> h;
  for (std::size_t r : ids) {
    const SparseVector& x = data.rows[r];
    const double o = forward(model, x, h);
    const double d_out = (sigmoid(o) - static_cast<double>(data.labels[r])) * scale;
    g.output_bias += d_out;
    for (std::size_t k = 0; k < model.hidden; ++k) {
      g.output_weights[k] += d_out * h[k];
      const double dz = d_out * model.output_weights[k] * h[k] * (1.0 - h[k]);
      g.hidden_bias[k] += dz;
      for (const auto& [j, v] : x.entries) {
        if (j < model.input_dim) g.hidden_weights[static_cast<std::size_t>(j) * model.hidden + k] += v * dz;
      }
    }
  }
  return g;
}

MlpModel train_mlp(const Dataset& data, const MlpConfig& config) {
  check_dataset(data);
  require_two_classes(data);
  if (config.early_stopping && data.size() < 10) {
    throw TrainingError("MLP early stopping needs at least 10 training rows to carve a validation split");
  }
  if (config.batch_size == 0 || config.hidden == 0) throw TrainingError("MLP batch size and hidden size must be positive");
  MlpModel model = init_mlp(data.dim, config);
  Rng rng(mix_seed(config.seed, 1));

  std::vector<std::size_t> train_rows = permutation(data.size(), rng);
  std::vector<std::size_t> val_rows;
  if (config.early_stopping) {
    auto n_val = static_cast<std::size_t>(std::ceil(config.validation_fraction * static_cast<double>(data.size())));
    n_val = std::clamp<std::size_t>(n_val, 1, data.size() - 1);
    val_rows.assign(train_rows.end() - static_cast<std::ptrdiff_t>(n_val), train_rows.end());
    train_rows.resize(train_rows.size() - n_val);
  }

  const std::size_t hidden = model.hidden;
  MlpModel best = model;
  double best_score = -std::numeric_limits<double>::infinity();
  int stale = 0;
  std::vector<std::vector<double>> h(config.batch_size), dz(config.batch_size, std::vector<double>(hidden));
  std::vector<double> d_out(config.batch_size);

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    shuffle(train_rows, rng);
    for (std::size_t start = 0; start < train_rows.size(); start += config.batch_size) {
      const std::size_t end = std::min(train_rows.size(), start + config.batch_size);
      const std::size_t b = end - start;
      const double step = config.learning_rate / static_cast<double>(b);
      // All gradients are taken at the pre-update parameters.
      for (std::size_t i = 0; i < b; ++i) {
        const std::size_t r = train_rows[start + i];
        const double o = forward(model, data.rows[r], h[i]);
        d_out[i] = sigmoid(o) - static_cast<double>(data.labels[r]);
        for (std::size_t k = 0; k < hidden; ++k) {
          dz[i][k] = d_out[i] * model.output_weights[k] * h[i][k] * (1.0 - h[i][k]);
        }
      }
      for (std::size_t i = 0; i < b; ++i) {
        const SparseVector& x = data.rows[train_rows[start + i]];
        model.output_bias -= step * d_out[i];
        for (std::size_t k = 0; k < hidden; ++k) {
          model.output_weights[k] -= step * d_out[i] * h[i][k];
          model.hidden_bias[k] -= step * dz[i][k];
        }
        for (const auto& [j, v] : x.entries) {
          double* row = &model.hidden_weights[static_cast<std::size_t>(j) * hidden];
          for (std::size_t k = 0; k < hidden; ++k) row[k] -= step * v * dz[i][k];
        }
      }
    }
    if (!config.early_stopping) continue;
    const double score = accuracy(model, data, val_rows);
    if (score > best_score + config.tolerance) {
      best_score = score;
      best = model;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  return config.early_stopping ? best : model;
}

}  // namespace udirony
