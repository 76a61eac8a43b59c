#ifndef UDIRONY_MLP_H_
#define UDIRONY_MLP_H_

#include <cstdint>
#include <vector>

#include "udirony/vectorizer.h"

namespace udirony {

// One hidden layer with logistic activation and a sigmoid output unit.
struct MlpModel {
  std::size_t input_dim = 0;
  std::size_t hidden = 0;
  // input_dim x hidden, row-major: hidden_weights[j * hidden + k] connects
  // input j to hidden unit k.
  std::vector<double> hidden_weights;
  std::vector<double> hidden_bias;
  std::vector<double> output_weights;
  double output_bias = 0.0;

  // Probability of the ironic class.
  double predict_proba(const SparseVector& x) const;

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

struct MlpConfig {
  std::size_t hidden = 30;
  double learning_rate = 0.01;
  std::size_t batch_size = 5;
  int max_epochs = 200;
  bool early_stopping = true;
  double validation_fraction = 0.1;
  int patience = 5;
  double tolerance = 1e-4;
  double init_range = 0.05;
  std::uint64_t seed = 1;
};

// Mean binary cross-entropy over `rows` (all rows when empty).
double mlp_loss(const MlpModel& model, const Dataset& data, const std::vector<std::size_t>& rows = {});

// Dense gradient of mlp_loss, laid out like the model parameters.
struct MlpGradient {
  std::vector<double> hidden_weights;
  std::vector<double> hidden_bias;
  std::vector<double> output_weights;
  double output_bias = 0.0;
};
MlpGradient mlp_gradient(const MlpModel& model, const Dataset& data, const std::vector<std::size_t>& rows = {});

// Uniform initialization in [-init_range, init_range].
MlpModel init_mlp(std::size_t input_dim, const MlpConfig& config);

// Minibatch gradient descent with early stopping on a seeded validation
// split. Throws TrainingError for single-class data or fewer than 10 rows.
MlpModel train_mlp(const Dataset& data, const MlpConfig& config);

}  // namespace udirony

#endif  // UDIRONY_MLP_H_
