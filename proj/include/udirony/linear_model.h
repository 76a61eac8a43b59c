#ifndef UDIRONY_LINEAR_MODEL_H_
#define UDIRONY_LINEAR_MODEL_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "udirony/vectorizer.h"

namespace udirony {

enum class LinearLoss { kHinge, kLogistic };

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  LinearLoss loss = LinearLoss::kHinge;
  // Inverse regularization strength C the model was trained with.
  double c = 1.0;

  double decision(const SparseVector& x) const;

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

// Linear SVM: min 0.5 (|w|^2 + b^2) + C sum_i max(0, 1 - s_i (w.x_i + b)),
// s_i = 2 y_i - 1, solved by dual coordinate descent. The bias is treated as
// the weight of a constant feature and is regularized along with w.
struct SvmConfig {
  double c = 1.0;
  double tolerance = 1e-4;  // on the projected-gradient spread
  int max_epochs = 1000;
  std::uint64_t seed = 1;
  // Called after every epoch with the dual objective value.
  std::function<void(int epoch, const LinearModel&, double dual_objective)> on_epoch;
};

// Logistic regression: min 0.5 |w|^2 + C sum_i log(1 + exp(-s_i (w.x_i + b))),
// bias unregularized, by seeded SGD with step eta0 / (1 + eta0 lambda t).
struct LogRegConfig {
  double c = 1.0;
  int max_epochs = 5;
  // Lift the epoch cap: run until the objective changes by less than
  // `tolerance` (relative) or `converge_max_epochs` is reached.
  bool converge = false;
  int converge_max_epochs = 1000;
  double tolerance = 1e-4;
  double learning_rate = 0.1;
  std::uint64_t seed = 1;
  std::function<void(int epoch, const LinearModel&)> on_epoch;
};

LinearModel train_svm(const Dataset& data, const SvmConfig& config);
LinearModel train_logreg(const Dataset& data, const LogRegConfig& config);

double hinge_objective(const LinearModel& model, const Dataset& data, double c);
double logistic_objective(const LinearModel& model, const Dataset& data, double c);
// Gradient of logistic_objective with respect to (weights, bias).
void logistic_gradient(const LinearModel& model, const Dataset& data, double c,
                       std::vector<double>& grad_weights, double& grad_bias);

double sigmoid(double z);

// Throws TrainingError when labels and rows disagree in count or an index
// exceeds data.dim.
void check_dataset(const Dataset& data);
// Throws TrainingError unless both classes are present.
void require_two_classes(const Dataset& data);

}  // namespace udirony

#endif  // UDIRONY_LINEAR_MODEL_H_
