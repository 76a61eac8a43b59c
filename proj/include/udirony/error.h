#ifndef UDIRONY_ERROR_H_
#define UDIRONY_ERROR_H_

#include <stdexcept>
#include <string>

namespace udirony {

// Bad or inconsistent input data (malformed CoNLL-U, missing labels, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A learner refused its input or failed to train.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or command-line usage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace udirony

#endif  // UDIRONY_ERROR_H_
