#ifndef UDIRONY_FOREST_H_
#define UDIRONY_FOREST_H_

#include <array>
#include <cstdint>
#include <vector>

#include "udirony/vectorizer.h"

namespace udirony {

struct TreeNode {
  // -1 for leaves.
  std::int32_t feature = -1;
  // Samples with value <= threshold go left.
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  // Weighted class counts of the training samples that reached the node.
  std::array<std::uint32_t, 2> counts{};

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& leaf_for(const SparseVector& x) const;
  // Majority class of the leaf; ties go to 0.
  int predict(const SparseVector& x) const;
  std::size_t depth() const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  std::vector<std::uint64_t> tree_seeds;
  std::size_t dim = 0;

  // Fraction of trees voting for the ironic class.
  double vote_fraction(const SparseVector& x) const;

  friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

// Defaults: 100 trees, gini, floor(sqrt(V)) candidate features per split,
// bootstrap sampling, unlimited depth, one sample per leaf.
struct ForestConfig {
  int n_trees = 100;
  // 0 selects floor(sqrt(V)), at least 1.
  int max_features = 0;
  bool bootstrap = true;
  // 0 means unlimited.
  int max_depth = 0;
  int min_samples_leaf = 1;
  std::uint64_t seed = 1;
  // Worker threads for tree construction. Results do not depend on it.
  int jobs = 1;
};

ForestModel train_forest(const Dataset& data, const ForestConfig& config);

// Gini impurity of a node with the given class weights.
double gini(double negatives, double positives);

}  // namespace udirony

#endif  // UDIRONY_FOREST_H_
