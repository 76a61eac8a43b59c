#include "udirony/forest.h"

#include <algorithm>
#include <cmath>
#include <thread>
#include <unordered_map>

#include "udirony/error.h"
#include "udirony/linear_model.h"
#include "udirony/random.h"

namespace udirony {
namespace {

using Column = std::vector<std::pair<std::uint32_t, double>>;

std::vector<Column> to_columns(const Dataset& data) {
  std::vector<Column> cols(data.dim);
  for (std::uint32_t r = 0; r < data.rows.size(); ++r) {
    for (const auto& [j, v] : data.rows[r].entries) cols[j].emplace_back(r, v);
  }
  return cols;
}

// Draws features without replacement from [0, n) in O(1) memory per draw.
class LazyPermutation {
 public:
  explicit LazyPermutation(std::uint32_t n) : n_(n) {}

  bool exhausted() const { return drawn_ == n_; }
  std::uint32_t draw(Rng& rng) {
    const auto j = drawn_ + static_cast<std::uint32_t>(uniform_index(rng, n_ - drawn_));
    const std::uint32_t picked = get(j);
    swaps_[j] = get(drawn_);
    ++drawn_;
    return picked;
  }
  // Whether `f` was among the draws so far.
  bool drawn(std::uint32_t f) const { return drawn_set_.count(f) > 0; }
  void remember(std::uint32_t f) { drawn_set_.insert({f, 0}); }

 private:
  std::uint32_t get(std::uint32_t i) const {
    auto it = swaps_.find(i);
    return it == swaps_.end() ? i : it->second;
  }

  std::uint32_t n_;
  std::uint32_t drawn_ = 0;
  std::unordered_map<std::uint32_t, std::uint32_t> swaps_;
  std::unordered_map<std::uint32_t, char> drawn_set_;
};

struct Split {
  bool found = false;
  std::int32_t feature = -1;
  double threshold = 0.0;
  double score = -1.0;  // sum over children of sum_c w_c^2 / w; larger is purer
};

// Distinct feature value with the class weights and row count at that value.
struct Bucket {
  double value;
  double w[2];
  std::size_t rows;
};

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const std::vector<Column>& cols, const ForestConfig& config,
              std::uint32_t max_features, std::uint64_t seed)
      : data_(data), cols_(cols), config_(config), max_features_(max_features), rng_(seed),
        weight_(data.size(), 0), node_of_(data.size(), -1) {}

  DecisionTree build() {
    const std::size_t n = data_.size();
    if (config_.bootstrap) {
      for (std::size_t k = 0; k < n; ++k) ++weight_[uniform_index(rng_, n)];
    } else {
      std::fill(weight_.begin(), weight_.end(), 1u);
    }
    std::vector<std::uint32_t> rows;
    for (std::uint32_t r = 0; r < n; ++r) {
      if (weight_[r] > 0) rows.push_back(r);
    }
    struct Pending {
      std::int32_t node;
      std::vector<std::uint32_t> rows;
      int depth;
    };
    tree_.nodes.push_back(make_node(rows));
    std::vector<Pending> stack;
    stack.push_back({0, std::move(rows), 0});
    while (!stack.empty()) {
      Pending p = std::move(stack.back());
      stack.pop_back();
      Split split = find_split(p.node, p.rows, p.depth);
      if (!split.found) continue;
      std::vector<std::uint32_t> left, right;
      for (std::uint32_t r : p.rows) {
        (data_.rows[r].at(static_cast<std::uint32_t>(split.feature)) <= split.threshold ? left : right).push_back(r);
      }
      const auto li = static_cast<std::int32_t>(tree_.nodes.size());
      tree_.nodes.push_back(make_node(left));
      const auto ri = static_cast<std::int32_t>(tree_.nodes.size());
      tree_.nodes.push_back(make_node(right));
      TreeNode& node = tree_.nodes[static_cast<std::size_t>(p.node)];
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.left = li;
      node.right = ri;
      // Right is pushed first so the left subtree is expanded first.
      stack.push_back({ri, std::move(right), p.depth + 1});
      stack.push_back({li, std::move(left), p.depth + 1});
    }
    return std::move(tree_);
  }

 private:
  TreeNode make_node(const std::vector<std::uint32_t>& rows) const {
    TreeNode node;
    for (std::uint32_t r : rows) node.counts[static_cast<std::size_t>(data_.labels[r])] += weight_[r];
    return node;
  }

  Split find_split(std::int32_t node_id, const std::vector<std::uint32_t>& rows, int depth) {
    Split best;
    const TreeNode& node = tree_.nodes[static_cast<std::size_t>(node_id)];
    if (node.counts[0] == 0 || node.counts[1] == 0) return best;
    if (config_.max_depth > 0 && depth >= config_.max_depth) return best;
    const auto min_leaf = static_cast<std::size_t>(std::max(1, config_.min_samples_leaf));
    if (rows.size() < 2 * min_leaf) return best;
    for (std::uint32_t r : rows) node_of_[r] = node_id;

    LazyPermutation perm(static_cast<std::uint32_t>(data_.dim));
    std::uint32_t visited = 0;
    while (!perm.exhausted()) {
      if (visited >= max_features_) break;
      const std::uint32_t f = perm.draw(rng_);
      perm.remember(f);
      ++visited;
      evaluate(f, node_id, node, rows, min_leaf, best);
    }
    if (best.found || perm.exhausted()) return best;
    // Every candidate so far was constant on this node. Continuing the random
    // draw until a usable feature turns up is equivalent to scanning, in a
    // random order, the remaining features that are nonzero somewhere in the
    // node; features that are zero on every row are constant.
    std::vector<std::uint32_t> present;
    for (std::uint32_t r : rows) {
      for (const auto& [j, v] : data_.rows[r].entries) present.push_back(j);
    }
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    present.erase(std::remove_if(present.begin(), present.end(), [&](std::uint32_t f) { return perm.drawn(f); }),
                  present.end());
    shuffle(present, rng_);
    for (std::uint32_t f : present) {
      evaluate(f, node_id, node, rows, min_leaf, best);
      if (best.found) break;
    }
    return best;
  }

  void evaluate(std::uint32_t f, std::int32_t node_id, const TreeNode& node,
                const std::vector<std::uint32_t>& rows, std::size_t min_leaf, Split& best) {
    // (value, row) for the node's rows with a nonzero value of f.
    values_.clear();
    const Column& col = cols_[f];
    if (col.size() <= 4 * rows.size()) {
      for (const auto& [r, v] : col) {
        if (node_of_[r] == node_id) values_.emplace_back(v, r);
      }
    } else {
      for (std::uint32_t r : rows) {
        const double v = data_.rows[r].at(f);
        if (v != 0.0) values_.emplace_back(v, r);
      }
    }
    std::sort(values_.begin(), values_.end());

    // Distinct values in ascending order; the rows absent from the column
    // form the 0 bucket.
    buckets_.clear();
    double nz_w[2] = {0, 0};
    std::size_t nz_rows = 0;
    for (const auto& [v, r] : values_) {
      const double w = weight_[r];
      nz_w[data_.labels[r]] += w;
      ++nz_rows;
      if (buckets_.empty() || buckets_.back().value != v) buckets_.push_back({v, {0, 0}, 0});
      buckets_.back().w[data_.labels[r]] += w;
      ++buckets_.back().rows;
    }
    if (nz_rows < rows.size()) {
      Bucket zero{0.0, {node.counts[0] - nz_w[0], node.counts[1] - nz_w[1]}, rows.size() - nz_rows};
      auto pos = std::lower_bound(buckets_.begin(), buckets_.end(), 0.0,
                                  [](const Bucket& b, double v) { return b.value < v; });
      buckets_.insert(pos, zero);
    }
    if (buckets_.size() < 2) return;

    const double total[2] = {static_cast<double>(node.counts[0]), static_cast<double>(node.counts[1])};
    double left[2] = {0, 0};
    std::size_t left_rows = 0;
    for (std::size_t b = 0; b + 1 < buckets_.size(); ++b) {
      left[0] += buckets_[b].w[0];
      left[1] += buckets_[b].w[1];
      left_rows += buckets_[b].rows;
      const std::size_t right_rows = rows.size() - left_rows;
      if (left_rows < min_leaf || right_rows < min_leaf) continue;
      const double right[2] = {total[0] - left[0], total[1] - left[1]};
      const double wl = left[0] + left[1];
      const double wr = right[0] + right[1];
      const double score = (left[0] * left[0] + left[1] * left[1]) / wl +
                           (right[0] * right[0] + right[1] * right[1]) / wr;
      if (score > best.score) {
        const double a = buckets_[b].value, c = buckets_[b + 1].value;
        double threshold = a + (c - a) / 2.0;
        if (!(threshold < c)) threshold = a;
        best = {true, static_cast<std::int32_t>(f), threshold, score};
      }
    }
  }

  const Dataset& data_;
  const std::vector<Column>& cols_;
  const ForestConfig& config_;
  std::uint32_t max_features_;
  Rng rng_;
  std::vector<std::uint32_t> weight_;
  std::vector<std::int32_t> node_of_;
  DecisionTree tree_;
  // Scratch buffers reused across candidate features.
  std::vector<std::pair<double, std::uint32_t>> values_;
  std::vector<Bucket> buckets_;
};

}  // namespace

double gini(double negatives, double positives) {
  const double total = negatives + positives;
  if (total <= 0) return 0.0;
  const double p = positives / total, q = negatives / total;
  return 1.0 - p * p - q * q;
}

const TreeNode& DecisionTree::leaf_for(const SparseVector& x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(x.at(static_cast<std::uint32_t>(n.feature)) <= n.threshold ? n.left : n.right);
  }
  return nodes[i];
}

int DecisionTree::predict(const SparseVector& x) const {
  const TreeNode& leaf = leaf_for(x);
  return leaf.counts[1] > leaf.counts[0] ? 1 : 0;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return best;
}

double ForestModel::vote_fraction(const SparseVector& x) const {
  if (trees.empty()) return 0.0;
  std::size_t votes = 0;
  for (const auto& t : trees) votes += static_cast<std::size_t>(t.predict(x));
  return static_cast<double>(votes) / static_cast<double>(trees.size());
}

ForestModel train_forest(const Dataset& data, const ForestConfig& config) {
  check_dataset(data);
  require_two_classes(data);
  if (config.n_trees < 1) throw TrainingError("forest needs at least one tree");
  std::uint32_t max_features = config.max_features > 0
                                   ? static_cast<std::uint32_t>(config.max_features)
                                   : static_cast<std::uint32_t>(std::floor(std::sqrt(static_cast<double>(data.dim))));
  max_features = std::max<std::uint32_t>(1, max_features);

  const auto cols = to_columns(data);
  ForestModel forest;
  forest.dim = data.dim;
  forest.trees.resize(static_cast<std::size_t>(config.n_trees));
  for (int t = 0; t < config.n_trees; ++t) forest.tree_seeds.push_back(mix_seed(config.seed, static_cast<std::uint64_t>(t)));

  auto grow = [&](std::size_t first, std::size_t stride) {
    for (std::size_t t = first; t < forest.trees.size(); t += stride) {
      forest.trees[t] = TreeBuilder(data, cols, config, max_features, forest.tree_seeds[t]).build();
    }
  };
  const auto jobs = static_cast<std::size_t>(std::clamp(config.jobs, 1, config.n_trees));
  if (jobs == 1) {
    grow(0, 1);
  } else {
    std::vector<std::thread> workers;
    for (std::size_t k = 0; k < jobs; ++k) workers.emplace_back(grow, k, jobs);
    for (auto& w : workers) w.join();
  }
  return forest;
}

}  // namespace udirony
