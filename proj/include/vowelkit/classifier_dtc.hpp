#ifndef VOWELKIT_CLASSIFIER_DTC_HPP
#define VOWELKIT_CLASSIFIER_DTC_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vowelkit/dataset.hpp"

namespace vowelkit {

struct TreeParams {
  std::optional<std::size_t> max_depth;  ///< root has depth 0; nullopt = unbounded
  std::size_t min_samples_split = 2;
};

/// CART classification tree over axis-aligned thresholds. Routing rule:
/// left iff feature < threshold, so a value equal to the threshold goes right.
class DecisionTree {
 public:
  struct Node {
    // Internal nodes: feature, threshold, left, right. Leaves: left == right == -1.
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::string label;                   ///< majority label (also set on internal nodes)
    std::map<std::string, std::size_t> class_counts;

    bool is_leaf() const { return left < 0; }
  };

  /// Greedy Gini partitioning; candidate thresholds are midpoints of
  /// consecutive distinct values. Ties: lowest Gini, then feature, then threshold.
  static DecisionTree fit(const LabeledFeatures& train, const TreeParams& params = {});

  const std::string& predict(std::span<const double> features) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

  /// Node records with explicit child indices, one JSON object per line.
  std::string to_jsonl() const;
  static DecisionTree from_jsonl(const std::string& text);

 private:
  std::vector<Node> nodes_;
  std::size_t dimension_ = 0;
};

double gini_impurity(const std::map<std::string, std::size_t>& counts);

struct EvalResult {
  double accuracy = 0.0;  ///< percent
  std::vector<std::string> labels;  ///< row/column order of confusion
  std::vector<std::vector<std::size_t>> confusion;  ///< [true][predicted]
  std::size_t n_test = 0;
};

/// Confusion rows/columns cover the union of test labels and tree labels, sorted.
EvalResult evaluate(const DecisionTree& tree, const LabeledFeatures& test);

/// 100 * trace / sum; the accuracy implied by a confusion matrix.
double accuracy_from_confusion(const std::vector<std::vector<std::size_t>>& confusion);

}  // namespace vowelkit

#endif  // VOWELKIT_CLASSIFIER_DTC_HPP
