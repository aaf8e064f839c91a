#include "vowelkit/classifier_dtc.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vowelkit/error.hpp"

namespace vowelkit {

double gini_impurity(const std::map<std::string, std::size_t>& counts) {
  std::size_t total = 0;
  for (const auto& [label, c] : counts) total += c;
  if (total == 0) return 0.0;
  double sum_sq = 0.0;
  for (const auto& [label, c] : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

namespace {

double gini_of(const std::vector<std::size_t>& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double sum_sq = 0.0;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

class TreeBuilder {
 public:
  TreeBuilder(const LabeledFeatures& train, const TreeParams& params,
              std::vector<DecisionTree::Node>& nodes)
      : train_(train), params_(params), nodes_(nodes) {
    std::set<std::string> labels;
    for (const LabeledFeature& s : train) labels.insert(s.label);
    names_.assign(labels.begin(), labels.end());
    class_of_.reserve(train.size());
    for (const LabeledFeature& s : train) {
      class_of_.push_back(static_cast<std::size_t>(
          std::lower_bound(names_.begin(), names_.end(), s.label) - names_.begin()));
    }
    dim_ = train.front().features.size();
  }

  int build(std::vector<std::size_t> idx, std::size_t depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    std::vector<std::size_t> counts(names_.size(), 0);
    for (std::size_t i : idx) ++counts[class_of_[i]];
    {
      DecisionTree::Node& node = nodes_[id];
      std::size_t best = 0;
      for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] > 0) node.class_counts[names_[c]] = counts[c];
        if (counts[c] > counts[best]) best = c;  // strict: earliest (lexicographic) wins ties
      }
      node.label = names_[best];
    }

    const double parent = gini_of(counts, idx.size());
    const bool depth_limited = params_.max_depth && depth >= *params_.max_depth;
    if (parent == 0.0 || idx.size() < params_.min_samples_split || depth_limited) return id;

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_gini = parent;
    std::vector<std::size_t> order = idx;
    std::vector<std::size_t> left(names_.size());
    for (std::size_t f = 0; f < dim_; ++f) {
      auto value = [&](std::size_t i) { return train_[i].features[f]; };
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
      std::fill(left.begin(), left.end(), 0);
      const std::size_t n = order.size();
      for (std::size_t pos = 0; pos + 1 < n; ++pos) {
        ++left[class_of_[order[pos]]];
        const double lo = value(order[pos]);
        const double hi = value(order[pos + 1]);
        if (!(lo < hi)) continue;
        const std::size_t n_left = pos + 1;
        const std::size_t n_right = n - n_left;
        double right_sq = 0.0, left_sq = 0.0;
        for (std::size_t c = 0; c < counts.size(); ++c) {
          const double pl = static_cast<double>(left[c]) / static_cast<double>(n_left);
          const double pr = static_cast<double>(counts[c] - left[c]) / static_cast<double>(n_right);
          left_sq += pl * pl;
          right_sq += pr * pr;
        }
        const double weighted = (static_cast<double>(n_left) * (1.0 - left_sq) +
                                 static_cast<double>(n_right) * (1.0 - right_sq)) /
                                static_cast<double>(n);
        if (weighted < best_gini) {
          double threshold = lo + (hi - lo) / 2.0;
          if (!(threshold > lo)) threshold = hi;
          best_gini = weighted;
          best_feature = static_cast<int>(f);
          best_threshold = threshold;
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t i : idx) {
      (train_[i].features[best_feature] < best_threshold ? left_idx : right_idx).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();
    const int l = build(std::move(left_idx), depth + 1);
    const int r = build(std::move(right_idx), depth + 1);
    DecisionTree::Node& node = nodes_[id];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = r;
    return id;
  }

 private:
  const LabeledFeatures& train_;
  const TreeParams& params_;
  std::vector<DecisionTree::Node>& nodes_;
  std::vector<std::string> names_;
  std::vector<std::size_t> class_of_;
  std::size_t dim_ = 0;
};

}  // namespace

DecisionTree DecisionTree::fit(const LabeledFeatures& train, const TreeParams& params) {
  if (train.empty()) throw Error(Errc::insufficient_data, "empty training set");
  const std::size_t dim = train.front().features.size();
  if (dim == 0) throw Error(Errc::invalid_argument, "training samples have no features");
  for (const LabeledFeature& s : train) {
    if (s.features.size() != dim) {
      throw Error(Errc::dimension_mismatch, "inconsistent feature dimensionality in training set");
    }
  }
  DecisionTree tree;
  tree.dimension_ = dim;
  std::vector<std::size_t> idx(train.size());
  std::iota(idx.begin(), idx.end(), 0);
  TreeBuilder(train, params, tree.nodes_).build(std::move(idx), 0);
  return tree;
}

const std::string& DecisionTree::predict(std::span<const double> features) const {
  if (features.size() != dimension_) {
    throw Error(Errc::dimension_mismatch, "expected " + std::to_string(dimension_) +
                                              " features, got " + std::to_string(features.size()));
  }
  int id = 0;
  while (!nodes_[id].is_leaf()) {
    const Node& n = nodes_[id];
    id = features[n.feature] < n.threshold ? n.left : n.right;
  }
  return nodes_[id].label;
}

std::size_t DecisionTree::depth() const {
  std::size_t best = 0;
  std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (!nodes_[id].is_leaf()) {
      stack.push_back({nodes_[id].left, d + 1});
      stack.push_back({nodes_[id].right, d + 1});
    }
  }
  return best;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

std::string DecisionTree::to_jsonl() const {
  std::ostringstream out;
  nlohmann::json header{{"record", "tree"}, {"dimension", dimension_}, {"n_nodes", nodes_.size()}};
  out << header.dump() << '\n';
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    nlohmann::json j{{"record", "node"}, {"id", i}, {"label", n.label}, {"counts", n.class_counts}};
    if (n.is_leaf()) {
      j["leaf"] = true;
    } else {
      j["leaf"] = false;
      j["feature"] = n.feature;
      j["threshold"] = n.threshold;
      j["left"] = n.left;
      j["right"] = n.right;
    }
    out << j.dump() << '\n';
  }
  return out.str();
}

DecisionTree DecisionTree::from_jsonl(const std::string& text) {
  DecisionTree tree;
  std::istringstream in(text);
  std::string line;
  try {
    if (!std::getline(in, line)) throw Error(Errc::malformed, "empty tree record");
    const nlohmann::json header = nlohmann::json::parse(line);
    tree.dimension_ = header.at("dimension").get<std::size_t>();
    tree.nodes_.resize(header.at("n_nodes").get<std::size_t>());
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const nlohmann::json j = nlohmann::json::parse(line);
      const auto id = j.at("id").get<std::size_t>();
      if (id >= tree.nodes_.size()) throw Error(Errc::malformed, "node id out of range");
      Node& n = tree.nodes_[id];
      n.label = j.at("label").get<std::string>();
      n.class_counts = j.at("counts").get<std::map<std::string, std::size_t>>();
      if (!j.at("leaf").get<bool>()) {
        n.feature = j.at("feature").get<int>();
        n.threshold = j.at("threshold").get<double>();
        n.left = j.at("left").get<int>();
        n.right = j.at("right").get<int>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed, std::string("tree record: ") + e.what());
  }
  return tree;
}

double accuracy_from_confusion(const std::vector<std::vector<std::size_t>>& confusion) {
  std::size_t total = 0, hits = 0;
  for (std::size_t i = 0; i < confusion.size(); ++i) {
    for (std::size_t j = 0; j < confusion[i].size(); ++j) {
      total += confusion[i][j];
      if (i == j) hits += confusion[i][j];
    }
  }
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(hits) / static_cast<double>(total);
}

EvalResult evaluate(const DecisionTree& tree, const LabeledFeatures& test) {
  if (test.empty()) throw Error(Errc::insufficient_data, "empty test set");
  std::set<std::string> labels;
  for (const LabeledFeature& s : test) labels.insert(s.label);
  for (const DecisionTree::Node& n : tree.nodes()) {
    if (n.is_leaf()) labels.insert(n.label);
  }
  EvalResult r;
  r.labels.assign(labels.begin(), labels.end());
  r.confusion.assign(r.labels.size(), std::vector<std::size_t>(r.labels.size(), 0));
  auto index_of = [&](const std::string& l) {
    return static_cast<std::size_t>(std::lower_bound(r.labels.begin(), r.labels.end(), l) -
                                    r.labels.begin());
  };
  for (const LabeledFeature& s : test) {
    ++r.confusion[index_of(s.label)][index_of(tree.predict(s.features))];
  }
  r.n_test = test.size();
  r.accuracy = accuracy_from_confusion(r.confusion);
  return r;
}

}  // namespace vowelkit
