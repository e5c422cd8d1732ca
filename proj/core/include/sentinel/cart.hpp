#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sentinel/journal.hpp"

namespace sentinel {

inline constexpr std::size_t kNumClasses = 3;

using ClassCounts = std::array<std::size_t, kNumClasses>;

/// Class probabilities over {0,1,2}; sums to 1.
using ClassDistribution = std::array<double, kNumClasses>;

/// Row-major feature matrix with integer class labels in [0, kNumClasses).
class Dataset {
 public:
  explicit Dataset(std::size_t num_features) : num_features_(num_features) {}

  /// Throws std::invalid_argument on a width mismatch, non-finite feature, or
  /// a label outside [0, kNumClasses).
  void add(std::span<const double> x, int label);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  std::size_t num_features() const { return num_features_; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * num_features_, num_features_};
  }
  double value(std::size_t i, std::size_t feature) const { return values_[i * num_features_ + feature]; }
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const int> labels() const { return labels_; }

  /// First `n` rows as a new dataset.
  Dataset prefix(std::size_t n) const;

 private:
  std::size_t num_features_;
  std::vector<double> values_;
  std::vector<int> labels_;
};

struct Hyperparams {
  std::optional<int> max_depth;  // unset = unlimited
  int min_samples_split = 2;
  int min_samples_leaf = 1;

  /// Throws std::invalid_argument when max_depth < 1, min_samples_split < 2,
  /// or min_samples_leaf < 1.
  void validate() const;

  bool operator==(const Hyperparams&) const = default;
};

/// 1 - sum_k p_k^2. Throws std::invalid_argument("empty node") when all counts are 0.
double gini(std::span<const std::size_t> class_counts);

/// Rows with feature value <= threshold go left.
struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;

  bool operator==(const Split&) const = default;
};

/// Exhaustive search over midpoints of consecutive distinct values of every
/// feature for the split minimizing size-weighted child Gini, with both
/// children holding at least `min_samples_leaf` rows. Impurity ties resolve to
/// the lowest feature index, then the lowest threshold. Returns nullopt for a
/// pure node or when no candidate satisfies the leaf constraint.
std::optional<Split> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                std::size_t min_samples_leaf = 1);
std::optional<Split> best_split(const Dataset& data, std::size_t min_samples_leaf = 1);

class Tree {
 public:
  struct Node {
    ClassCounts counts{};
    int predicted = 0;
    std::size_t depth = 0;
    std::size_t feature = 0;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;

    bool is_leaf() const { return left < 0; }
    bool operator==(const Node&) const = default;
  };

  /// Validates structure: node 0 is the root, children come after their
  /// parent, internal nodes have both children, depths are consistent.
  static Tree from_nodes(std::vector<Node> nodes, std::size_t num_features);

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t num_features() const { return num_features_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_count() const;
  std::size_t depth() const;

  int predict(std::span<const double> x) const;
  ClassDistribution predict_distribution(std::span<const double> x) const;

  bool operator==(const Tree&) const = default;

 private:
  friend Tree fit(const Dataset& data, const Hyperparams& hp);
  Tree(std::vector<Node> nodes, std::size_t num_features)
      : nodes_(std::move(nodes)), num_features_(num_features) {}
  const Node& leaf_for(std::span<const double> x) const;

  std::vector<Node> nodes_;
  std::size_t num_features_ = 0;
};

/// Argmax of the counts; ties go to the smallest class.
int majority_class(const ClassCounts& counts);

/// Greedy CART growth. Deterministic for a fixed dataset regardless of row
/// order. Throws std::invalid_argument on an empty dataset or invalid hp.
Tree fit(const Dataset& data, const Hyperparams& hp);

/// Nested JSON document: kind, feature, threshold, counts, gini, depth,
/// predicted, children. Features beyond `feature_names` are named "f<i>".
nlohmann::json export_tree(const Tree& tree,
                           std::span<const std::string_view> feature_names = kFeatureNames);

/// Inverse of export_tree. Throws std::invalid_argument on malformed input.
Tree import_tree(const nlohmann::json& doc,
                 std::span<const std::string_view> feature_names = kFeatureNames);

}  // namespace sentinel
