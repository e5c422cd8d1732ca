#include "sentinel/cart.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sentinel {

namespace {

__extension__ using Wide = unsigned __int128;

// Size-weighted child Gini of a split is
//   (1/n) * (n - SL/nl - SR/nr),  SL = sum of squared left counts, SR likewise,
// so minimizing it means maximizing SL/nl + SR/nr. Keeping that quantity as an
// exact fraction makes impurity ties exact, which the tie-break rule needs.
struct SplitScore {
  Wide numerator = 0;    // SL * nr + SR * nl
  Wide denominator = 1;  // nl * nr

  bool better_than(const SplitScore& other) const {
    return numerator * other.denominator > other.numerator * denominator;
  }
};

Wide sum_of_squares(const ClassCounts& counts) {
  Wide s = 0;
  for (auto c : counts) s += Wide{c} * c;
  return s;
}

SplitScore score(const ClassCounts& left, std::size_t nl, const ClassCounts& right, std::size_t nr) {
  return {sum_of_squares(left) * nr + sum_of_squares(right) * nl, Wide{nl} * nr};
}

ClassCounts count_classes(const Dataset& data, std::span<const std::size_t> rows) {
  ClassCounts counts{};
  for (auto i : rows) ++counts[static_cast<std::size_t>(data.label(i))];
  return counts;
}

bool is_pure(const ClassCounts& counts) {
  return std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) <= 1;
}

double midpoint(double lo, double hi) {
  double mid = lo / 2 + hi / 2;
  // Adjacent doubles can round the midpoint up to `hi`, which would send both
  // values left.
  if (!(mid < hi)) mid = lo;
  return mid;
}

class Builder {
 public:
  Builder(const Dataset& data, const Hyperparams& hp) : data_(data), hp_(hp) {}

  std::vector<Tree::Node> build() {
    std::vector<std::size_t> rows(data_.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    grow(rows, 0);
    return std::move(nodes_);
  }

 private:
  std::int32_t grow(std::vector<std::size_t>& rows, std::size_t depth) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    Tree::Node node;
    node.counts = count_classes(data_, rows);
    node.predicted = majority_class(node.counts);
    node.depth = depth;
    nodes_.push_back(node);

    const bool depth_reached = hp_.max_depth && depth >= static_cast<std::size_t>(*hp_.max_depth);
    if (is_pure(node.counts) || rows.size() < static_cast<std::size_t>(hp_.min_samples_split) ||
        depth_reached) {
      return id;
    }
    const auto split = best_split(data_, rows, static_cast<std::size_t>(hp_.min_samples_leaf));
    if (!split) return id;

    std::vector<std::size_t> left, right;
    for (auto i : rows) {
      (data_.value(i, split->feature) <= split->threshold ? left : right).push_back(i);
    }
    rows.clear();
    rows.shrink_to_fit();

    const auto l = grow(left, depth + 1);
    const auto r = grow(right, depth + 1);
    auto& self = nodes_[static_cast<std::size_t>(id)];
    self.feature = split->feature;
    self.threshold = split->threshold;
    self.left = l;
    self.right = r;
    return id;
  }

  const Dataset& data_;
  const Hyperparams& hp_;
  std::vector<Tree::Node> nodes_;
};

std::string feature_name(std::size_t feature, std::span<const std::string_view> names) {
  if (feature < names.size()) return std::string(names[feature]);
  return "f" + std::to_string(feature);
}

std::size_t feature_index(const std::string& name, std::span<const std::string_view> names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  if (name.size() > 1 && name[0] == 'f' &&
      std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return std::stoul(name.substr(1));
  }
  throw std::invalid_argument("unknown feature name '" + name + "'");
}

nlohmann::json export_node(const Tree& tree, std::size_t id, std::span<const std::string_view> names) {
  const auto& node = tree.nodes()[id];
  nlohmann::json doc;
  doc["kind"] = node.is_leaf() ? "leaf" : "internal";
  if (node.is_leaf()) {
    doc["feature"] = nullptr;
    doc["threshold"] = nullptr;
  } else {
    doc["feature"] = feature_name(node.feature, names);
    doc["threshold"] = node.threshold;
  }
  doc["counts"] = node.counts;
  doc["gini"] = gini(node.counts);
  doc["depth"] = node.depth;
  doc["predicted"] = node.predicted;
  doc["children"] = nlohmann::json::array();
  if (!node.is_leaf()) {
    doc["children"].push_back(export_node(tree, static_cast<std::size_t>(node.left), names));
    doc["children"].push_back(export_node(tree, static_cast<std::size_t>(node.right), names));
  }
  return doc;
}

std::int32_t import_node(const nlohmann::json& doc, std::vector<Tree::Node>& nodes,
                         std::span<const std::string_view> names, std::size_t& max_feature) {
  if (!doc.is_object()) throw std::invalid_argument("tree node must be an object");
  const auto id = static_cast<std::int32_t>(nodes.size());
  Tree::Node node;
  const auto counts = doc.at("counts").get<std::vector<std::size_t>>();
  if (counts.size() != kNumClasses) throw std::invalid_argument("counts must have 3 entries");
  std::copy(counts.begin(), counts.end(), node.counts.begin());
  node.depth = doc.at("depth").get<std::size_t>();
  node.predicted = doc.contains("predicted") ? doc.at("predicted").get<int>() : majority_class(node.counts);
  nodes.push_back(node);

  const auto kind = doc.at("kind").get<std::string>();
  if (kind == "leaf") return id;
  if (kind != "internal") throw std::invalid_argument("unknown node kind '" + kind + "'");

  const auto& children = doc.at("children");
  if (!children.is_array() || children.size() != 2) {
    throw std::invalid_argument("internal node needs exactly two children");
  }
  const auto feature = feature_index(doc.at("feature").get<std::string>(), names);
  max_feature = std::max(max_feature, feature + 1);
  const auto threshold = doc.at("threshold").get<double>();
  const auto l = import_node(children[0], nodes, names, max_feature);
  const auto r = import_node(children[1], nodes, names, max_feature);
  auto& self = nodes[static_cast<std::size_t>(id)];
  self.feature = feature;
  self.threshold = threshold;
  self.left = l;
  self.right = r;
  return id;
}

}  // namespace

void Dataset::add(std::span<const double> x, int label) {
  if (x.size() != num_features_) {
    throw std::invalid_argument("expected " + std::to_string(num_features_) + " features, got " +
                                std::to_string(x.size()));
  }
  if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("features must be finite");
  }
  if (label < 0 || static_cast<std::size_t>(label) >= kNumClasses) {
    throw std::invalid_argument("class label " + std::to_string(label) + " outside {0,1,2}");
  }
  values_.insert(values_.end(), x.begin(), x.end());
  labels_.push_back(label);
}

Dataset Dataset::prefix(std::size_t n) const {
  n = std::min(n, size());
  Dataset out(num_features_);
  out.values_.assign(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n * num_features_));
  out.labels_.assign(labels_.begin(), labels_.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

void Hyperparams::validate() const {
  if (max_depth && *max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (min_samples_split < 2) throw std::invalid_argument("min_samples_split must be >= 2");
  if (min_samples_leaf < 1) throw std::invalid_argument("min_samples_leaf must be >= 1");
}

double gini(std::span<const std::size_t> class_counts) {
  const double total = std::accumulate(class_counts.begin(), class_counts.end(), 0.0);
  if (total <= 0) throw std::invalid_argument("empty node");
  double sum_sq = 0.0;
  for (auto c : class_counts) {
    const double p = static_cast<double>(c) / total;
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

std::optional<Split> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                std::size_t min_samples_leaf) {
  const std::size_t n = rows.size();
  if (n < 2) return std::nullopt;
  const ClassCounts total = count_classes(data, rows);
  if (is_pure(total)) return std::nullopt;
  min_samples_leaf = std::max<std::size_t>(min_samples_leaf, 1);
  if (n < 2 * min_samples_leaf) return std::nullopt;

  std::optional<Split> best;
  SplitScore best_score;
  std::vector<std::size_t> order(rows.begin(), rows.end());

  for (std::size_t f = 0; f < data.num_features(); ++f) {
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return data.value(a, f) < data.value(b, f); });
    ClassCounts left{};
    for (std::size_t k = 0; k + 1 < n; ++k) {
      ++left[static_cast<std::size_t>(data.label(order[k]))];
      const double lo = data.value(order[k], f);
      const double hi = data.value(order[k + 1], f);
      if (!(lo < hi)) continue;
      const std::size_t nl = k + 1;
      const std::size_t nr = n - nl;
      if (nl < min_samples_leaf || nr < min_samples_leaf) continue;
      ClassCounts right;
      for (std::size_t c = 0; c < kNumClasses; ++c) right[c] = total[c] - left[c];
      const SplitScore s = score(left, nl, right, nr);
      // Features and thresholds are visited in ascending order, so only a
      // strictly better score replaces the incumbent.
      if (!best || s.better_than(best_score)) {
        best = Split{f, midpoint(lo, hi)};
        best_score = s;
      }
    }
  }
  return best;
}

std::optional<Split> best_split(const Dataset& data, std::size_t min_samples_leaf) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return best_split(data, rows, min_samples_leaf);
}

int majority_class(const ClassCounts& counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return static_cast<int>(best);
}

Tree fit(const Dataset& data, const Hyperparams& hp) {
  hp.validate();
  if (data.empty()) throw std::invalid_argument("cannot fit a tree on an empty dataset");
  return Tree(Builder(data, hp).build(), data.num_features());
}

Tree Tree::from_nodes(std::vector<Node> nodes, std::size_t num_features) {
  if (nodes.empty()) throw std::invalid_argument("tree has no nodes");
  if (nodes.front().depth != 0) throw std::invalid_argument("root depth must be 0");
  const auto count = static_cast<std::int32_t>(nodes.size());
  for (std::int32_t id = 0; id < count; ++id) {
    const auto& node = nodes[static_cast<std::size_t>(id)];
    if (std::accumulate(node.counts.begin(), node.counts.end(), std::size_t{0}) == 0) {
      throw std::invalid_argument("node " + std::to_string(id) + " has no samples");
    }
    if (node.left < 0 && node.right < 0) continue;
    if (node.left <= id || node.right <= id || node.left >= count || node.right >= count) {
      throw std::invalid_argument("node " + std::to_string(id) + " has invalid children");
    }
    if (node.feature >= num_features) {
      throw std::invalid_argument("node " + std::to_string(id) + " splits on an unknown feature");
    }
    for (auto child : {node.left, node.right}) {
      if (nodes[static_cast<std::size_t>(child)].depth != node.depth + 1) {
        throw std::invalid_argument("inconsistent depth below node " + std::to_string(id));
      }
    }
  }
  return Tree(std::move(nodes), num_features);
}

std::size_t Tree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

std::size_t Tree::depth() const {
  std::size_t d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

const Tree::Node& Tree::leaf_for(std::span<const double> x) const {
  if (x.size() < num_features_) {
    throw std::invalid_argument("feature vector has " + std::to_string(x.size()) +
                                " components, tree expects " + std::to_string(num_features_));
  }
  const Node* node = &nodes_.front();
  while (!node->is_leaf()) {
    const auto next = x[node->feature] <= node->threshold ? node->left : node->right;
    node = &nodes_[static_cast<std::size_t>(next)];
  }
  return *node;
}

int Tree::predict(std::span<const double> x) const { return leaf_for(x).predicted; }

ClassDistribution Tree::predict_distribution(std::span<const double> x) const {
  const auto& counts = leaf_for(x).counts;
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  ClassDistribution dist{};
  for (std::size_t c = 0; c < kNumClasses; ++c) dist[c] = static_cast<double>(counts[c]) / total;
  return dist;
}

nlohmann::json export_tree(const Tree& tree, std::span<const std::string_view> feature_names) {
  return export_node(tree, 0, feature_names);
}

Tree import_tree(const nlohmann::json& doc, std::span<const std::string_view> feature_names) {
  std::vector<Tree::Node> nodes;
  std::size_t num_features = 0;
  try {
    import_node(doc, nodes, feature_names, num_features);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed tree document: ") + e.what());
  }
  return Tree::from_nodes(std::move(nodes), num_features);
}

}  // namespace sentinel
