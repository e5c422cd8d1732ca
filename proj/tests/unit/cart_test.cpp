#include <gtest/gtest.h>

#include "brute_tree.hpp"
#include "generators.hpp"
#include "sentinel/cart.hpp"

namespace sentinel {
namespace {

std::vector<oracle::Sample> samples_of(const Dataset& data) {
  std::vector<oracle::Sample> out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.push_back({{data.row(i).begin(), data.row(i).end()}, data.label(i)});
  }
  return out;
}

Dataset one_feature(std::initializer_list<std::pair<double, int>> rows) {
  Dataset data(1);
  for (const auto& [x, y] : rows) data.add(std::array{x}, y);
  return data;
}

TEST(Gini, Examples) {
  EXPECT_DOUBLE_EQ(gini(std::array<std::size_t, 3>{5, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(gini(std::array<std::size_t, 2>{2, 2}), 0.5);
  EXPECT_EQ(gini(std::array<std::size_t, 2>{1, 3}), 0.375);
  EXPECT_DOUBLE_EQ(gini(std::array<std::size_t, 3>{2, 1, 1}), 0.625);
  EXPECT_THROW(gini(std::array<std::size_t, 3>{0, 0, 0}), std::invalid_argument);
}

TEST(Gini, PermutationInvariantAndBounded) {
  testing::Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<std::size_t, 3> c{rng() % 10, rng() % 10, 1 + rng() % 10};
    const double g = gini(c);
    EXPECT_GE(g, 0.0);
    EXPECT_LE(g, 1.0 - 1.0 / 3 + 1e-15);
    std::swap(c[0], c[2]);
    EXPECT_DOUBLE_EQ(gini(c), g);
  }
}

TEST(Dataset, RejectsBadRows) {
  Dataset data(2);
  EXPECT_THROW(data.add(std::array{1.0}, 0), std::invalid_argument);
  EXPECT_THROW(data.add(std::array{1.0, std::nan("")}, 0), std::invalid_argument);
  EXPECT_THROW(data.add(std::array{1.0, 2.0}, 3), std::invalid_argument);
  data.add(std::array{1.0, 2.0}, 2);
  EXPECT_EQ(data.prefix(1).label(0), 2);
}

TEST(BestSplit, PureNodeHasNone) {
  EXPECT_FALSE(best_split(one_feature({{1, 1}, {2, 1}, {3, 1}})));
}

TEST(BestSplit, MidpointAndLeftOnEqual) {
  const auto data = one_feature({{1, 0}, {2, 0}, {3, 1}, {4, 1}});
  const auto s = best_split(data);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->feature, 0u);
  EXPECT_DOUBLE_EQ(s->threshold, 2.5);

  const auto tree = fit(data, {});
  EXPECT_EQ(tree.predict(std::array{2.5}), 0);
  EXPECT_EQ(tree.predict(std::array{2.6}), 1);
}

TEST(BestSplit, LeafConstraintCanRuleOutEverything) {
  const auto data = one_feature({{1, 0}, {2, 1}, {3, 0}});
  EXPECT_FALSE(best_split(data, 2));
  EXPECT_TRUE(best_split(data, 1));
}

TEST(BestSplit, TieGoesToLowestFeatureThenThreshold) {
  // Feature 1 duplicates feature 0, so every split ties across features.
  Dataset data(2);
  for (auto [x, y] : {std::pair{0.0, 0}, {1.0, 1}, {2.0, 0}, {3.0, 1}}) data.add(std::array{x, x}, y);
  const auto s = best_split(data);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->feature, 0u);
  const auto brute = oracle::brute_best_split(oracle::pointers(samples_of(data)), 2, 1);
  EXPECT_DOUBLE_EQ(s->threshold, brute->threshold);
}

TEST(BestSplit, AdjacentDoublesFallBackToLowerValue) {
  const double lo = 1.0;
  const double hi = std::nextafter(lo, 2.0);
  const auto s = best_split(one_feature({{lo, 0}, {hi, 1}}));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->threshold, lo);
}

TEST(BestSplit, MatchesBruteForce) {
  testing::Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto data = testing::random_dataset(rng, 2 + rng() % 25, 1 + rng() % 3, 2 + rng() % 5);
    const std::size_t leaf = 1 + rng() % 3;
    const auto samples = samples_of(data);
    const auto expect = oracle::brute_best_split(oracle::pointers(samples), data.num_features(), leaf);
    const auto got = best_split(data, leaf);
    ASSERT_EQ(got.has_value(), expect.has_value()) << "trial " << trial;
    if (!got) continue;
    EXPECT_EQ(got->feature, expect->feature) << "trial " << trial;
    EXPECT_EQ(got->threshold, expect->threshold) << "trial " << trial;
  }
}

TEST(Fit, MatchesBruteForcePredictions) {
  testing::Rng rng(4);
  for (int trial = 0; trial < 150; ++trial) {
    const auto data = testing::random_dataset(rng, 1 + rng() % 30, 1 + rng() % 3);
    Hyperparams hp;
    if (rng() % 2) hp.max_depth = 1 + static_cast<int>(rng() % 4);
    hp.min_samples_split = 2 + static_cast<int>(rng() % 4);
    hp.min_samples_leaf = 1 + static_cast<int>(rng() % 3);
    const auto tree = fit(data, hp);
    const auto samples = samples_of(data);
    const auto brute = oracle::brute_fit(
        oracle::pointers(samples), data.num_features(),
        {hp.max_depth, static_cast<std::size_t>(hp.min_samples_split), static_cast<std::size_t>(hp.min_samples_leaf)});
    auto probe = testing::random_dataset(rng, 40, data.num_features(), 7);
    for (std::size_t i = 0; i < probe.size(); ++i) {
      std::vector<double> x(probe.row(i).begin(), probe.row(i).end());
      ASSERT_EQ(tree.predict(x), oracle::brute_predict(*brute, x)) << "trial " << trial;
    }
  }
}

TEST(Fit, HonorsConstraints) {
  testing::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto data = testing::random_dataset(rng, 5 + rng() % 60, 3);
    const Hyperparams hp{1 + static_cast<int>(rng() % 5), 2 + static_cast<int>(rng() % 8),
                         1 + static_cast<int>(rng() % 4)};
    const auto tree = fit(data, hp);
    EXPECT_LE(tree.depth(), static_cast<std::size_t>(*hp.max_depth));
    for (const auto& node : tree.nodes()) {
      const auto n = node.counts[0] + node.counts[1] + node.counts[2];
      if (!node.is_leaf()) {
        EXPECT_GE(n, static_cast<std::size_t>(hp.min_samples_split));
      } else if (node.depth > 0) {
        EXPECT_GE(n, static_cast<std::size_t>(hp.min_samples_leaf));
      }
    }
  }
}

TEST(Fit, PureTrainingDataGivesSingleLeaf) {
  const auto tree = fit(one_feature({{1, 2}, {5, 2}}), {});
  EXPECT_EQ(tree.node_count(), 1u);
  EXPECT_EQ(tree.predict(std::array{100.0}), 2);
}

TEST(Fit, RowOrderDoesNotMatter) {
  testing::Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto data = testing::random_dataset(rng, 20, 3);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Dataset shuffled(3);
    for (auto i : order) shuffled.add(data.row(i), data.label(i));
    EXPECT_EQ(fit(data, {}), fit(shuffled, {}));
  }
}

TEST(Fit, LeafTieGoesToSmallestClass) {
  EXPECT_EQ(majority_class({2, 2, 0}), 0);
  EXPECT_EQ(majority_class({0, 3, 3}), 1);
  // Identical rows that disagree cannot be split.
  const auto tree = fit(one_feature({{1, 2}, {1, 1}}), {});
  EXPECT_EQ(tree.predict(std::array{1.0}), 1);
}

TEST(Fit, RejectsInvalidInput) {
  EXPECT_THROW(fit(Dataset(1), {}), std::invalid_argument);
  const auto data = one_feature({{1, 0}});
  EXPECT_THROW(fit(data, {0, 2, 1}), std::invalid_argument);
  EXPECT_THROW(fit(data, {std::nullopt, 1, 1}), std::invalid_argument);
  EXPECT_THROW(fit(data, {std::nullopt, 2, 0}), std::invalid_argument);
  EXPECT_THROW(fit(data, {}).predict(std::vector<double>{}), std::invalid_argument);
}

TEST(Tree, DistributionMatchesLeafCounts) {
  const auto tree = fit(one_feature({{1, 0}, {1, 1}, {1, 1}, {5, 2}}), {});
  const auto d = tree.predict_distribution(std::array{1.0});
  EXPECT_DOUBLE_EQ(d[0], 1.0 / 3);
  EXPECT_DOUBLE_EQ(d[1], 2.0 / 3);
  EXPECT_DOUBLE_EQ(d[2], 0.0);
}

TEST(Tree, ExportImportRoundTrip) {
  testing::Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto data = testing::random_dataset(rng, 30, 5);
    const auto tree = fit(data, {});
    const auto doc = export_tree(tree);
    EXPECT_EQ(import_tree(doc).nodes(), tree.nodes());
    EXPECT_EQ(import_tree(nlohmann::json::parse(doc.dump())).nodes(), tree.nodes());
  }
  const auto doc = export_tree(fit(one_feature({{1, 0}, {2, 1}}), {}));
  EXPECT_EQ(doc["kind"], "internal");
  EXPECT_EQ(doc["feature"], "Max RR");
  EXPECT_EQ(doc["children"][0]["kind"], "leaf");
}

TEST(Tree, ImportRejectsMalformed) {
  EXPECT_THROW(import_tree(nlohmann::json::parse(R"({"kind":"leaf"})")), std::invalid_argument);
  EXPECT_THROW(import_tree(nlohmann::json::parse(R"({"kind":"internal","feature":"Nope","threshold":1,
      "counts":[1,1,0],"children":[]})")),
               std::invalid_argument);
  EXPECT_THROW(Tree::from_nodes({}, 1), std::invalid_argument);
}

}  // namespace
}  // namespace sentinel
