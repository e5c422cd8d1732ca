#include <gtest/gtest.h>

#include <fstream>

#include "generators.hpp"
#include "sentinel/pipeline.hpp"
#include "temp_dir.hpp"

namespace sentinel {
namespace {

JournalSnapshot snapshot_of(std::vector<EnrichedRecord> rows) {
  JournalSnapshot snap;
  snap.revision = rows.size();
  snap.rows = std::make_shared<const std::vector<EnrichedRecord>>(std::move(rows));
  return snap;
}

nlohmann::json without_timestamp(nlohmann::json doc) {
  doc.erase("generated_at");
  return doc;
}

TEST(Pipeline, LabelModeFollowsTrainMode) {
  EXPECT_EQ(history_mode_for(TrainMode::InclusivePrefix), HistoryMode::FullHistory);
  EXPECT_EQ(history_mode_for(TrainMode::CausalPrefix), HistoryMode::CausalPrefix);
}

TEST(Pipeline, SyntheticJournalEndToEnd) {
  const auto records = testing::synthetic_learnable_journal();
  const auto snap = snapshot_of(testing::labeled(records, HistoryMode::CausalPrefix));
  PipelineOptions opts;
  opts.threads = 2;
  const auto run = run_pipeline(snap, opts);
  EXPECT_EQ(run.rows, records.size());
  EXPECT_EQ(run.labels, label_pri(enrich(records), HistoryMode::FullHistory));
  ASSERT_EQ(run.results.size(), 27u);
  EXPECT_EQ(run.best, run.results.front().hp);
  EXPECT_EQ(run.metrics.accuracy, run.results.front().accuracy);
  EXPECT_EQ(run.confusion.total(), records.size());

  const auto doc = to_json(run);
  for (const char* key : {"revision", "rows", "train_mode", "label_mode", "eval_scheme", "grid", "labels",
                          "accuracy_table", "best", "best_accuracy", "best_predictions", "confusion",
                          "metrics", "roc", "tree", "generated_at"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_NO_THROW(import_tree(doc["tree"]));
}

TEST(Pipeline, DeterministicApartFromTimestamp) {
  const auto snap = snapshot_of(testing::labeled(testing::synthetic_learnable_journal(), HistoryMode::CausalPrefix));
  PipelineOptions opts;
  opts.threads = 1;
  const auto a = without_timestamp(to_json(run_pipeline(snap, opts)));
  opts.threads = 3;
  const auto b = without_timestamp(to_json(run_pipeline(snap, opts)));
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Pipeline, EmptyJournalThrows) {
  EXPECT_THROW(run_pipeline(snapshot_of({}), {}), std::invalid_argument);
}

TEST(Pipeline, StoreRunWritesArtifacts) {
  testing::TempDir dir;
  JournalStore store(dir.path());
  store.ingest(testing::synthetic_learnable_journal());
  PipelineOptions opts;
  opts.mode = TrainMode::CausalPrefix;
  opts.scheme = EvalScheme::HoldoutSplit;
  opts.grid = ParamGrid::from_json(
      nlohmann::json::parse(R"({"max_depth":[3,5],"min_samples_split":[2],"min_samples_leaf":[1]})"));
  const auto run = run_pipeline(store, opts);
  for (const char* name : {"manifest.json", "grid.csv", "grid.json", "metrics.json", "roc.csv", "tree.json"}) {
    EXPECT_TRUE(std::filesystem::exists(store.manifest_dir() / name)) << name;
  }
  const auto loaded = load_manifest(store.manifest_dir());
  ASSERT_TRUE(loaded);
  EXPECT_EQ((*loaded)["train_mode"], "causal");
  EXPECT_EQ((*loaded)["label_mode"], "causal");
  EXPECT_EQ(without_timestamp(*loaded), without_timestamp(to_json(run)));

  std::ifstream csv(store.manifest_dir() / "grid.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "max_depth,min_samples_split,min_samples_leaf,accuracy");
  EXPECT_FALSE(load_manifest(dir.path() / "nowhere"));
}

}  // namespace
}  // namespace sentinel
