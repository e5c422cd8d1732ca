#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sentinel/metrics.hpp"
#include "sentinel/pri.hpp"
#include "sentinel/store.hpp"
#include "sentinel/trainer.hpp"

namespace sentinel {

struct PipelineOptions {
  ParamGrid grid = ParamGrid::standard();
  TrainMode mode = TrainMode::InclusivePrefix;
  EvalScheme scheme = EvalScheme::IterativeScores;
  unsigned threads = 0;
};

/// Labeling used for a training mode: inclusive runs use
/// whole-journal labels, causal runs use prefix-only labels.
HistoryMode history_mode_for(TrainMode mode);

/// Everything one training run produced.
struct RunManifest {
  std::uint64_t revision = 0;
  std::size_t rows = 0;
  TrainMode mode = TrainMode::InclusivePrefix;
  EvalScheme scheme = EvalScheme::IterativeScores;
  ParamGrid grid;
  std::vector<int> labels;
  std::vector<GridResult> results;  // ranked
  Hyperparams best;
  ConfusionMatrix confusion;
  MetricsReport metrics;
  std::array<ClassRoc, kNumClasses> rocs;
  nlohmann::json tree;  // final fit on the whole journal with `best`
  std::string generated_at;
};

/// label -> grid search -> best-hp iterative run -> metrics -> ROC -> final
/// tree. Throws std::invalid_argument on an empty journal.
RunManifest run_pipeline(const JournalSnapshot& snapshot, const PipelineOptions& options);

/// run_pipeline on the store's current snapshot, then write_manifest into
/// store.manifest_dir(). Nothing is written if the run fails.
RunManifest run_pipeline(JournalStore& store, const PipelineOptions& options);

/// Manifest document. Only `generated_at` varies between runs on the same input.
nlohmann::json to_json(const RunManifest& manifest);

/// Writes manifest.json plus grid.csv, grid.json, metrics.json, roc.csv and
/// tree.json into `dir`.
void write_manifest(const RunManifest& manifest, const std::filesystem::path& dir);

/// Reads `dir`/manifest.json, or nullopt when absent.
std::optional<nlohmann::json> load_manifest(const std::filesystem::path& dir);

}  // namespace sentinel
