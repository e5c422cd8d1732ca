#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sentinel/cart.hpp"
#include "sentinel/journal.hpp"

namespace sentinel {

/// Training window used when predicting row i.
///   InclusivePrefix - rows 0..=i (row i is part of its own training set).
///   CausalPrefix    - rows 0..i-1; row 0 gets the cold-start class.
enum class TrainMode { InclusivePrefix, CausalPrefix };

/// Prediction for a row with no training data (the no-risk class).
inline constexpr int kColdStartClass = 0;

/// Features and PRI labels of an enriched journal. Throws
/// std::invalid_argument if a PRI falls outside {0,1,2}.
Dataset to_dataset(std::span<const EnrichedRecord> journal);

struct IterativeRun {
  std::vector<int> predictions;
  /// Leaf class distribution behind each prediction. The cold-start row gets
  /// a point mass on kColdStartClass.
  std::vector<ClassDistribution> distributions;
};

/// Refit a fresh tree for every row on the prefix dictated by `mode` and
/// predict that row.
IterativeRun iterative_run_scored(const Dataset& data, const Hyperparams& hp, TrainMode mode);
std::vector<int> iterative_run(const Dataset& data, const Hyperparams& hp, TrainMode mode);

double accuracy(std::span<const int> truth, std::span<const int> predicted);

/// Candidate values per hyperparameter. An unset max_depth means unlimited.
struct ParamGrid {
  std::vector<std::optional<int>> max_depth;
  std::vector<int> min_samples_split;
  std::vector<int> min_samples_leaf;

  /// {3,5,7} x {2,5,10} x {1,2,4}
  static ParamGrid standard();

  /// Cartesian product ordered by max_depth, then min_samples_split, then
  /// min_samples_leaf, each ascending (unlimited depth sorts last).
  std::vector<Hyperparams> combinations() const;

  /// {"max_depth": [3, null], "min_samples_split": [...], "min_samples_leaf": [...]}
  static ParamGrid from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

struct GridResult {
  Hyperparams hp;
  std::vector<int> predictions;
  double accuracy = 0.0;
};

/// Evaluates every grid combination with iterative_run and returns results
/// ranked by accuracy, descending, ties kept in combination order.
/// `threads` = 0 picks the hardware concurrency. Throws std::invalid_argument
/// on an empty dataset or empty grid.
std::vector<GridResult> grid_search(const Dataset& data, const ParamGrid& grid, TrainMode mode,
                                    unsigned threads = 0);

/// "max_depth,min_samples_split,min_samples_leaf,accuracy" rows in ranked
/// order; unlimited depth is written as "none".
std::string grid_table_csv(std::span<const GridResult> results);
nlohmann::json grid_table_json(std::span<const GridResult> results);

nlohmann::json to_json(const Hyperparams& hp);
Hyperparams hyperparams_from_json(const nlohmann::json& doc);

std::string to_string(TrainMode mode);
TrainMode parse_train_mode(const std::string& text);

}  // namespace sentinel
