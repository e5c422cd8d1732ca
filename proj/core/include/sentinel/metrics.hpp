#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sentinel/cart.hpp"
#include "sentinel/trainer.hpp"

namespace sentinel {

/// counts[true][predicted] over classes {0,1,2}.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> counts{};

  std::size_t total() const;
  std::size_t trace() const;
  std::size_t true_count(std::size_t cls) const;       // row sum
  std::size_t predicted_count(std::size_t cls) const;  // column sum

  bool operator==(const ConfusionMatrix&) const = default;
};

/// Throws std::invalid_argument on a length mismatch, empty input, or a class
/// outside {0,1,2}.
ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct MetricsReport {
  double accuracy = 0.0;
  std::array<ClassScores, kNumClasses> per_class{};
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  /// Classes with nonzero support; the macro means run over these only.
  std::vector<int> macro_classes;
};

/// Precision and recall are 0 when their denominator is 0; F1 is 0 when
/// precision + recall is 0. Throws std::invalid_argument on an empty matrix.
MetricsReport report(const ConfusionMatrix& cm);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;

  bool operator==(const RocPoint&) const = default;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

double trapezoid_area(std::span<const RocPoint> points);

/// Thresholds sweep the distinct scores in descending order; equal scores
/// move together as one step. Starts at (0,0), ends at (1,1). Labels are
/// 0/1. Throws std::invalid_argument ("ROC undefined") when only one class is
/// present, or on a length mismatch.
RocCurve roc_binary(std::span<const double> scores, std::span<const int> labels);

enum class EvalScheme {
  IterativeScores,  // leaf distributions collected during the iterative run
  HoldoutSplit,     // fit on the first 75% of rows, score the last 25%
};

struct ClassRoc {
  int cls = 0;
  std::optional<RocCurve> curve;  // nullopt when undefined for this class
  std::string note;
};

/// Rows used for training under HoldoutSplit: floor(3n/4), at least 1.
std::size_t holdout_train_size(std::size_t n);

/// One-vs-rest ROC per class in {0,1,2}. Class k is positive where the label
/// equals k, scored by component k of the predicted class distribution.
std::array<ClassRoc, kNumClasses> one_vs_rest_rocs(const Dataset& data, const Hyperparams& hp,
                                                   EvalScheme scheme,
                                                   TrainMode mode = TrainMode::InclusivePrefix);

/// Per-class curves from already-collected labels and distributions.
std::array<ClassRoc, kNumClasses> one_vs_rest_rocs(std::span<const int> labels,
                                                   std::span<const ClassDistribution> scores);

nlohmann::json to_json(const ConfusionMatrix& cm);
nlohmann::json to_json(const MetricsReport& r);
nlohmann::json to_json(const std::array<ClassRoc, kNumClasses>& rocs);

/// "class,fpr,tpr" rows for every defined curve.
std::string roc_csv(const std::array<ClassRoc, kNumClasses>& rocs);

/// Plain-text metrics table for terminals.
std::string render_report(const MetricsReport& r, const ConfusionMatrix& cm);

std::string to_string(EvalScheme scheme);
EvalScheme parse_eval_scheme(const std::string& text);

}  // namespace sentinel
