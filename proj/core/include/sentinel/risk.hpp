#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sentinel/cart.hpp"
#include "sentinel/journal.hpp"
#include "sentinel/pri.hpp"

namespace sentinel {

/// A trade as submitted for appending (the index is assigned by the store).
struct TradeInput {
  double max_rr = 0.0;
  double rs = 0.0;
  Outcome outcome = Outcome::Loss;
  Session session = Session::NewYork;
};

/// Invalid request field. `field()` names the offending input.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// The record `input` would become if appended to `journal`, with its PRI
/// computed from rows before it only. Reads nothing beyond the journal's
/// last row.
EnrichedRecord extend_causal(std::span<const EnrichedRecord> journal, const TradeInput& input,
                             double start_balance = 0.0);

struct RiskProposal {
  double max_rr = 0.0;
  Session session = Session::NewYork;
};

/// PRI for one hypothetical outcome of the proposed trade.
struct OutcomeAssessment {
  int pri = 0;
  int streak = 0;
  RuleHits hits;
  std::optional<int> model_class;
};

inline constexpr int kDefaultAlertThreshold = 1;

struct RiskAlert {
  RiskProposal proposal;
  OutcomeAssessment if_win;
  OutcomeAssessment if_loss;
  int worst_case_pri = 0;
  std::vector<RiskRule> fired_rules;  // union over both outcomes, rule order
  int threshold = kDefaultAlertThreshold;
  bool alert = false;
  std::string model_note;
};

/// Evaluates the PRI rules for the next trade under both possible outcomes.
/// When `model` is given, also reports its predicted class for each
/// hypothetical feature vector. Never modifies the journal.
RiskAlert check_risk(std::span<const EnrichedRecord> journal, const RiskProposal& proposal,
                     int threshold = kDefaultAlertThreshold, const Tree* model = nullptr);

nlohmann::json to_json(const RiskAlert& alert);
nlohmann::json to_json(const EnrichedRecord& record);

/// Tree fitted on the stored (causal) labels of one journal revision. A new
/// revision or a different hp invalidates it.
class ModelCache {
 public:
  struct Entry {
    std::shared_ptr<const Tree> tree;  // null when no model could be fit
    std::string note;
  };

  Entry get(std::uint64_t revision, std::span<const EnrichedRecord> journal, const Hyperparams& hp);

 private:
  std::mutex mutex_;
  std::optional<std::uint64_t> revision_;
  Hyperparams hp_;
  Entry entry_;
};

}  // namespace sentinel
