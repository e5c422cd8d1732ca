#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sentinel/journal.hpp"

namespace sentinel {

/// Where the loss-session rule takes its loss counts from.
///   FullHistory  - the whole journal, including rows after the one labeled.
///   CausalPrefix - only rows strictly before the one labeled.
enum class HistoryMode { FullHistory, CausalPrefix };

/// Streak length at or above which the streak rule fires.
inline constexpr int kStreakThreshold = 3;

enum class RiskRule { LongStreak, OversizedPriorRR, WorstLossSession };

inline constexpr std::array<RiskRule, 3> kRiskRules = {
    RiskRule::LongStreak, RiskRule::OversizedPriorRR, RiskRule::WorstLossSession};

/// Stable identifiers used in JSON ("long_streak", "prior_rr_above_22_5",
/// "worst_loss_session").
std::string_view rule_id(RiskRule rule);

/// Which of the three additive rules fired for one row.
struct RuleHits {
  bool long_streak = false;
  bool oversized_prior_rr = false;
  bool worst_loss_session = false;

  int pri() const { return int{long_streak} + int{oversized_prior_rr} + int{worst_loss_session}; }
  std::vector<RiskRule> fired() const;
};

/// Rule evaluation for a row at `index`. `previous_max_rr` is the Max RR of
/// row index-1 (ignored when index < 3).
RuleHits evaluate_rules(std::size_t index, int streak, std::optional<double> previous_max_rr,
                        Session session, Session max_loss);

/// Loss counts per session, indexed by Session.
using SessionLosses = std::array<std::size_t, 3>;

SessionLosses count_losses(std::span<const EnrichedRecord> journal, std::optional<std::size_t> upto = {});

/// First session with the maximal count, in Asian < London < NewYork order.
Session argmax_session(const SessionLosses& losses);

/// Session with the most Loss outcomes among rows with index < `upto` (all
/// rows when unset). All-zero counts yield Asian.
Session max_loss_session(std::span<const EnrichedRecord> journal, std::optional<std::size_t> upto = {});

/// PRI per row. Requires streaks to be populated. Throws std::invalid_argument
/// ("nothing to label") on an empty journal.
std::vector<int> label_pri(std::span<const EnrichedRecord> journal, HistoryMode mode);

/// label_pri, writing the result into each record's `pri`.
void apply_pri(std::span<EnrichedRecord> journal, HistoryMode mode);

inline constexpr std::array<int, 3> kPriClasses = {0, 1, 2};

/// One-hot rows over `classes`. A label outside `classes` throws
/// std::out_of_range naming the row and the value.
std::vector<std::vector<int>> binarize_labels(std::span<const int> labels,
                                              std::span<const int> classes = kPriClasses);

}  // namespace sentinel
