#include "sentinel/pri.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace sentinel {

namespace {

constexpr std::size_t session_slot(Session s) { return static_cast<std::size_t>(s); }

}  // namespace

std::string_view rule_id(RiskRule rule) {
  switch (rule) {
    case RiskRule::LongStreak: return "long_streak";
    case RiskRule::OversizedPriorRR: return "prior_rr_above_22_5";
    case RiskRule::WorstLossSession: return "worst_loss_session";
  }
  return "unknown";
}

std::vector<RiskRule> RuleHits::fired() const {
  std::vector<RiskRule> out;
  if (long_streak) out.push_back(RiskRule::LongStreak);
  if (oversized_prior_rr) out.push_back(RiskRule::OversizedPriorRR);
  if (worst_loss_session) out.push_back(RiskRule::WorstLossSession);
  return out;
}

RuleHits evaluate_rules(std::size_t index, int streak, std::optional<double> previous_max_rr,
                        Session session, Session max_loss) {
  RuleHits hits;
  hits.long_streak = std::abs(streak) >= kStreakThreshold;
  // Kept in the divided form so boundary values (22.5) round the same way.
  hits.oversized_prior_rr = index >= 3 && previous_max_rr && (*previous_max_rr / 3 > 7.5);
  hits.worst_loss_session = session == max_loss;
  return hits;
}

SessionLosses count_losses(std::span<const EnrichedRecord> journal, std::optional<std::size_t> upto) {
  SessionLosses losses{};
  const std::size_t end = upto ? std::min(*upto, journal.size()) : journal.size();
  for (std::size_t i = 0; i < end; ++i) {
    if (journal[i].base.outcome == Outcome::Loss) ++losses[session_slot(journal[i].base.session)];
  }
  return losses;
}

Session argmax_session(const SessionLosses& losses) {
  Session best = kSessions.front();
  for (Session s : kSessions) {
    if (losses[session_slot(s)] > losses[session_slot(best)]) best = s;
  }
  return best;
}

Session max_loss_session(std::span<const EnrichedRecord> journal, std::optional<std::size_t> upto) {
  return argmax_session(count_losses(journal, upto));
}

std::vector<int> label_pri(std::span<const EnrichedRecord> journal, HistoryMode mode) {
  if (journal.empty()) throw std::invalid_argument("nothing to label");

  std::vector<int> labels;
  labels.reserve(journal.size());
  const Session whole = max_loss_session(journal);
  SessionLosses running{};
  for (std::size_t i = 0; i < journal.size(); ++i) {
    const auto& row = journal[i];
    const Session worst = mode == HistoryMode::FullHistory ? whole : argmax_session(running);
    const std::optional<double> prev = i > 0 ? std::optional(journal[i - 1].base.max_rr) : std::nullopt;
    labels.push_back(evaluate_rules(i, row.streak, prev, row.base.session, worst).pri());
    if (row.base.outcome == Outcome::Loss) ++running[session_slot(row.base.session)];
  }
  return labels;
}

void apply_pri(std::span<EnrichedRecord> journal, HistoryMode mode) {
  const auto labels = label_pri(journal, mode);
  for (std::size_t i = 0; i < journal.size(); ++i) journal[i].pri = labels[i];
}

std::vector<std::vector<int>> binarize_labels(std::span<const int> labels, std::span<const int> classes) {
  std::vector<std::vector<int>> rows;
  rows.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = std::find(classes.begin(), classes.end(), labels[i]);
    if (it == classes.end()) {
      throw std::out_of_range("row " + std::to_string(i) + ": label " + std::to_string(labels[i]) +
                              " is not one of the binarization classes");
    }
    std::vector<int> row(classes.size(), 0);
    row[static_cast<std::size_t>(it - classes.begin())] = 1;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace sentinel
