#include "sentinel/risk.hpp"

#include <algorithm>

#include "sentinel/trainer.hpp"

namespace sentinel {

EnrichedRecord extend_causal(std::span<const EnrichedRecord> journal, const TradeInput& input,
                             double start_balance) {
  const std::size_t index = journal.size();
  EnrichedRecord next;
  next.base = TradeRecord{index, input.max_rr, input.rs, input.outcome, input.session};
  next.outcome_signed = sign_of(input.outcome);

  std::optional<double> previous_max_rr;
  if (journal.empty()) {
    next.streak = next.outcome_signed;
    next.balance = start_balance + input.rs;
  } else {
    const auto& last = journal.back();
    next.streak = last.outcome_signed == next.outcome_signed ? last.streak + next.outcome_signed
                                                             : next.outcome_signed;
    next.balance = last.balance + input.rs;
    previous_max_rr = last.base.max_rr;
  }
  const auto flags = one_hot_session(input.session);
  next.session_asian = flags.asian;
  next.session_london = flags.london;

  const Session worst = max_loss_session(journal, index);
  next.pri = evaluate_rules(index, next.streak, previous_max_rr, input.session, worst).pri();
  return next;
}

RiskAlert check_risk(std::span<const EnrichedRecord> journal, const RiskProposal& proposal, int threshold,
                     const Tree* model) {
  RiskAlert alert;
  alert.proposal = proposal;
  alert.threshold = threshold;

  const Session worst = max_loss_session(journal, journal.size());
  const std::optional<double> previous_max_rr =
      journal.empty() ? std::nullopt : std::optional(journal.back().base.max_rr);

  auto assess = [&](Outcome outcome) {
    const auto row = extend_causal(journal, {proposal.max_rr, 0.0, outcome, proposal.session});
    OutcomeAssessment a;
    a.streak = row.streak;
    a.hits = evaluate_rules(journal.size(), row.streak, previous_max_rr, proposal.session, worst);
    a.pri = a.hits.pri();
    if (model) a.model_class = model->predict(features(row));
    return a;
  };
  alert.if_win = assess(Outcome::Win);
  alert.if_loss = assess(Outcome::Loss);
  alert.worst_case_pri = std::max(alert.if_win.pri, alert.if_loss.pri);

  for (RiskRule rule : kRiskRules) {
    const auto w = alert.if_win.hits.fired();
    const auto l = alert.if_loss.hits.fired();
    if (std::find(w.begin(), w.end(), rule) != w.end() || std::find(l.begin(), l.end(), rule) != l.end()) {
      alert.fired_rules.push_back(rule);
    }
  }
  alert.alert = alert.worst_case_pri >= threshold;
  return alert;
}

namespace {

nlohmann::json rules_json(const std::vector<RiskRule>& rules) {
  auto out = nlohmann::json::array();
  for (RiskRule r : rules) out.push_back(rule_id(r));
  return out;
}

nlohmann::json to_json(const OutcomeAssessment& a) {
  return {{"pri", a.pri},
          {"streak", a.streak},
          {"fired_rules", rules_json(a.hits.fired())},
          {"model_class", a.model_class ? nlohmann::json(*a.model_class) : nlohmann::json(nullptr)}};
}

}  // namespace

nlohmann::json to_json(const RiskAlert& alert) {
  return {{"trade_context",
           {{"max_rr", alert.proposal.max_rr}, {"session", std::string(to_string(alert.proposal.session))}}},
          {"worst_case_pri", alert.worst_case_pri},
          {"per_outcome_pri", {{"if_win", alert.if_win.pri}, {"if_loss", alert.if_loss.pri}}},
          {"outcomes", {{"if_win", to_json(alert.if_win)}, {"if_loss", to_json(alert.if_loss)}}},
          {"fired_rules", rules_json(alert.fired_rules)},
          {"threshold", alert.threshold},
          {"alert", alert.alert},
          {"model_note", alert.model_note}};
}

nlohmann::json to_json(const EnrichedRecord& r) {
  return {{"index", r.base.index},
          {"max_rr", r.base.max_rr},
          {"rs", r.base.rs},
          {"outcome", std::string(to_string(r.base.outcome))},
          {"session", std::string(to_string(r.base.session))},
          {"outcome_signed", r.outcome_signed},
          {"streak", r.streak},
          {"balance", r.balance},
          {"session_asian", r.session_asian},
          {"session_london", r.session_london},
          {"pri", r.pri}};
}

ModelCache::Entry ModelCache::get(std::uint64_t revision, std::span<const EnrichedRecord> journal,
                                  const Hyperparams& hp) {
  std::lock_guard lock(mutex_);
  if (revision_ == revision && hp_ == hp) return entry_;
  Entry entry;
  if (journal.empty()) {
    entry.note = "no trades recorded yet; model unavailable";
  } else {
    try {
      entry.tree = std::make_shared<const Tree>(fit(to_dataset(journal), hp));
    } catch (const std::invalid_argument& e) {
      entry.note = std::string("model unavailable: ") + e.what();
    }
  }
  revision_ = revision;
  hp_ = hp;
  entry_ = entry;
  return entry;
}

}  // namespace sentinel
