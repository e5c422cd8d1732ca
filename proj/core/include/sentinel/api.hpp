#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "sentinel/pipeline.hpp"
#include "sentinel/risk.hpp"
#include "sentinel/store.hpp"

namespace sentinel {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

struct ApiOptions {
  int alert_threshold = kDefaultAlertThreshold;
  PipelineOptions training;
  /// Used for the live model until a manifest names a winner.
  Hyperparams default_hp{5, 2, 1};
};

/// JSON request handling behind the HTTP server. Every response body carries
/// the journal `revision`. Status codes: 400 validation (with `field`), 404
/// unknown route or no manifest yet, 409 revision conflict, 500 otherwise.
///
///   GET  /api/health        GET /api/journal      POST /api/trades
///   POST /api/check-risk    GET /api/tree         GET  /api/metrics
///   GET  /api/roc           GET /api/grid         POST /api/train
///
/// Thread-safe. Training works on a snapshot, so appends proceed while a
/// grid search runs.
class Api {
 public:
  explicit Api(JournalStore& store, ApiOptions options = {});

  ApiResponse handle(std::string_view method, std::string_view path, std::string_view body = {});

  ApiResponse health();
  ApiResponse journal();
  ApiResponse append_trade(const nlohmann::json& request);
  ApiResponse check_risk(const nlohmann::json& request);
  ApiResponse tree();
  ApiResponse metrics();
  ApiResponse roc();
  ApiResponse grid();
  ApiResponse train(const nlohmann::json& request);

  /// Hyperparameters of the live model: the manifest winner, else the default.
  Hyperparams live_hyperparams() const;

 private:
  std::shared_ptr<const nlohmann::json> manifest() const;
  ApiResponse from_manifest(const char* key);
  ApiResponse with_revision(int status, nlohmann::json body) const;

  JournalStore& store_;
  ApiOptions options_;
  ModelCache models_;
  std::mutex train_mutex_;
  mutable std::shared_mutex manifest_mutex_;
  std::shared_ptr<const nlohmann::json> manifest_;
};

/// Parses {"max_rr", "rs", "outcome": "W"|"L", "session"}. Throws ValidationError.
TradeInput parse_trade_request(const nlohmann::json& request);

/// Parses {"max_rr", "session"}. Throws ValidationError.
RiskProposal parse_risk_request(const nlohmann::json& request);

}  // namespace sentinel
