#include "sentinel/api.hpp"

#include <cmath>
#include <exception>

namespace sentinel {

namespace {

double number_field(const nlohmann::json& request, const char* field) {
  if (!request.contains(field)) throw ValidationError(field, "required");
  const auto& v = request.at(field);
  if (!v.is_number()) throw ValidationError(field, "must be a number");
  const double value = v.get<double>();
  if (!std::isfinite(value)) throw ValidationError(field, "must be finite");
  return value;
}

Session session_field(const nlohmann::json& request) {
  if (!request.contains("session") || !request.at("session").is_string()) {
    throw ValidationError("session", "required string (Asian, London, New York)");
  }
  try {
    return parse_session(request.at("session").get<std::string>());
  } catch (const JournalError& e) {
    throw ValidationError("session", e.what());
  }
}

ApiResponse error(int status, const std::string& message, const std::string& field = {}) {
  nlohmann::json body = {{"error", message}};
  if (!field.empty()) body["field"] = field;
  return {status, std::move(body)};
}

nlohmann::json parse_body(std::string_view body) {
  if (body.empty()) return nlohmann::json::object();
  auto doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ValidationError("body", "must be a JSON object");
  return doc;
}

}  // namespace

TradeInput parse_trade_request(const nlohmann::json& request) {
  TradeInput input;
  input.max_rr = number_field(request, "max_rr");
  input.rs = number_field(request, "rs");
  if (!request.contains("outcome") || !request.at("outcome").is_string()) {
    throw ValidationError("outcome", "required string W or L");
  }
  const auto outcome = request.at("outcome").get<std::string>();
  if (outcome == "W") {
    input.outcome = Outcome::Win;
  } else if (outcome == "L") {
    input.outcome = Outcome::Loss;
  } else {
    throw ValidationError("outcome", "must be W or L");
  }
  input.session = session_field(request);
  validate(input);
  return input;
}

RiskProposal parse_risk_request(const nlohmann::json& request) {
  RiskProposal proposal;
  proposal.max_rr = number_field(request, "max_rr");
  if (proposal.max_rr < 0) throw ValidationError("max_rr", "must be non-negative");
  proposal.session = session_field(request);
  return proposal;
}

Api::Api(JournalStore& store, ApiOptions options) : store_(store), options_(std::move(options)) {
  if (auto doc = load_manifest(store_.manifest_dir())) {
    manifest_ = std::make_shared<const nlohmann::json>(std::move(*doc));
  }
}

std::shared_ptr<const nlohmann::json> Api::manifest() const {
  std::shared_lock lock(manifest_mutex_);
  return manifest_;
}

Hyperparams Api::live_hyperparams() const {
  if (const auto m = manifest(); m && m->contains("best")) {
    try {
      return hyperparams_from_json(m->at("best"));
    } catch (const std::invalid_argument&) {
    }
  }
  return options_.default_hp;
}

ApiResponse Api::with_revision(int status, nlohmann::json body) const {
  body["revision"] = store_.revision();
  return {status, std::move(body)};
}

ApiResponse Api::handle(std::string_view method, std::string_view path, std::string_view body) {
  ApiResponse response;
  try {
    if (method == "GET" && path == "/api/health") {
      response = health();
    } else if (method == "GET" && path == "/api/journal") {
      response = journal();
    } else if (method == "POST" && path == "/api/trades") {
      response = append_trade(parse_body(body));
    } else if (method == "POST" && path == "/api/check-risk") {
      response = check_risk(parse_body(body));
    } else if (method == "GET" && path == "/api/tree") {
      response = tree();
    } else if (method == "GET" && path == "/api/metrics") {
      response = metrics();
    } else if (method == "GET" && path == "/api/roc") {
      response = roc();
    } else if (method == "GET" && path == "/api/grid") {
      response = grid();
    } else if (method == "POST" && path == "/api/train") {
      response = train(parse_body(body));
    } else {
      response = error(404, "no route for " + std::string(method) + " " + std::string(path));
    }
  } catch (const ValidationError& e) {
    response = error(400, e.what(), e.field());
  } catch (const RevisionConflict& e) {
    response = error(409, e.what());
  } catch (const std::exception& e) {
    response = error(500, e.what());
  }
  if (response.body.is_object() && !response.body.contains("revision")) {
    response.body["revision"] = store_.revision();
  }
  return response;
}

ApiResponse Api::health() {
  const auto m = manifest();
  return with_revision(200, {{"status", "ok"},
                             {"manifest_revision", m ? m->value("revision", nlohmann::json(nullptr))
                                                     : nlohmann::json(nullptr)}});
}

ApiResponse Api::journal() {
  const auto snap = store_.snapshot();
  auto rows = nlohmann::json::array();
  for (const auto& r : snap.records()) rows.push_back(to_json(r));
  return {200, {{"revision", snap.revision}, {"rows", rows}}};
}

ApiResponse Api::append_trade(const nlohmann::json& request) {
  const TradeInput input = parse_trade_request(request);
  std::optional<std::uint64_t> expected;
  if (request.contains("expected_revision")) {
    const auto& v = request.at("expected_revision");
    if (!v.is_number_unsigned()) throw ValidationError("expected_revision", "must be a non-negative integer");
    expected = v.get<std::uint64_t>();
  }
  const auto record = store_.append(input, expected);
  return with_revision(201, {{"record", to_json(record)}});
}

ApiResponse Api::check_risk(const nlohmann::json& request) {
  const RiskProposal proposal = parse_risk_request(request);
  int threshold = options_.alert_threshold;
  if (request.contains("threshold")) {
    const auto& v = request.at("threshold");
    if (!v.is_number_integer()) throw ValidationError("threshold", "must be an integer");
    threshold = v.get<int>();
  }
  const auto snap = store_.snapshot();
  const Hyperparams hp = live_hyperparams();
  const auto model = models_.get(snap.revision, snap.records(), hp);
  auto alert = sentinel::check_risk(snap.records(), proposal, threshold, model.tree.get());
  alert.model_note = model.note;

  auto body = to_json(alert);
  body["model_hyperparams"] = to_json(hp);
  body["revision"] = snap.revision;
  return {200, std::move(body)};
}

ApiResponse Api::from_manifest(const char* key) {
  const auto m = manifest();
  if (!m) return error(404, "no trained model yet; run training first");
  return with_revision(200, {{key, m->at(key)}, {"manifest_revision", m->at("revision")}});
}

ApiResponse Api::tree() { return from_manifest("tree"); }

ApiResponse Api::metrics() {
  const auto m = manifest();
  if (!m) return error(404, "no trained model yet; run training first");
  return with_revision(200, {{"metrics", m->at("metrics")},
                             {"confusion", m->at("confusion")},
                             {"manifest_revision", m->at("revision")}});
}

ApiResponse Api::roc() { return from_manifest("roc"); }

ApiResponse Api::grid() {
  const auto m = manifest();
  if (!m) return error(404, "no trained model yet; run training first");
  return with_revision(200, {{"accuracy_table", m->at("accuracy_table")},
                             {"best", m->at("best")},
                             {"manifest_revision", m->at("revision")}});
}

ApiResponse Api::train(const nlohmann::json& request) {
  PipelineOptions opts = options_.training;
  try {
    if (request.contains("mode")) opts.mode = parse_train_mode(request.at("mode").get<std::string>());
    if (request.contains("scheme")) opts.scheme = parse_eval_scheme(request.at("scheme").get<std::string>());
    if (request.contains("grid")) opts.grid = ParamGrid::from_json(request.at("grid"));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("body", e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError("body", e.what());
  }

  std::lock_guard lock(train_mutex_);
  const auto snap = store_.snapshot();
  if (snap.empty()) throw ValidationError("journal", "journal is empty; record trades before training");
  const auto result = run_pipeline(snap, opts);
  write_manifest(result, store_.manifest_dir());
  auto doc = std::make_shared<const nlohmann::json>(to_json(result));
  {
    std::unique_lock m(manifest_mutex_);
    manifest_ = doc;
  }
  return with_revision(200, {{"best", (*doc)["best"]},
                             {"best_accuracy", (*doc)["best_accuracy"]},
                             {"manifest_revision", result.revision}});
}

}  // namespace sentinel
