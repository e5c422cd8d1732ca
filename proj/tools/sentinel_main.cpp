#include <CLI11.hpp>
#include <httplib.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "http_server.hpp"
#include "sentinel/api.hpp"
#include "sentinel/journal.hpp"
#include "sentinel/metrics.hpp"
#include "sentinel/pipeline.hpp"
#include "sentinel/pri.hpp"
#include "sentinel/risk.hpp"
#include "sentinel/store.hpp"

namespace {

using namespace sentinel;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void print_alert(const RiskAlert& alert) {
  std::cout << "proposal    max_rr=" << format_decimal(alert.proposal.max_rr)
            << " session=" << to_string(alert.proposal.session) << "\n";
  std::cout << "if win      PRI " << alert.if_win.pri << " (streak " << alert.if_win.streak << ")\n";
  std::cout << "if loss     PRI " << alert.if_loss.pri << " (streak " << alert.if_loss.streak << ")\n";
  std::cout << "worst case  PRI " << alert.worst_case_pri << "\n";
  std::cout << "rules      ";
  if (alert.fired_rules.empty()) std::cout << " none";
  for (auto r : alert.fired_rules) std::cout << ' ' << rule_id(r);
  std::cout << "\n" << (alert.alert ? "ALERT" : "ok") << " (threshold " << alert.threshold << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trading-journal psychological risk engine"};
  app.require_subcommand(1);

  std::string store_dir = "sentinel-data";
  app.add_option("--store", store_dir, "Store directory (journal.csv + manifest/)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Load a raw journal CSV into an empty store");
  std::string ingest_path;
  bool lenient = false;
  double start_balance = 0.0;
  ingest->add_option("csv", ingest_path, "Journal CSV with Max RR, Rs, BE, Session columns")->required();
  ingest->add_flag("--lenient", lenient, "Map unknown sessions to New York instead of failing");
  ingest->add_option("--start-balance", start_balance, "Starting value of the hypothetical balance");

  // append
  auto* append = app.add_subcommand("append", "Append one completed trade");
  double append_rr = 0.0, append_rs = 0.0;
  std::string append_outcome, append_session;
  append->add_option("--max-rr", append_rr)->required();
  append->add_option("--rs", append_rs)->required();
  append->add_option("--outcome", append_outcome, "W or L")->required()->check(CLI::IsMember({"W", "L"}));
  append->add_option("--session", append_session, "Asian, London or New York")->required();

  // label
  auto* label = app.add_subcommand("label", "Print the cleaned journal with PRI labels");
  std::string label_mode = "causal";
  std::string label_out;
  label->add_option("--mode", label_mode, "full|causal")->check(CLI::IsMember({"full", "causal"}));
  label->add_option("--out", label_out, "Write to a file instead of stdout");

  // train
  auto* train = app.add_subcommand("train", "Grid search, evaluate, and write the run manifest");
  std::string grid_path, train_mode = "inclusive", train_scheme = "iterative";
  unsigned threads = 0;
  train->add_option("--grid", grid_path, "JSON parameter grid (default: 3x3x3 grid)");
  train->add_option("--mode", train_mode, "inclusive|causal")->check(CLI::IsMember({"inclusive", "causal"}));
  train->add_option("--scheme", train_scheme, "iterative|holdout")->check(CLI::IsMember({"iterative", "holdout"}));
  train->add_option("--threads", threads, "Worker threads for the grid (0 = all cores)");

  // eval
  auto* eval = app.add_subcommand("eval", "Show metrics from the last training run");
  std::string eval_scheme;
  bool eval_json = false;
  eval->add_option("--scheme", eval_scheme, "Recompute ROC with iterative|holdout")
      ->check(CLI::IsMember({"iterative", "holdout"}));
  eval->add_flag("--json", eval_json, "Print the metrics JSON");

  // predict
  auto* predict = app.add_subcommand("predict", "Pre-trade risk check for a proposed trade");
  double predict_rr = 0.0;
  std::string predict_session;
  int predict_threshold = kDefaultAlertThreshold;
  bool predict_json = false;
  predict->add_option("--max-rr", predict_rr)->required();
  predict->add_option("--session", predict_session)->required();
  predict->add_option("--threshold", predict_threshold, "Alert when worst-case PRI >= K");
  predict->add_flag("--json", predict_json);

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  int port = 8080;
  std::string host = "127.0.0.1";
  int serve_threshold = kDefaultAlertThreshold;
  std::string static_dir;
  serve->add_option("--port", port);
  serve->add_option("--host", host);
  serve->add_option("--threshold", serve_threshold, "Alert when worst-case PRI >= K");
  serve->add_option("--static", static_dir, "Directory of console assets served at /");

  CLI11_PARSE(app, argc, argv);

  try {
    JournalStore store(store_dir, start_balance);

    if (*ingest) {
      ParseOptions opts;
      opts.mode = lenient ? ParseMode::Lenient : ParseMode::Strict;
      opts.warn = [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; };
      const auto records = parse_journal(read_file(ingest_path), opts);
      const auto snap = store.ingest(records);
      std::cout << "ingested " << snap.rows->size() << " trades into " << store.journal_path().string()
                << " (revision " << snap.revision << ")\n";
    } else if (*append) {
      const TradeInput input{append_rr, append_rs, append_outcome == "W" ? Outcome::Win : Outcome::Loss,
                             parse_session(append_session)};
      const auto record = store.append(input);
      std::cout << to_json(record).dump() << "\n";
    } else if (*label) {
      const auto snap = store.snapshot();
      std::vector<EnrichedRecord> rows(snap.rows->begin(), snap.rows->end());
      apply_pri(rows, label_mode == "full" ? HistoryMode::FullHistory : HistoryMode::CausalPrefix);
      const auto text = write_clean_csv(rows);
      if (label_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream(label_out, std::ios::binary) << text;
      }
    } else if (*train) {
      PipelineOptions opts;
      opts.mode = parse_train_mode(train_mode);
      opts.scheme = parse_eval_scheme(train_scheme);
      opts.threads = threads;
      if (!grid_path.empty()) opts.grid = ParamGrid::from_json(nlohmann::json::parse(read_file(grid_path)));
      const auto manifest = run_pipeline(store, opts);
      std::cout << grid_table_csv(manifest.results) << "\n";
      std::cout << "best: " << to_json(manifest.best).dump() << " accuracy "
                << format_decimal(manifest.results.front().accuracy) << "\n\n";
      std::cout << render_report(manifest.metrics, manifest.confusion);
      std::cout << "\nmanifest written to " << store.manifest_dir().string() << "\n";
    } else if (*eval) {
      const auto manifest = load_manifest(store.manifest_dir());
      if (!manifest) throw std::runtime_error("no manifest in " + store.manifest_dir().string() + "; run train first");
      if (eval_json) {
        std::cout << nlohmann::json{{"metrics", (*manifest)["metrics"]}, {"confusion", (*manifest)["confusion"]},
                                    {"roc", (*manifest)["roc"]}}
                         .dump(2)
                  << "\n";
        return 0;
      }
      const auto labels = (*manifest)["labels"].get<std::vector<int>>();
      const auto predictions = (*manifest)["best_predictions"].get<std::vector<int>>();
      const auto cm = confusion(labels, predictions);
      std::cout << render_report(report(cm), cm) << "\n";

      nlohmann::json rocs = (*manifest)["roc"];
      if (!eval_scheme.empty()) {
        const auto snap = store.snapshot();
        std::vector<EnrichedRecord> rows(snap.rows->begin(), snap.rows->end());
        const auto mode = parse_train_mode((*manifest)["train_mode"].get<std::string>());
        apply_pri(rows, history_mode_for(mode));
        rocs = to_json(one_vs_rest_rocs(to_dataset(rows), hyperparams_from_json((*manifest)["best"]),
                                        parse_eval_scheme(eval_scheme), mode));
      }
      std::cout << "one-vs-rest AUC\n";
      for (const auto& roc : rocs) {
        std::cout << "  class " << roc["class"].get<int>() << "  ";
        if (roc["defined"].get<bool>()) {
          std::cout << format_decimal(roc["auc"].get<double>()) << "\n";
        } else {
          std::cout << "undefined (" << roc["note"].get<std::string>() << ")\n";
        }
      }
    } else if (*predict) {
      Api api(store);
      const RiskProposal proposal{predict_rr, parse_session(predict_session)};
      const auto snap = store.snapshot();
      ModelCache models;
      const auto model = models.get(snap.revision, snap.records(), api.live_hyperparams());
      auto alert = check_risk(snap.records(), proposal, predict_threshold, model.tree.get());
      alert.model_note = model.note;
      if (predict_json) {
        std::cout << to_json(alert).dump(2) << "\n";
      } else {
        print_alert(alert);
        if (model.tree) {
          std::cout << "model       class if win " << *alert.if_win.model_class << ", if loss "
                    << *alert.if_loss.model_class << "\n";
        } else {
          std::cout << "model       " << model.note << "\n";
        }
      }
      return alert.alert ? 2 : 0;
    } else if (*serve) {
      ApiOptions options;
      options.alert_threshold = serve_threshold;
      Api api(store, options);
      auto server = http::make_server(api, static_dir.empty() ? std::nullopt
                                                              : std::optional<std::filesystem::path>(static_dir));
      std::cout << "listening on http://" << host << ":" << port << " (store " << store.dir().string() << ")\n";
      if (!server->listen(host, port)) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
