#include "sentinel/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sentinel {

namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  const fs::path temp = path.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError("cannot open " + temp.string() + " for writing");
    out << content;
    if (!out) throw StorageError("write to " + temp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(temp, path, ec);
  if (ec) throw StorageError("cannot replace " + path.string());
}

std::string history_name(HistoryMode m) { return m == HistoryMode::FullHistory ? "full" : "causal"; }

}  // namespace

HistoryMode history_mode_for(TrainMode mode) {
  return mode == TrainMode::InclusivePrefix ? HistoryMode::FullHistory : HistoryMode::CausalPrefix;
}

RunManifest run_pipeline(const JournalSnapshot& snapshot, const PipelineOptions& options) {
  if (snapshot.empty()) throw std::invalid_argument("journal is empty; record trades before training");

  std::vector<EnrichedRecord> rows(snapshot.rows->begin(), snapshot.rows->end());
  apply_pri(rows, history_mode_for(options.mode));
  const Dataset data = to_dataset(rows);

  RunManifest m;
  m.revision = snapshot.revision;
  m.rows = rows.size();
  m.mode = options.mode;
  m.scheme = options.scheme;
  m.grid = options.grid;
  m.labels.assign(data.labels().begin(), data.labels().end());
  m.results = grid_search(data, options.grid, options.mode, options.threads);
  m.best = m.results.front().hp;

  const auto run = iterative_run_scored(data, m.best, options.mode);
  m.confusion = confusion(data.labels(), run.predictions);
  m.metrics = report(m.confusion);
  m.rocs = options.scheme == EvalScheme::IterativeScores
               ? one_vs_rest_rocs(data.labels(), run.distributions)
               : one_vs_rest_rocs(data, m.best, EvalScheme::HoldoutSplit, options.mode);
  m.tree = export_tree(fit(data, m.best));
  m.generated_at = utc_timestamp();
  return m;
}

RunManifest run_pipeline(JournalStore& store, const PipelineOptions& options) {
  auto manifest = run_pipeline(store.snapshot(), options);
  write_manifest(manifest, store.manifest_dir());
  return manifest;
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"revision", m.revision},
          {"rows", m.rows},
          {"train_mode", to_string(m.mode)},
          {"label_mode", history_name(history_mode_for(m.mode))},
          {"eval_scheme", to_string(m.scheme)},
          {"grid", m.grid.to_json()},
          {"labels", m.labels},
          {"accuracy_table", grid_table_json(m.results)},
          {"best", to_json(m.best)},
          {"best_accuracy", m.results.empty() ? 0.0 : m.results.front().accuracy},
          {"best_predictions", m.results.empty() ? std::vector<int>{} : m.results.front().predictions},
          {"confusion", to_json(m.confusion)},
          {"metrics", to_json(m.metrics)},
          {"roc", to_json(m.rocs)},
          {"tree", m.tree},
          {"generated_at", m.generated_at}};
}

void write_manifest(const RunManifest& m, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw StorageError("cannot create " + dir.string() + ": " + ec.message());

  nlohmann::json metrics = {{"metrics", to_json(m.metrics)}, {"confusion", to_json(m.confusion)}};
  write_file(dir / "grid.csv", grid_table_csv(m.results));
  write_file(dir / "grid.json", grid_table_json(m.results).dump(2) + "\n");
  write_file(dir / "metrics.json", metrics.dump(2) + "\n");
  write_file(dir / "roc.csv", roc_csv(m.rocs));
  write_file(dir / "tree.json", m.tree.dump(2) + "\n");
  // Written last: its presence marks a complete manifest.
  write_file(dir / "manifest.json", to_json(m).dump(2) + "\n");
}

std::optional<nlohmann::json> load_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  if (!fs::exists(path)) return std::nullopt;
  std::ifstream in(path);
  if (!in) throw StorageError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw StorageError("corrupt manifest " + path.string() + ": " + e.what());
  }
}

}  // namespace sentinel
