#include "sentinel/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sentinel {

namespace {

template <typename T>
std::vector<T> sorted_unique(std::vector<T> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

// Unlimited depth sorts after every finite depth.
bool depth_less(const std::optional<int>& a, const std::optional<int>& b) {
  if (!a) return false;
  if (!b) return true;
  return *a < *b;
}

}  // namespace

Dataset to_dataset(std::span<const EnrichedRecord> journal) {
  Dataset data(kFeatureNames.size());
  for (const auto& row : journal) {
    if (row.pri < 0 || static_cast<std::size_t>(row.pri) >= kNumClasses) {
      throw std::invalid_argument("row " + std::to_string(row.base.index) + " has PRI " +
                                  std::to_string(row.pri) + ", outside the modeled classes {0,1,2}");
    }
    const auto x = features(row);
    data.add(x, row.pri);
  }
  return data;
}

IterativeRun iterative_run_scored(const Dataset& data, const Hyperparams& hp, TrainMode mode) {
  hp.validate();
  IterativeRun run;
  run.predictions.reserve(data.size());
  run.distributions.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::size_t window = mode == TrainMode::InclusivePrefix ? i + 1 : i;
    if (window == 0) {
      ClassDistribution cold{};
      cold[kColdStartClass] = 1.0;
      run.predictions.push_back(kColdStartClass);
      run.distributions.push_back(cold);
      continue;
    }
    const Tree tree = fit(data.prefix(window), hp);
    run.predictions.push_back(tree.predict(data.row(i)));
    run.distributions.push_back(tree.predict_distribution(data.row(i)));
  }
  return run;
}

std::vector<int> iterative_run(const Dataset& data, const Hyperparams& hp, TrainMode mode) {
  return iterative_run_scored(data, hp, mode).predictions;
}

double accuracy(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw std::invalid_argument("length mismatch");
  if (truth.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

ParamGrid ParamGrid::standard() { return {{3, 5, 7}, {2, 5, 10}, {1, 2, 4}}; }

std::vector<Hyperparams> ParamGrid::combinations() const {
  auto depths = max_depth;
  std::sort(depths.begin(), depths.end(), depth_less);
  depths.erase(std::unique(depths.begin(), depths.end()), depths.end());
  const auto splits = sorted_unique(min_samples_split);
  const auto leaves = sorted_unique(min_samples_leaf);

  std::vector<Hyperparams> out;
  out.reserve(depths.size() * splits.size() * leaves.size());
  for (const auto& d : depths) {
    for (int s : splits) {
      for (int l : leaves) out.push_back({d, s, l});
    }
  }
  return out;
}

ParamGrid ParamGrid::from_json(const nlohmann::json& doc) {
  ParamGrid grid;
  try {
    for (const auto& d : doc.at("max_depth")) {
      grid.max_depth.push_back(d.is_null() ? std::nullopt : std::optional<int>(d.get<int>()));
    }
    grid.min_samples_split = doc.at("min_samples_split").get<std::vector<int>>();
    grid.min_samples_leaf = doc.at("min_samples_leaf").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed parameter grid: ") + e.what());
  }
  for (const auto& hp : grid.combinations()) hp.validate();
  return grid;
}

nlohmann::json ParamGrid::to_json() const {
  nlohmann::json depths = nlohmann::json::array();
  for (const auto& d : max_depth) depths.push_back(d ? nlohmann::json(*d) : nlohmann::json(nullptr));
  return {{"max_depth", depths}, {"min_samples_split", min_samples_split}, {"min_samples_leaf", min_samples_leaf}};
}

std::vector<GridResult> grid_search(const Dataset& data, const ParamGrid& grid, TrainMode mode,
                                    unsigned threads) {
  if (data.empty()) throw std::invalid_argument("grid search needs a non-empty journal");
  const auto combos = grid.combinations();
  if (combos.empty()) throw std::invalid_argument("parameter grid is empty");
  for (const auto& hp : combos) hp.validate();

  std::vector<GridResult> results(combos.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < combos.size(); k = next++) {
      auto predictions = iterative_run(data, combos[k], mode);
      const double acc = accuracy(data.labels(), predictions);
      results[k] = GridResult{combos[k], std::move(predictions), acc};
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(combos.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::stable_sort(results.begin(), results.end(),
                   [](const GridResult& a, const GridResult& b) { return a.accuracy > b.accuracy; });
  return results;
}

std::string grid_table_csv(std::span<const GridResult> results) {
  std::ostringstream out;
  out << "max_depth,min_samples_split,min_samples_leaf,accuracy\n";
  for (const auto& r : results) {
    out << (r.hp.max_depth ? std::to_string(*r.hp.max_depth) : "none") << ',' << r.hp.min_samples_split
        << ',' << r.hp.min_samples_leaf << ',' << format_decimal(r.accuracy) << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const Hyperparams& hp) {
  return {{"max_depth", hp.max_depth ? nlohmann::json(*hp.max_depth) : nlohmann::json(nullptr)},
          {"min_samples_split", hp.min_samples_split},
          {"min_samples_leaf", hp.min_samples_leaf}};
}

Hyperparams hyperparams_from_json(const nlohmann::json& doc) {
  Hyperparams hp;
  try {
    const auto& d = doc.at("max_depth");
    if (!d.is_null()) hp.max_depth = d.get<int>();
    hp.min_samples_split = doc.at("min_samples_split").get<int>();
    hp.min_samples_leaf = doc.at("min_samples_leaf").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed hyperparameters: ") + e.what());
  }
  hp.validate();
  return hp;
}

nlohmann::json grid_table_json(std::span<const GridResult> results) {
  auto rows = nlohmann::json::array();
  for (const auto& r : results) {
    auto row = to_json(r.hp);
    row["accuracy"] = r.accuracy;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string to_string(TrainMode mode) {
  return mode == TrainMode::InclusivePrefix ? "inclusive" : "causal";
}

TrainMode parse_train_mode(const std::string& text) {
  if (text == "inclusive") return TrainMode::InclusivePrefix;
  if (text == "causal") return TrainMode::CausalPrefix;
  throw std::invalid_argument("unknown train mode '" + text + "' (expected inclusive|causal)");
}

}  // namespace sentinel
