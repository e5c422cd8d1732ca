#include "sentinel/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sentinel {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

std::string fixed(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::size_t ConfusionMatrix::total() const {
  std::size_t t = 0;
  for (const auto& row : counts) t += std::accumulate(row.begin(), row.end(), std::size_t{0});
  return t;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t t = 0;
  for (std::size_t k = 0; k < kNumClasses; ++k) t += counts[k][k];
  return t;
}

std::size_t ConfusionMatrix::true_count(std::size_t cls) const {
  return std::accumulate(counts[cls].begin(), counts[cls].end(), std::size_t{0});
}

std::size_t ConfusionMatrix::predicted_count(std::size_t cls) const {
  std::size_t t = 0;
  for (const auto& row : counts) t += row[cls];
  return t;
}

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw std::invalid_argument("y_true has " + std::to_string(y_true.size()) + " entries, y_pred has " +
                                std::to_string(y_pred.size()));
  }
  if (y_true.empty()) throw std::invalid_argument("no predictions to evaluate");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    for (int v : {y_true[i], y_pred[i]}) {
      if (v < 0 || static_cast<std::size_t>(v) >= kNumClasses) {
        throw std::invalid_argument("class " + std::to_string(v) + " at row " + std::to_string(i) +
                                    " outside {0,1,2}");
      }
    }
    ++cm.counts[static_cast<std::size_t>(y_true[i])][static_cast<std::size_t>(y_pred[i])];
  }
  return cm;
}

MetricsReport report(const ConfusionMatrix& cm) {
  const std::size_t total = cm.total();
  if (total == 0) throw std::invalid_argument("empty confusion matrix");
  MetricsReport r;
  r.accuracy = ratio(cm.trace(), total);
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    auto& s = r.per_class[k];
    const std::size_t tp = cm.counts[k][k];
    s.support = cm.true_count(k);
    s.precision = ratio(tp, cm.predicted_count(k));
    s.recall = ratio(tp, s.support);
    s.f1 = harmonic(s.precision, s.recall);
    if (s.support > 0) {
      r.macro_classes.push_back(static_cast<int>(k));
      r.macro_precision += s.precision;
      r.macro_recall += s.recall;
      r.macro_f1 += s.f1;
    }
  }
  const double present = static_cast<double>(r.macro_classes.size());
  r.macro_precision /= present;
  r.macro_recall /= present;
  r.macro_f1 /= present;
  return r;
}

double trapezoid_area(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

RocCurve roc_binary(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("scores and labels differ in length");
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("ROC undefined: labels contain a single class");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double threshold = scores[order[k]];
    for (; k < order.size() && scores[order[k]] == threshold; ++k) {
      if (labels[order[k]] == 1) {
        ++tp;
      } else {
        ++fp;
      }
    }
    curve.points.push_back({ratio(fp, negatives), ratio(tp, positives)});
  }
  curve.auc = trapezoid_area(curve.points);
  return curve;
}

std::size_t holdout_train_size(std::size_t n) { return std::max<std::size_t>(1, (3 * n) / 4); }

std::array<ClassRoc, kNumClasses> one_vs_rest_rocs(std::span<const int> labels,
                                                   std::span<const ClassDistribution> scores) {
  if (labels.size() != scores.size()) throw std::invalid_argument("labels and scores differ in length");
  std::array<ClassRoc, kNumClasses> out;
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    out[k].cls = static_cast<int>(k);
    std::vector<int> binary(labels.size());
    std::vector<double> class_scores(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      binary[i] = labels[i] == static_cast<int>(k) ? 1 : 0;
      class_scores[i] = scores[i][k];
    }
    const auto pos = std::count(binary.begin(), binary.end(), 1);
    if (pos == 0) {
      out[k].note = "class absent from evaluation labels";
    } else if (static_cast<std::size_t>(pos) == binary.size()) {
      out[k].note = "no negative rows for this class";
    } else {
      out[k].curve = roc_binary(class_scores, binary);
    }
  }
  return out;
}

std::array<ClassRoc, kNumClasses> one_vs_rest_rocs(const Dataset& data, const Hyperparams& hp,
                                                   EvalScheme scheme, TrainMode mode) {
  if (scheme == EvalScheme::IterativeScores) {
    const auto run = iterative_run_scored(data, hp, mode);
    return one_vs_rest_rocs(data.labels(), run.distributions);
  }
  if (data.empty()) throw std::invalid_argument("cannot evaluate an empty dataset");
  const std::size_t n_train = holdout_train_size(data.size());
  const Tree tree = fit(data.prefix(n_train), hp);
  std::vector<int> labels;
  std::vector<ClassDistribution> scores;
  for (std::size_t i = n_train; i < data.size(); ++i) {
    labels.push_back(data.label(i));
    scores.push_back(tree.predict_distribution(data.row(i)));
  }
  return one_vs_rest_rocs(labels, scores);
}

nlohmann::json to_json(const ConfusionMatrix& cm) { return cm.counts; }

nlohmann::json to_json(const MetricsReport& r) {
  auto per_class = nlohmann::json::array();
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    const auto& s = r.per_class[k];
    per_class.push_back({{"class", k},
                         {"precision", s.precision},
                         {"recall", s.recall},
                         {"f1", s.f1},
                         {"support", s.support}});
  }
  return {{"accuracy", r.accuracy},
          {"macro_precision", r.macro_precision},
          {"macro_recall", r.macro_recall},
          {"macro_f1", r.macro_f1},
          {"macro_classes", r.macro_classes},
          {"per_class", per_class}};
}

nlohmann::json to_json(const std::array<ClassRoc, kNumClasses>& rocs) {
  auto out = nlohmann::json::array();
  for (const auto& roc : rocs) {
    nlohmann::json entry = {{"class", roc.cls}};
    if (roc.curve) {
      auto points = nlohmann::json::array();
      for (const auto& p : roc.curve->points) points.push_back({p.fpr, p.tpr});
      entry["defined"] = true;
      entry["auc"] = roc.curve->auc;
      entry["points"] = std::move(points);
    } else {
      entry["defined"] = false;
      entry["auc"] = nullptr;
      entry["points"] = nlohmann::json::array();
      entry["note"] = roc.note;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::string roc_csv(const std::array<ClassRoc, kNumClasses>& rocs) {
  std::string out = "class,fpr,tpr\n";
  for (const auto& roc : rocs) {
    if (!roc.curve) continue;
    for (const auto& p : roc.curve->points) {
      out += std::to_string(roc.cls) + "," + format_decimal(p.fpr) + "," + format_decimal(p.tpr) + "\n";
    }
  }
  return out;
}

std::string render_report(const MetricsReport& r, const ConfusionMatrix& cm) {
  std::ostringstream out;
  out << "accuracy  " << fixed(r.accuracy) << "\n\n";
  out << "class  precision  recall  f1      support\n";
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    const auto& s = r.per_class[k];
    out << "  " << k << "    " << fixed(s.precision) << "     " << fixed(s.recall) << "  " << fixed(s.f1)
        << "  " << s.support << "\n";
  }
  out << "macro  " << fixed(r.macro_precision) << "     " << fixed(r.macro_recall) << "  "
      << fixed(r.macro_f1) << "\n\n";
  out << "confusion (rows = true, cols = predicted)\n";
  for (std::size_t t = 0; t < kNumClasses; ++t) {
    out << "  " << t << " |";
    for (std::size_t p = 0; p < kNumClasses; ++p) out << ' ' << cm.counts[t][p];
    out << "\n";
  }
  return out.str();
}

std::string to_string(EvalScheme scheme) {
  return scheme == EvalScheme::IterativeScores ? "iterative" : "holdout";
}

EvalScheme parse_eval_scheme(const std::string& text) {
  if (text == "iterative") return EvalScheme::IterativeScores;
  if (text == "holdout") return EvalScheme::HoldoutSplit;
  throw std::invalid_argument("unknown evaluation scheme '" + text + "' (expected iterative|holdout)");
}

}  // namespace sentinel
