#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stance/classifier.h"
#include "stance/corpus.h"
#include "stance/folds.h"
#include "stance/metrics.h"

namespace stance {

struct CvOptions {
  std::uint64_t seed = 0;
  int num_folds = kDefaultNumFolds;
  double target_precision = 0.8;
  // Folds run concurrently when > 1; results do not depend on this value.
  int threads = 1;
};

struct FoldResult {
  int fold_id = 0;
  std::size_t train_size = 0;  // after upsampling
  std::size_t test_size = 0;
  ConfusionMatrix confusion;
  F1Report f1;
  // Per-class one-vs-all AUC; empty for hard classifiers or when the test
  // split has no positive of the class.
  std::array<std::optional<double>, kNumClasses> auc{};
  std::optional<double> macro_auc;
};

struct ScoredPrediction {
  std::string id;
  Stance gold = Stance::kNeutral;
  ProbDist probs;
  int fold_id = 0;
};

struct CvReport {
  std::string model;
  bool probabilistic = false;
  std::vector<FoldResult> folds;
  std::array<double, kNumClasses> mean_f1{};
  double mean_macro_f1 = 0.0;
  std::array<std::optional<double>, kNumClasses> mean_auc{};
  std::optional<double> mean_macro_auc;
  // Pooled over the concatenated test splits of all folds.
  ConfusionMatrix pooled_confusion;
  std::array<std::optional<PRCurve>, kNumClasses> pooled_curves{};
  std::vector<Calibration> calibrations;  // pro-Russian and pro-Ukrainian
  std::vector<ScoredPrediction> predictions;
};

using ClassifierFactory = std::function<std::unique_ptr<Classifier>()>;

// Runs the split/train/test protocol over the labeled originals of `corpus`.
// Train-only (auxiliary) tweets join every training split and never a dev or
// test split. Classifiers that ask for it see a class-balanced training split.
CvReport cross_validate(const Corpus& corpus, const ClassifierFactory& factory, const CvOptions& options);

// One-vs-all scores of class `c` from pooled predictions.
std::vector<ScoredExample> one_vs_all(std::span<const ScoredPrediction> predictions, Stance c);

// Human-readable per-fold table plus summary for each report.
std::string format_report(std::span<const CvReport> reports);
// Machine-readable metrics (JSON).
std::string report_json(std::span<const CvReport> reports);
// `recall<TAB>precision` lines.
std::string format_curve(const PRCurve& curve);
// `tweet_id<TAB>p_pro_russian<TAB>p_pro_ukrainian<TAB>p_neutral` lines.
std::string format_predictions(std::span<const ScoredPrediction> predictions);
std::map<std::string, ProbDist> parse_predictions(std::string_view content);

std::string calibrations_json(std::span<const Calibration> calibrations);
std::vector<Calibration> parse_calibrations(std::string_view json);

}  // namespace stance
