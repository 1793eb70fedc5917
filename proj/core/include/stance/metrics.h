#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stance/types.h"

namespace stance {

// Rows are the true class, columns the predicted class.
struct ConfusionMatrix {
  std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> counts{};

  std::int64_t& at(Stance truth, Stance predicted) {
    return counts[static_cast<std::size_t>(index_of(truth))][static_cast<std::size_t>(index_of(predicted))];
  }
  std::int64_t at(Stance truth, Stance predicted) const {
    return counts[static_cast<std::size_t>(index_of(truth))][static_cast<std::size_t>(index_of(predicted))];
  }
  std::int64_t total() const;
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const Stance> golds, std::span<const Stance> preds);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct F1Report {
  std::array<ClassScores, kNumClasses> per_class{};
  double macro_f1 = 0.0;  // unweighted mean of the per-class F1s
};

// Zero denominators give 0 for the affected quantity.
F1Report f1_report(const ConfusionMatrix& cm);

double harmonic_f1(double precision, double recall);

// One example of a one-vs-all problem.
struct ScoredExample {
  double score = 0.0;
  bool positive = false;
};

struct PRPoint {
  double recall = 0.0;
  double precision = 0.0;
  double threshold = 0.0;  // predict positive when score >= threshold
};

// One point per distinct score, swept from the highest threshold down, so
// recall is non-decreasing along `points`. Equal scores form one block.
struct PRCurve {
  std::vector<PRPoint> points;
};

// Throws InvalidArgument when there is no positive example or a score is NaN.
PRCurve pr_curve(std::span<const ScoredExample> scores);

// Trapezoidal area under the curve after prepending (0, precision of the first
// point). Throws InvalidArgument if fewer than two points remain.
double auc(const PRCurve& curve);

struct Calibration {
  Stance stance = Stance::kProRussian;
  double target_precision = 0.8;
  bool achieved = false;
  double threshold = 1.0;
  double precision = 0.0;
  double recall = 0.0;
  std::int64_t predicted_positive = 0;
};

// Lowest-recall-loss threshold meeting `target_precision`: among thresholds
// whose precision reaches the target, the one with the highest recall (ties:
// higher precision, then higher threshold). `achieved` is false when none does.
Calibration calibrate_threshold(std::span<const ScoredExample> scores, double target_precision,
                                Stance stance = Stance::kProRussian);

}  // namespace stance
