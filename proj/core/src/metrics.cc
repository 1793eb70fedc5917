#include "stance/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace stance {

std::int64_t ConfusionMatrix::total() const {
  std::int64_t t = 0;
  for (const auto& row : counts) {
    for (auto v : row) t += v;
  }
  return t;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  for (std::size_t i = 0; i < kNumClasses; ++i) {
    for (std::size_t j = 0; j < kNumClasses; ++j) counts[i][j] += other.counts[i][j];
  }
  return *this;
}

ConfusionMatrix confusion(std::span<const Stance> golds, std::span<const Stance> preds) {
  if (golds.size() != preds.size()) {
    throw InvalidArgument("confusion: " + std::to_string(golds.size()) + " gold labels but " +
                          std::to_string(preds.size()) + " predictions");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < golds.size(); ++i) ++cm.at(golds[i], preds[i]);
  return cm;
}

double harmonic_f1(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

F1Report f1_report(const ConfusionMatrix& cm) {
  F1Report r;
  double sum = 0.0;
  for (Stance c : kAllStances) {
    std::int64_t tp = cm.at(c, c);
    std::int64_t predicted = 0;
    std::int64_t actual = 0;
    for (Stance o : kAllStances) {
      predicted += cm.at(o, c);
      actual += cm.at(c, o);
    }
    ClassScores& s = r.per_class[static_cast<std::size_t>(index_of(c))];
    s.precision = predicted > 0 ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    s.recall = actual > 0 ? static_cast<double>(tp) / static_cast<double>(actual) : 0.0;
    s.f1 = harmonic_f1(s.precision, s.recall);
    sum += s.f1;
  }
  r.macro_f1 = sum / kNumClasses;
  return r;
}

namespace {

// Indices sorted by descending score; ties keep input order (stable).
std::vector<std::size_t> by_score_desc(std::span<const ScoredExample> scores) {
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (std::isnan(scores[i].score)) throw InvalidArgument("score is NaN");
    order[i] = i;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a].score > scores[b].score; });
  return order;
}

struct Block {
  double threshold;
  std::int64_t tp;  // cumulative
  std::int64_t fp;  // cumulative
};

std::vector<Block> sweep(std::span<const ScoredExample> scores) {
  const auto order = by_score_desc(scores);
  std::vector<Block> blocks;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double t = scores[order[i]].score;
    while (i < order.size() && scores[order[i]].score == t) {
      (scores[order[i]].positive ? tp : fp) += 1;
      ++i;
    }
    blocks.push_back({t, tp, fp});
  }
  return blocks;
}

std::int64_t count_positives(std::span<const ScoredExample> scores) {
  return std::count_if(scores.begin(), scores.end(), [](const ScoredExample& s) { return s.positive; });
}

}  // namespace

PRCurve pr_curve(std::span<const ScoredExample> scores) {
  const std::int64_t positives = count_positives(scores);
  if (positives == 0) throw InvalidArgument("pr_curve: no positive examples");
  PRCurve curve;
  for (const Block& b : sweep(scores)) {
    curve.points.push_back({static_cast<double>(b.tp) / static_cast<double>(positives),
                            static_cast<double>(b.tp) / static_cast<double>(b.tp + b.fp), b.threshold});
  }
  return curve;
}

double auc(const PRCurve& curve) {
  std::vector<PRPoint> pts;
  if (!curve.points.empty() && curve.points.front().recall > 0.0) {
    pts.push_back({0.0, curve.points.front().precision, curve.points.front().threshold});
  }
  pts.insert(pts.end(), curve.points.begin(), curve.points.end());
  if (pts.size() < 2) throw InvalidArgument("auc: curve too short");
  double area = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    area += (pts[i].recall - pts[i - 1].recall) * (pts[i].precision + pts[i - 1].precision) / 2.0;
  }
  return area;
}

Calibration calibrate_threshold(std::span<const ScoredExample> scores, double target_precision, Stance stance) {
  if (!(target_precision > 0.0 && target_precision <= 1.0)) {
    throw InvalidArgument("calibrate_threshold: target precision must be in (0, 1]");
  }
  Calibration best;
  best.stance = stance;
  best.target_precision = target_precision;
  const std::int64_t positives = count_positives(scores);
  if (positives == 0) return best;
  for (const Block& b : sweep(scores)) {
    const double precision = static_cast<double>(b.tp) / static_cast<double>(b.tp + b.fp);
    if (!(precision >= target_precision)) continue;
    const double recall = static_cast<double>(b.tp) / static_cast<double>(positives);
    const bool better = !best.achieved || recall > best.recall ||
                        (recall == best.recall && precision > best.precision);
    if (better) {
      best.achieved = true;
      best.threshold = b.threshold;
      best.precision = precision;
      best.recall = recall;
      best.predicted_positive = b.tp + b.fp;
    }
  }
  return best;
}

}  // namespace stance
