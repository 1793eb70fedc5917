#pragma once

#include <span>

#include <Eigen/Core>

#include "stance/prob.h"
#include "stance/train_config.h"

namespace stance {

// Multinomial (softmax) logistic regression over averaged embeddings.
struct LogRegModel {
  Eigen::MatrixXd weights;  // kNumClasses x dim
  Eigen::VectorXd biases;   // kNumClasses

  static LogRegModel zeros(int dim);
  int dim() const { return static_cast<int>(weights.cols()); }

  friend bool operator==(const LogRegModel& a, const LogRegModel& b) {
    return a.weights == b.weights && a.biases == b.biases;
  }
};

struct LabeledVector {
  Eigen::VectorXd x;
  Stance y = Stance::kNeutral;
};

// Zero-initialized; examples are reshuffled every epoch from cfg.seed.
LogRegModel train_logreg(std::span<const LabeledVector> data, const TrainConfig& cfg,
                         TrainLog* log = nullptr);

ProbDist predict_logreg(const LogRegModel& model, const Eigen::VectorXd& x);

}  // namespace stance
