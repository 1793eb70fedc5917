#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "stance/embeddings.h"
#include "stance/prob.h"
#include "stance/rng.h"
#include "stance/train_config.h"

namespace stance {

inline constexpr int kDefaultNumFilters = 100;
inline constexpr int kDefaultFilterWidth = 4;

// One convolutional layer (ReLU) over the token-vector sequence, max pooling
// over positions, then a softmax output layer.
//
// Each filter spans `width` consecutive token vectors; its weights are stored
// flattened row by row, so filter f is filters.row(f) of length width * dim.
struct CnnModel {
  int width = kDefaultFilterWidth;
  Eigen::MatrixXd filters;         // num_filters x (width * dim)
  Eigen::VectorXd filter_biases;   // num_filters
  Eigen::MatrixXd output_weights;  // kNumClasses x num_filters
  Eigen::VectorXd output_biases;   // kNumClasses

  static CnnModel zeros(int dim, int num_filters = kDefaultNumFilters,
                        int width = kDefaultFilterWidth);

  int num_filters() const { return static_cast<int>(filters.rows()); }
  int dim() const { return width > 0 ? static_cast<int>(filters.cols()) / width : 0; }
  std::size_t parameter_count() const;

  // Flat view helpers for optimizers and finite-difference checks; the order is
  // filters, filter_biases, output_weights, output_biases (column-major each).
  double& parameter(std::size_t i);
  double parameter(std::size_t i) const;

  CnnModel& operator+=(const CnnModel& other);
  CnnModel& operator*=(double s);

  friend bool operator==(const CnnModel& a, const CnnModel& b) {
    return a.width == b.width && a.filters == b.filters && a.filter_biases == b.filter_biases &&
           a.output_weights == b.output_weights && a.output_biases == b.output_biases;
  }
};

using CnnGradients = CnnModel;

// Everything backpropagation needs from a forward pass.
struct CnnActivations {
  RowMatrix input;               // the rows the convolution read (>= width rows)
  Eigen::MatrixXd pre;           // positions x num_filters, before ReLU
  Eigen::VectorXd pooled;        // num_filters
  std::vector<int> argmax;       // winning position per filter
  ProbDist probs;

  int positions() const { return static_cast<int>(pre.rows()); }
};

// Convolution positions: 0 .. true_len - width when true_len >= width,
// otherwise the single zero-padded window at position 0.
CnnActivations cnn_forward(const CnnModel& model, const TweetMatrix& m);

ProbDist cnn_predict(const CnnModel& model, const TweetMatrix& m);

// Cross-entropy loss of `target` under the cached forward pass.
double cnn_loss(const CnnActivations& act, Stance target);

// Exact gradient of the cross-entropy loss w.r.t. every parameter.
CnnGradients cnn_gradients(const CnnModel& model, const CnnActivations& act, Stance target);

// Adds the gradient into `grads` (same shape as the model).
void accumulate_cnn_gradients(const CnnModel& model, const CnnActivations& act, Stance target,
                              CnnGradients& grads);

struct LabeledMatrix {
  TweetMatrix m;
  Stance y = Stance::kNeutral;
};

struct CnnShape {
  int num_filters = kDefaultNumFilters;
  int width = kDefaultFilterWidth;
};

// Parameters start uniform in [-0.05, 0.05] from cfg.seed; examples are
// reshuffled every epoch.
CnnModel train_cnn(std::span<const LabeledMatrix> data, const TrainConfig& cfg,
                   const CnnShape& shape = {}, TrainLog* log = nullptr);

CnnModel init_cnn(int dim, const CnnShape& shape, Rng& rng, double scale = 0.05);

}  // namespace stance
