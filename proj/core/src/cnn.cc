#include "stance/cnn.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace stance {

CnnModel CnnModel::zeros(int dim, int num_filters, int width) {
  if (dim <= 0 || num_filters <= 0 || width <= 0) {
    throw InvalidArgument("CnnModel: dim, filter count and width must be positive");
  }
  CnnModel m;
  m.width = width;
  m.filters = Eigen::MatrixXd::Zero(num_filters, width * dim);
  m.filter_biases = Eigen::VectorXd::Zero(num_filters);
  m.output_weights = Eigen::MatrixXd::Zero(kNumClasses, num_filters);
  m.output_biases = Eigen::VectorXd::Zero(kNumClasses);
  return m;
}

std::size_t CnnModel::parameter_count() const {
  return static_cast<std::size_t>(filters.size() + filter_biases.size() + output_weights.size() +
                                  output_biases.size());
}

double& CnnModel::parameter(std::size_t i) {
  auto take = [&i](auto& block) -> double* {
    const auto n = static_cast<std::size_t>(block.size());
    if (i < n) return block.data() + i;
    i -= n;
    return nullptr;
  };
  if (double* p = take(filters)) return *p;
  if (double* p = take(filter_biases)) return *p;
  if (double* p = take(output_weights)) return *p;
  if (double* p = take(output_biases)) return *p;
  throw InvalidArgument("CnnModel::parameter: index out of range");
}

double CnnModel::parameter(std::size_t i) const { return const_cast<CnnModel*>(this)->parameter(i); }

CnnModel& CnnModel::operator+=(const CnnModel& other) {
  filters += other.filters;
  filter_biases += other.filter_biases;
  output_weights += other.output_weights;
  output_biases += other.output_biases;
  return *this;
}

CnnModel& CnnModel::operator*=(double s) {
  filters *= s;
  filter_biases *= s;
  output_weights *= s;
  output_biases *= s;
  return *this;
}

CnnActivations cnn_forward(const CnnModel& model, const TweetMatrix& m) {
  const int dim = model.dim();
  const int w = model.width;
  if (m.rows.cols() != dim) {
    throw InvalidArgument("cnn_forward: input dimension " + std::to_string(m.rows.cols()) +
                          " does not match model dimension " + std::to_string(dim));
  }
  const int true_len = std::clamp(m.true_len, 0, static_cast<int>(m.rows.rows()));
  const int positions = true_len >= w ? true_len - w + 1 : 1;
  const int rows_read = positions + w - 1;

  CnnActivations act;
  act.input = RowMatrix::Zero(rows_read, dim);
  const int copied = std::min(rows_read, true_len);
  if (copied > 0) act.input.topRows(copied) = m.rows.topRows(copied);

  // Window p is rows p .. p+w-1, contiguous in row-major storage.
  Eigen::Map<const RowMatrix, 0, Eigen::OuterStride<>> windows(act.input.data(), positions, w * dim,
                                                               Eigen::OuterStride<>(dim));
  act.pre.noalias() = windows * model.filters.transpose();
  act.pre.rowwise() += model.filter_biases.transpose();

  const int nf = model.num_filters();
  act.pooled.resize(nf);
  act.argmax.assign(static_cast<std::size_t>(nf), 0);
  for (int f = 0; f < nf; ++f) {
    double best = std::max(0.0, act.pre(0, f));
    int where = 0;
    for (int p = 1; p < positions; ++p) {
      const double a = std::max(0.0, act.pre(p, f));
      if (a > best) {
        best = a;
        where = p;
      }
    }
    act.pooled[f] = best;
    act.argmax[static_cast<std::size_t>(f)] = where;
  }
  const Eigen::Vector3d logits = model.output_weights * act.pooled + model.output_biases;
  act.probs = softmax(logits);
  return act;
}

ProbDist cnn_predict(const CnnModel& model, const TweetMatrix& m) { return cnn_forward(model, m).probs; }

double cnn_loss(const CnnActivations& act, Stance target) {
  return -std::log(std::max(act.probs[target], 1e-300));
}

void accumulate_cnn_gradients(const CnnModel& model, const CnnActivations& act, Stance target,
                              CnnGradients& grads) {
  const int dim = model.dim();
  const int span = model.width * dim;
  Eigen::Vector3d delta(act.probs.probs[0], act.probs.probs[1], act.probs.probs[2]);
  delta[index_of(target)] -= 1.0;

  grads.output_weights.noalias() += delta * act.pooled.transpose();
  grads.output_biases += delta;
  const Eigen::VectorXd d_pooled = model.output_weights.transpose() * delta;

  for (int f = 0; f < model.num_filters(); ++f) {
    const int p = act.argmax[static_cast<std::size_t>(f)];
    if (act.pre(p, f) <= 0.0) continue;  // ReLU gate closed
    const double g = d_pooled[f];
    Eigen::Map<const Eigen::RowVectorXd> window(act.input.data() + static_cast<std::ptrdiff_t>(p) * dim, span);
    grads.filters.row(f) += g * window;
    grads.filter_biases[f] += g;
  }
}

CnnGradients cnn_gradients(const CnnModel& model, const CnnActivations& act, Stance target) {
  CnnGradients grads = CnnModel::zeros(model.dim(), model.num_filters(), model.width);
  accumulate_cnn_gradients(model, act, target, grads);
  return grads;
}

CnnModel init_cnn(int dim, const CnnShape& shape, Rng& rng, double scale) {
  CnnModel model = CnnModel::zeros(dim, shape.num_filters, shape.width);
  for (std::size_t i = 0; i < model.parameter_count(); ++i) model.parameter(i) = rng.uniform(-scale, scale);
  return model;
}

CnnModel train_cnn(std::span<const LabeledMatrix> data, const TrainConfig& cfg, const CnnShape& shape,
                   TrainLog* log) {
  cfg.validate();
  if (data.empty()) throw InvalidArgument("train_cnn: no training data");
  const int dim = static_cast<int>(data.front().m.rows.cols());
  for (const auto& ex : data) {
    if (ex.m.rows.cols() != dim) throw InvalidArgument("train_cnn: inconsistent input dimension");
  }
  Rng init_rng = Rng::derive(cfg.seed, "cnn-init");
  CnnModel model = init_cnn(dim, shape, init_rng);
  Rng shuffle_rng = Rng::derive(cfg.seed, "cnn-shuffle");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  CnnGradients grads = CnnModel::zeros(dim, shape.num_filters, shape.width);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng.engine());
    double ce_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      grads.filters.setZero();
      grads.filter_biases.setZero();
      grads.output_weights.setZero();
      grads.output_biases.setZero();
      double batch_ce = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const LabeledMatrix& ex = data[order[k]];
        const CnnActivations act = cnn_forward(model, ex.m);
        batch_ce += cnn_loss(act, ex.y);
        accumulate_cnn_gradients(model, act, ex.y, grads);
      }
      if (!std::isfinite(batch_ce)) {
        std::ostringstream msg;
        msg << "train_cnn: non-finite loss at epoch " << epoch << ", batch starting at " << start
            << " (lr=" << cfg.learning_rate << ", |filters|=" << model.filters.norm()
            << ", |output|=" << model.output_weights.norm() << ")";
        throw TrainingDiverged(msg.str());
      }
      ce_sum += batch_ce;
      const double scale = 1.0 / static_cast<double>(end - start);
      const double lr = cfg.learning_rate;
      model.filters -= lr * (scale * grads.filters + cfg.l2 * model.filters);
      model.filter_biases -= lr * scale * grads.filter_biases;
      model.output_weights -= lr * (scale * grads.output_weights + cfg.l2 * model.output_weights);
      model.output_biases -= lr * scale * grads.output_biases;
    }
    const double loss = ce_sum / static_cast<double>(data.size()) +
                        0.5 * cfg.l2 * (model.filters.squaredNorm() + model.output_weights.squaredNorm());
    if (!std::isfinite(loss)) {
      throw TrainingDiverged("train_cnn: parameters diverged at epoch " + std::to_string(epoch));
    }
    if (log) log->epoch_loss.push_back(loss);
  }
  return model;
}

}  // namespace stance
