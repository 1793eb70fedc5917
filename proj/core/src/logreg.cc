#include "stance/logreg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "stance/rng.h"

namespace stance {

LogRegModel LogRegModel::zeros(int dim) {
  return {Eigen::MatrixXd::Zero(kNumClasses, dim), Eigen::VectorXd::Zero(kNumClasses)};
}

ProbDist predict_logreg(const LogRegModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.dim()) throw InvalidArgument("predict_logreg: dimension mismatch");
  const Eigen::Vector3d logits = model.weights * x + model.biases;
  return softmax(logits);
}

LogRegModel train_logreg(std::span<const LabeledVector> data, const TrainConfig& cfg, TrainLog* log) {
  cfg.validate();
  if (data.empty()) throw InvalidArgument("train_logreg: no training data");
  const int dim = static_cast<int>(data.front().x.size());
  for (const auto& ex : data) {
    if (ex.x.size() != dim) throw InvalidArgument("train_logreg: inconsistent input dimension");
  }
  LogRegModel model = LogRegModel::zeros(dim);
  Rng rng = Rng::derive(cfg.seed, "logreg-shuffle");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  Eigen::MatrixXd grad_w(kNumClasses, dim);
  Eigen::Vector3d grad_b;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng.engine());
    double ce_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      grad_w.setZero();
      grad_b.setZero();
      double batch_ce = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const LabeledVector& ex = data[order[k]];
        const ProbDist p = predict_logreg(model, ex.x);
        const int y = index_of(ex.y);
        batch_ce -= std::log(std::max(p.probs[y], 1e-300));
        Eigen::Vector3d delta(p.probs[0], p.probs[1], p.probs[2]);
        delta[y] -= 1.0;
        grad_w.noalias() += delta * ex.x.transpose();
        grad_b += delta;
      }
      if (!std::isfinite(batch_ce)) {
        std::ostringstream msg;
        msg << "train_logreg: non-finite loss at epoch " << epoch << ", batch starting at " << start
            << " (lr=" << cfg.learning_rate << ", |W|=" << model.weights.norm() << ")";
        throw TrainingDiverged(msg.str());
      }
      ce_sum += batch_ce;
      const double scale = 1.0 / static_cast<double>(end - start);
      model.weights -= cfg.learning_rate * (scale * grad_w + cfg.l2 * model.weights);
      model.biases -= cfg.learning_rate * scale * grad_b;
    }
    const double loss = ce_sum / static_cast<double>(data.size()) +
                        0.5 * cfg.l2 * model.weights.squaredNorm();
    if (!std::isfinite(loss) || !model.weights.allFinite()) {
      throw TrainingDiverged("train_logreg: parameters diverged at epoch " + std::to_string(epoch));
    }
    if (log) log->epoch_loss.push_back(loss);
  }
  return model;
}

}  // namespace stance
