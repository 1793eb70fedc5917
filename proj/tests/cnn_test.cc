#include "stance/cnn.h"

#include <random>

#include <gtest/gtest.h>

#include "stance/rng.h"
#include "support/oracles.h"

namespace stance {
namespace {

TweetMatrix random_input(int len, int max_len, int dim, std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  TweetMatrix m;
  m.rows = RowMatrix::Zero(max_len, dim);
  m.true_len = len;
  for (int r = 0; r < len; ++r) {
    for (int d = 0; d < dim; ++d) m.rows(r, d) = n(gen);
  }
  return m;
}

TEST(CnnForward, Shapes) {
  std::mt19937_64 gen(1);
  Rng rng(1);
  CnnModel m = init_cnn(300, {}, rng);
  TweetMatrix x = random_input(10, 50, 300, gen);
  CnnActivations act = cnn_forward(m, x);
  EXPECT_EQ(act.pre.rows(), 7);
  EXPECT_EQ(act.pre.cols(), 100);
  EXPECT_EQ(act.pooled.size(), 100);
  EXPECT_EQ(act.probs.probs.size(), 3u);
}

TEST(CnnForward, ZeroModelIsUniform) {
  std::mt19937_64 gen(1);
  ProbDist p = cnn_predict(CnnModel::zeros(5, 3), random_input(6, 10, 5, gen));
  for (double x : p.probs) EXPECT_NEAR(x, 1.0 / 3, 1e-15);
}

TEST(CnnForward, OneHotDetectorPoolsInnerProduct) {
  const int dim = 3;
  CnnModel m = CnnModel::zeros(dim, 1, 4);
  // Detects token pattern e0, e1, e2, e0 (one-hot rows).
  const int pattern[4] = {0, 1, 2, 0};
  for (int k = 0; k < 4; ++k) m.filters(0, k * dim + pattern[k]) = 1.0;
  TweetMatrix x;
  x.rows = RowMatrix::Zero(10, dim);
  x.true_len = 8;
  const int seq[8] = {2, 2, 0, 1, 2, 0, 1, 1};
  for (int r = 0; r < 8; ++r) x.rows(r, seq[r]) = 0.5 * (r + 1);
  CnnActivations act = cnn_forward(m, x);
  // Pattern starts at position 2: 0.5 * (3 + 4 + 5 + 6).
  EXPECT_DOUBLE_EQ(act.pooled[0], 9.0);
  EXPECT_EQ(act.argmax[0], 2);
}

TEST(CnnForward, ShortInputUsesOnePaddedWindow) {
  std::mt19937_64 gen(2);
  Rng rng(2);
  CnnModel m = init_cnn(4, {5, 4}, rng);
  for (int len : {0, 1, 3}) {
    CnnActivations act = cnn_forward(m, random_input(len, 10, 4, gen));
    EXPECT_EQ(act.positions(), 1);
    EXPECT_EQ(act.input.rows(), 4);
  }
}

TEST(CnnForward, DimensionMismatchThrows) {
  std::mt19937_64 gen(2);
  EXPECT_THROW(cnn_forward(CnnModel::zeros(5, 3), random_input(4, 6, 4, gen)), InvalidArgument);
}

TEST(CnnProperty, PaddingBeyondTrueLengthIsIgnored) {
  std::mt19937_64 gen(3);
  Rng rng(3);
  for (int round = 0; round < 100; ++round) {
    CnnModel m = init_cnn(6, {8, 4}, rng, 0.5);
    int len = 1 + static_cast<int>(gen() % 12);
    TweetMatrix small = random_input(len, 12, 6, gen);
    TweetMatrix big;
    big.rows = RowMatrix::Zero(40, 6);
    big.rows.topRows(12) = small.rows;
    big.true_len = len;
    CnnActivations a = cnn_forward(m, small);
    CnnActivations b = cnn_forward(m, big);
    EXPECT_EQ(a.pooled, b.pooled);
    EXPECT_EQ(a.probs, b.probs);
  }
}

TEST(CnnProperty, ProbabilitiesNormalized) {
  std::mt19937_64 gen(4);
  Rng rng(4);
  for (int round = 0; round < 200; ++round) {
    CnnModel m = init_cnn(5, {4, 4}, rng, 3.0);
    ProbDist p = cnn_predict(m, random_input(1 + static_cast<int>(gen() % 9), 9, 5, gen));
    EXPECT_NEAR(p.probs[0] + p.probs[1] + p.probs[2], 1.0, 1e-9);
    for (double x : p.probs) EXPECT_GE(x, 0.0);
  }
}

TEST(CnnGradients, OutputBiasIsProbsMinusOneHot) {
  std::mt19937_64 gen(5);
  Rng rng(5);
  CnnModel m = init_cnn(5, {3, 4}, rng, 0.5);
  CnnActivations act = cnn_forward(m, random_input(7, 10, 5, gen));
  for (Stance t : kAllStances) {
    CnnGradients g = cnn_gradients(m, act, t);
    for (int c = 0; c < 3; ++c) {
      EXPECT_DOUBLE_EQ(g.output_biases[c], act.probs.probs[c] - (c == index_of(t) ? 1.0 : 0.0));
    }
  }
}

TEST(CnnGradients, ZeroInputHasZeroFilterWeightGradient) {
  Rng rng(6);
  CnnModel m = init_cnn(5, {3, 4}, rng, 0.5);
  m.filter_biases.setConstant(0.3);
  TweetMatrix x;
  x.rows = RowMatrix::Zero(8, 5);
  x.true_len = 6;
  CnnGradients g = cnn_gradients(m, cnn_forward(m, x), Stance::kProUkrainian);
  EXPECT_TRUE(g.filters.isZero(0.0));
  EXPECT_FALSE(g.filter_biases.isZero(0.0));
}

// Central differences on the loss, one parameter at a time.
double max_gradient_error(const CnnModel& model, const TweetMatrix& x, Stance target) {
  CnnGradients g = cnn_gradients(model, cnn_forward(model, x), target);
  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t i = 0; i < model.parameter_count(); ++i) {
    CnnModel plus = model, minus = model;
    plus.parameter(i) += h;
    minus.parameter(i) -= h;
    double numeric = (cnn_loss(cnn_forward(plus, x), target) - cnn_loss(cnn_forward(minus, x), target)) / (2 * h);
    worst = std::max(worst, oracle::relative_error(g.parameter(i), numeric));
  }
  return worst;
}

TEST(CnnGradients, MatchFiniteDifferences) {
  std::mt19937_64 gen(7);
  Rng rng(7);
  for (int point = 0; point < 10; ++point) {
    CnnModel m = init_cnn(5, {3, 4}, rng, 0.5);
    TweetMatrix x = random_input(2 + static_cast<int>(gen() % 9), 10, 5, gen);
    Stance target = stance_at(static_cast<int>(gen() % 3));
    EXPECT_LT(max_gradient_error(m, x, target), 1e-4) << "point " << point;
  }
}

TEST(CnnGradients, AccumulateAddsUp) {
  std::mt19937_64 gen(8);
  Rng rng(8);
  CnnModel m = init_cnn(4, {3, 4}, rng, 0.5);
  TweetMatrix a = random_input(6, 8, 4, gen), b = random_input(3, 8, 4, gen);
  CnnGradients sum = CnnModel::zeros(4, 3, 4);
  accumulate_cnn_gradients(m, cnn_forward(m, a), Stance::kNeutral, sum);
  accumulate_cnn_gradients(m, cnn_forward(m, b), Stance::kProRussian, sum);
  CnnGradients expect = cnn_gradients(m, cnn_forward(m, a), Stance::kNeutral);
  expect += cnn_gradients(m, cnn_forward(m, b), Stance::kProRussian);
  for (std::size_t i = 0; i < m.parameter_count(); ++i) EXPECT_NEAR(sum.parameter(i), expect.parameter(i), 1e-15);
}

// Class given by which of three disjoint trigger sets appears among noise tokens.
std::vector<LabeledMatrix> trigger_corpus(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, 0.5);
  const int dim = 6;
  std::vector<LabeledMatrix> out;
  for (int i = 0; i < n; ++i) {
    int c = i % 3;
    int len = 5 + static_cast<int>(gen() % 8);
    TweetMatrix m;
    m.rows = RowMatrix::Zero(20, dim);
    m.true_len = len;
    for (int r = 0; r < len; ++r) {
      for (int d = 0; d < dim; ++d) m.rows(r, d) = noise(gen);
    }
    int at = static_cast<int>(gen() % static_cast<unsigned>(len));
    m.rows.row(at).setZero();
    m.rows(at, 2 * c) = 2.0;
    m.rows(at, 2 * c + 1) = static_cast<double>(gen() % 2) + 1.0;
    out.push_back({m, stance_at(c)});
  }
  return out;
}

TEST(TrainCnn, LearnsTriggerCorpus) {
  auto data = trigger_corpus(150, 1);
  TrainConfig cfg = TrainConfig::cnn_defaults();
  cfg.learning_rate = 0.1;
  cfg.epochs = 60;
  CnnModel m = train_cnn(data, cfg, {20, 4});
  int correct = 0;
  for (const auto& ex : data) correct += cnn_predict(m, ex.m).argmax() == ex.y;
  EXPECT_GE(correct / double(data.size()), 0.95);
}

TEST(TrainCnn, ZeroEpochsReturnsInitialization) {
  auto data = trigger_corpus(9, 2);
  TrainConfig cfg = TrainConfig::cnn_defaults();
  cfg.epochs = 0;
  cfg.seed = 4;
  Rng rng = Rng::derive(4, "cnn-init");
  EXPECT_EQ(train_cnn(data, cfg, {5, 4}), init_cnn(6, {5, 4}, rng));
}

TEST(TrainCnn, DeterministicForSeed) {
  auto data = trigger_corpus(30, 3);
  TrainConfig cfg = TrainConfig::cnn_defaults();
  cfg.epochs = 3;
  TrainLog a, b;
  CnnModel ma = train_cnn(data, cfg, {6, 4}, &a);
  CnnModel mb = train_cnn(data, cfg, {6, 4}, &b);
  EXPECT_EQ(ma, mb);
  EXPECT_EQ(a.final_loss(), b.final_loss());
  EXPECT_EQ(a.epoch_loss.size(), 3u);
}

TEST(TrainCnn, DivergenceIsReported) {
  auto data = trigger_corpus(30, 3);
  for (auto& ex : data) ex.m.rows *= 1e100;
  TrainConfig cfg = TrainConfig::cnn_defaults();
  cfg.learning_rate = 1e50;
  EXPECT_THROW(train_cnn(data, cfg, {4, 4}), TrainingDiverged);
}

}  // namespace
}  // namespace stance
