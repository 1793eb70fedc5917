#include "stance/sampling.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "stance/prob.h"
#include "stance/rng.h"

namespace stance {
namespace {

constexpr Stance R = Stance::kProRussian;
constexpr Stance U = Stance::kProUkrainian;
constexpr Stance N = Stance::kNeutral;

std::array<int, 3> class_counts(const std::vector<Stance>& labels, const std::vector<std::size_t>& idx) {
  std::array<int, 3> c{};
  for (std::size_t i : idx) ++c[index_of(labels[i])];
  return c;
}

std::vector<Stance> make_labels(int r, int u, int n) {
  std::vector<Stance> v;
  v.insert(v.end(), r, R);
  v.insert(v.end(), u, U);
  v.insert(v.end(), n, N);
  return v;
}

TEST(Upsample, BalancesToLargestClass) {
  auto labels = make_labels(2, 3, 5);
  Rng rng(1);
  auto idx = upsample_indices(labels, rng, kAllStances);
  EXPECT_EQ(class_counts(labels, idx), (std::array<int, 3>{5, 5, 5}));
}

TEST(Upsample, BalancedInputUnchanged) {
  auto labels = make_labels(3, 3, 3);
  Rng rng(1);
  auto idx = upsample_indices(labels, rng);
  std::vector<std::size_t> identity(9);
  std::iota(identity.begin(), identity.end(), 0);
  EXPECT_EQ(idx, identity);
}

TEST(Upsample, TwoClassesKeepAllOriginals) {
  auto labels = make_labels(1, 0, 4);
  Rng rng(5);
  auto idx = upsample_indices(labels, rng);
  EXPECT_EQ(class_counts(labels, idx), (std::array<int, 3>{4, 0, 4}));
  for (std::size_t i = 0; i < labels.size(); ++i) EXPECT_EQ(idx[i], i);
}

TEST(Upsample, MissingRequiredClassFails) {
  auto labels = make_labels(1, 0, 4);
  Rng rng(5);
  EXPECT_THROW(upsample_indices(labels, rng, kAllStances), InvalidArgument);
  std::vector<Stance> empty;
  EXPECT_THROW(upsample_indices(empty, rng), InvalidArgument);
}

TEST(UpsampleProperty, CountsExactlyEqualAndDeterministic) {
  std::mt19937_64 gen(12);
  for (int round = 0; round < 200; ++round) {
    auto labels = make_labels(1 + static_cast<int>(gen() % 9), 1 + static_cast<int>(gen() % 9),
                              1 + static_cast<int>(gen() % 30));
    std::shuffle(labels.begin(), labels.end(), gen);
    Rng a(round), b(round);
    auto idx = upsample_indices(labels, a, kAllStances);
    EXPECT_EQ(idx, upsample_indices(labels, b, kAllStances));
    auto c = class_counts(labels, idx);
    EXPECT_EQ(c[0], c[1]);
    EXPECT_EQ(c[1], c[2]);
    std::vector<int> seen(labels.size());
    for (std::size_t i : idx) ++seen[i];
    for (int s : seen) EXPECT_GE(s, 1);
  }
}

TEST(RandomPredict, UniformAndReproducible) {
  Rng rng(77);
  std::array<int, 3> counts{};
  const int draws = 30000;
  std::vector<Stance> seq;
  for (int i = 0; i < draws; ++i) {
    seq.push_back(random_predict(rng));
    ++counts[index_of(seq.back())];
  }
  for (int c : counts) {
    EXPECT_GE(c / double(draws), 0.32);
    EXPECT_LE(c / double(draws), 0.35);
  }
  Rng again(77);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(random_predict(again), seq[i]);
}

TEST(Softmax, ClosedForms) {
  ProbDist z = softmax(Eigen::Vector3d::Zero());
  for (double p : z.probs) EXPECT_NEAR(p, 1.0 / 3, 1e-15);
  ProbDist h = softmax(Eigen::Vector3d(std::log(2.0), 0, 0));
  EXPECT_NEAR(h.probs[0], 0.5, 1e-15);
  EXPECT_NEAR(h.probs[1], 0.25, 1e-15);
  EXPECT_NEAR(h.probs[2], 0.25, 1e-15);
}

TEST(SoftmaxProperty, ShiftInvariantNormalizedNonNegative) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-800, 800);
  for (int i = 0; i < 2000; ++i) {
    Eigen::Vector3d l(u(gen), u(gen), u(gen));
    ProbDist p = softmax(l);
    double sum = p.probs[0] + p.probs[1] + p.probs[2];
    EXPECT_NEAR(sum, 1.0, 1e-9);
    for (double x : p.probs) EXPECT_GE(x, 0.0);
    ProbDist q = softmax(l + Eigen::Vector3d::Constant(u(gen)));
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(p.probs[c], q.probs[c], 1e-12);
  }
}

TEST(ProbDist, ArgmaxPrefersLowestIndexOnTie) {
  EXPECT_EQ(ProbDist::uniform().argmax(), R);
  EXPECT_EQ((ProbDist{{0.2, 0.4, 0.4}}).argmax(), U);
  EXPECT_EQ(ProbDist::one_hot(N).argmax(), N);
}

}  // namespace
}  // namespace stance
