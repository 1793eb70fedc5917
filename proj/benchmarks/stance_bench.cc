#include <random>

#include <benchmark/benchmark.h>

#include "stance/cnn.h"
#include "stance/graph.h"
#include "stance/metrics.h"
#include "stance/rng.h"
#include "stance/text.h"

namespace stance {
namespace {

void BM_Preprocess(benchmark::State& state) {
  const std::string text =
      "RT @news_desk: Buk launcher spotted near #Snizhne, see http://t.co/abc123 "
      "\xD0\x94\xD0\xBE\xD0\xBD\xD0\xB1\xD0\xB0\xD1\x81\xD1\x81 #MH17 3.5 million e-mail -- confirmed";
  for (auto _ : state) benchmark::DoNotOptimize(preprocess(text));
}
BENCHMARK(BM_Preprocess);

void BM_CnnForward(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(1);
  CnnModel m = init_cnn(dim, {100, 4}, rng);
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  TweetMatrix x;
  x.true_len = 20;
  x.rows = RowMatrix::Zero(30, dim);
  for (int r = 0; r < x.true_len; ++r) {
    for (int c = 0; c < dim; ++c) x.rows(r, c) = normal(gen);
  }
  for (auto _ : state) benchmark::DoNotOptimize(cnn_forward(m, x));
}
BENCHMARK(BM_CnnForward)->Arg(20)->Arg(100);

void BM_KCore(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 gen(2);
  RetweetGraph g;
  for (int i = 0; i < n * 8; ++i) {
    g.add_retweet("u" + std::to_string(gen() % n), "u" + std::to_string(gen() % n), "t" + std::to_string(i));
  }
  for (auto _ : state) benchmark::DoNotOptimize(k_core(g, 10));
}
BENCHMARK(BM_KCore)->Arg(1000)->Arg(10000);

void BM_PrCurve(benchmark::State& state) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u;
  std::vector<ScoredExample> s(static_cast<std::size_t>(state.range(0)));
  for (auto& e : s) e = {u(gen), u(gen) < 0.2};
  for (auto _ : state) benchmark::DoNotOptimize(auc(pr_curve(s)));
}
BENCHMARK(BM_PrCurve)->Arg(1000)->Arg(100000);

}  // namespace
}  // namespace stance

BENCHMARK_MAIN();
