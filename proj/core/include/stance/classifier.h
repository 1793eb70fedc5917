#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stance/cnn.h"
#include "stance/corpus.h"
#include "stance/embeddings.h"
#include "stance/logreg.h"
#include "stance/pmi.h"
#include "stance/prob.h"
#include "stance/train_config.h"

namespace stance {

// What a classifier sees of one tweet.
struct Example {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<std::string> hashtags;
  Stance label = Stance::kNeutral;
};

// Example for a corpus tweet; the label is the corpus label or Neutral.
Example make_example(const Corpus& corpus, std::string_view id);

// Common interface of the stance models so the evaluation protocol can treat
// them uniformly. predict() is const and keeps no state, so a fitted model may
// be shared by concurrent callers, each with its own Rng.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::string_view name() const = 0;
  // True when predict() yields graded scores suitable for PR curves.
  virtual bool probabilistic() const = 0;
  // True when the training protocol balances classes before fit().
  virtual bool wants_upsampling() const { return false; }

  virtual void fit(std::span<const Example> train, std::uint64_t seed) = 0;
  virtual ProbDist predict(const Example& x, Rng& rng) const = 0;

  // Text dump of the fitted parameters (see model_io.h).
  virtual std::string serialize() const = 0;
};

enum class ModelKind { kRandom, kHashtagPmi, kLogReg, kCnn };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);  // random|pmi|logreg|cnn

struct ModelOptions {
  ModelKind kind = ModelKind::kCnn;
  TrainConfig train = TrainConfig::cnn_defaults();
  CnnShape shape;
  int max_len = kDefaultMaxLen;
  // Required for kLogReg and kCnn; must outlive the classifier.
  const EmbeddingTable* embeddings = nullptr;
};

// Options with the per-model default TrainConfig.
ModelOptions default_options(ModelKind kind, const EmbeddingTable* embeddings);

std::unique_ptr<Classifier> make_classifier(const ModelOptions& options);

// Rebuilds a fitted classifier from serialize() output.
std::unique_ptr<Classifier> load_classifier(std::string_view dump, const ModelOptions& options);

class RandomClassifier final : public Classifier {
 public:
  std::string_view name() const override { return "random"; }
  bool probabilistic() const override { return false; }
  void fit(std::span<const Example>, std::uint64_t) override {}
  ProbDist predict(const Example& x, Rng& rng) const override;
  std::string serialize() const override;
};

class HashtagPmiClassifier final : public Classifier {
 public:
  HashtagPmiClassifier() = default;
  explicit HashtagPmiClassifier(PmiTable table) : table_(std::move(table)) {}

  std::string_view name() const override { return "hs_pmi"; }
  bool probabilistic() const override { return false; }
  void fit(std::span<const Example> train, std::uint64_t seed) override;
  ProbDist predict(const Example& x, Rng& rng) const override;
  std::string serialize() const override;

  const PmiTable& table() const { return table_; }

 private:
  PmiTable table_;
};

class LogRegClassifier final : public Classifier {
 public:
  LogRegClassifier(const EmbeddingTable& embeddings, TrainConfig cfg);
  LogRegClassifier(const EmbeddingTable& embeddings, LogRegModel model);

  std::string_view name() const override { return "logreg"; }
  bool probabilistic() const override { return true; }
  bool wants_upsampling() const override { return true; }
  void fit(std::span<const Example> train, std::uint64_t seed) override;
  ProbDist predict(const Example& x, Rng& rng) const override;
  std::string serialize() const override;

  const LogRegModel& model() const { return model_; }
  const TrainLog& train_log() const { return log_; }

 private:
  const EmbeddingTable* embeddings_;
  TrainConfig cfg_;
  LogRegModel model_;
  TrainLog log_;
};

class CnnClassifier final : public Classifier {
 public:
  CnnClassifier(const EmbeddingTable& embeddings, TrainConfig cfg, CnnShape shape, int max_len);
  CnnClassifier(const EmbeddingTable& embeddings, CnnModel model, int max_len);

  std::string_view name() const override { return "cnn"; }
  bool probabilistic() const override { return true; }
  bool wants_upsampling() const override { return true; }
  void fit(std::span<const Example> train, std::uint64_t seed) override;
  ProbDist predict(const Example& x, Rng& rng) const override;
  std::string serialize() const override;

  const CnnModel& model() const { return model_; }
  const TrainLog& train_log() const { return log_; }
  int max_len() const { return max_len_; }

 private:
  const EmbeddingTable* embeddings_;
  TrainConfig cfg_;
  CnnShape shape_;
  int max_len_;
  CnnModel model_;
  TrainLog log_;
};

}  // namespace stance
