#include "stance/classifier.h"

#include "stance/model_io.h"
#include "stance/sampling.h"

namespace stance {

Example make_example(const Corpus& corpus, std::string_view id) {
  const PreprocessedTweet& p = corpus.processed(id);
  Example ex;
  ex.id = std::string(id);
  ex.tokens = p.tokens;
  ex.hashtags = p.hashtags;
  if (auto l = corpus.label(id)) ex.label = l->stance;
  return ex;
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kRandom:
      return "random";
    case ModelKind::kHashtagPmi:
      return "pmi";
    case ModelKind::kLogReg:
      return "logreg";
    case ModelKind::kCnn:
      return "cnn";
  }
  return "cnn";
}

ModelKind model_kind_from_string(std::string_view name) {
  for (ModelKind k : {ModelKind::kRandom, ModelKind::kHashtagPmi, ModelKind::kLogReg, ModelKind::kCnn}) {
    if (to_string(k) == name) return k;
  }
  if (name == "hs_pmi") return ModelKind::kHashtagPmi;
  throw InvalidArgument("unknown model '" + std::string(name) + "' (expected random, pmi, logreg or cnn)");
}

ModelOptions default_options(ModelKind kind, const EmbeddingTable* embeddings) {
  ModelOptions o;
  o.kind = kind;
  o.train = kind == ModelKind::kCnn ? TrainConfig::cnn_defaults() : TrainConfig::logreg_defaults();
  o.embeddings = embeddings;
  return o;
}

namespace {

const EmbeddingTable& require_embeddings(const ModelOptions& options) {
  if (!options.embeddings) {
    throw InvalidArgument("model '" + std::string(to_string(options.kind)) + "' needs an embedding table");
  }
  return *options.embeddings;
}

}  // namespace

std::unique_ptr<Classifier> make_classifier(const ModelOptions& options) {
  switch (options.kind) {
    case ModelKind::kRandom:
      return std::make_unique<RandomClassifier>();
    case ModelKind::kHashtagPmi:
      return std::make_unique<HashtagPmiClassifier>();
    case ModelKind::kLogReg:
      return std::make_unique<LogRegClassifier>(require_embeddings(options), options.train);
    case ModelKind::kCnn:
      return std::make_unique<CnnClassifier>(require_embeddings(options), options.train, options.shape,
                                             options.max_len);
  }
  throw InvalidArgument("unknown model kind");
}

std::unique_ptr<Classifier> load_classifier(std::string_view dump, const ModelOptions& options) {
  const std::string kind = peek_model_kind(dump);
  if (kind == "random") return std::make_unique<RandomClassifier>();
  if (kind == "pmi") return std::make_unique<HashtagPmiClassifier>(parse_pmi(dump));
  if (kind == "logreg") {
    return std::make_unique<LogRegClassifier>(require_embeddings(options), parse_logreg(dump));
  }
  if (kind == "cnn") {
    int max_len = options.max_len;
    CnnModel model = parse_cnn(dump, &max_len);
    return std::make_unique<CnnClassifier>(require_embeddings(options), std::move(model), max_len);
  }
  throw ParseError("model dump: unknown kind '" + kind + "'");
}

ProbDist RandomClassifier::predict(const Example&, Rng& rng) const {
  return ProbDist::one_hot(random_predict(rng));
}

std::string RandomClassifier::serialize() const { return "stance-model 1\nkind random\nend\n"; }

void HashtagPmiClassifier::fit(std::span<const Example> train, std::uint64_t) {
  std::vector<HashtagExample> labeled;
  labeled.reserve(train.size());
  for (const auto& ex : train) labeled.push_back({ex.hashtags, ex.label});
  table_ = compute_pmi(labeled);
}

ProbDist HashtagPmiClassifier::predict(const Example& x, Rng& rng) const {
  return ProbDist::one_hot(hashtag_predict(table_, x.hashtags, rng));
}

std::string HashtagPmiClassifier::serialize() const { return dump_pmi(table_); }

LogRegClassifier::LogRegClassifier(const EmbeddingTable& embeddings, TrainConfig cfg)
    : embeddings_(&embeddings), cfg_(cfg), model_(LogRegModel::zeros(embeddings.dim())) {}

LogRegClassifier::LogRegClassifier(const EmbeddingTable& embeddings, LogRegModel model)
    : embeddings_(&embeddings), cfg_(TrainConfig::logreg_defaults()), model_(std::move(model)) {
  if (model_.dim() != embeddings.dim()) throw InvalidArgument("logreg model and embeddings disagree on dim");
}

void LogRegClassifier::fit(std::span<const Example> train, std::uint64_t seed) {
  std::vector<LabeledVector> data;
  data.reserve(train.size());
  for (const auto& ex : train) data.push_back({embed_average(*embeddings_, ex.tokens), ex.label});
  TrainConfig cfg = cfg_;
  cfg.seed = seed;
  log_ = {};
  model_ = train_logreg(data, cfg, &log_);
}

ProbDist LogRegClassifier::predict(const Example& x, Rng&) const {
  return predict_logreg(model_, embed_average(*embeddings_, x.tokens));
}

std::string LogRegClassifier::serialize() const { return dump_logreg(model_); }

CnnClassifier::CnnClassifier(const EmbeddingTable& embeddings, TrainConfig cfg, CnnShape shape, int max_len)
    : embeddings_(&embeddings),
      cfg_(cfg),
      shape_(shape),
      max_len_(max_len),
      model_(CnnModel::zeros(embeddings.dim(), shape.num_filters, shape.width)) {
  if (max_len < shape.width) throw InvalidArgument("max_len must be at least the filter width");
}

CnnClassifier::CnnClassifier(const EmbeddingTable& embeddings, CnnModel model, int max_len)
    : embeddings_(&embeddings),
      cfg_(TrainConfig::cnn_defaults()),
      shape_{model.num_filters(), model.width},
      max_len_(max_len),
      model_(std::move(model)) {
  if (model_.dim() != embeddings.dim()) throw InvalidArgument("cnn model and embeddings disagree on dim");
}

void CnnClassifier::fit(std::span<const Example> train, std::uint64_t seed) {
  std::vector<LabeledMatrix> data;
  data.reserve(train.size());
  for (const auto& ex : train) data.push_back({embed_sequence(*embeddings_, ex.tokens, max_len_), ex.label});
  TrainConfig cfg = cfg_;
  cfg.seed = seed;
  log_ = {};
  model_ = train_cnn(data, cfg, shape_, &log_);
}

ProbDist CnnClassifier::predict(const Example& x, Rng&) const {
  return cnn_predict(model_, embed_sequence(*embeddings_, x.tokens, max_len_));
}

std::string CnnClassifier::serialize() const { return dump_cnn(model_, max_len_); }

}  // namespace stance
