#include <filesystem>
#include <memory>
#include <optional>

#include "commands.h"
#include "common.h"
#include "json.hpp"
#include "stance/classifier.h"
#include "stance/cross_validate.h"
#include "stance/model_io.h"
#include "stance/rng.h"
#include "stance/sampling.h"
#include "stance/synthetic.h"

namespace stance::cli {
namespace {

struct ModelArgs {
  std::string kind = "cnn";
  std::string embeddings;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::optional<int> batch;
  std::optional<double> l2;
  int max_len = kDefaultMaxLen;
  int filters = kDefaultNumFilters;
  int width = kDefaultFilterWidth;
};

void add_model_args(CLI::App* sub, ModelArgs& m) {
  sub->add_option("--embeddings", m.embeddings, "Word vectors (text format)");
  sub->add_option("--epochs", m.epochs, "Training epochs");
  sub->add_option("--lr", m.lr, "Learning rate");
  sub->add_option("--batch", m.batch, "Mini-batch size");
  sub->add_option("--l2", m.l2, "L2 penalty on weight matrices");
  sub->add_option("--max-len", m.max_len, "Tokens kept per tweet (cnn)")->capture_default_str();
  sub->add_option("--filters", m.filters, "Convolution filters (cnn)")->capture_default_str();
  sub->add_option("--width", m.width, "Filter width in tokens (cnn)")->capture_default_str();
}

ModelOptions model_options(ModelKind kind, const ModelArgs& m, const EmbeddingTable* table) {
  ModelOptions o = default_options(kind, table);
  if (m.epochs) o.train.epochs = *m.epochs;
  if (m.lr) o.train.learning_rate = *m.lr;
  if (m.batch) o.train.batch_size = *m.batch;
  if (m.l2) o.train.l2 = *m.l2;
  o.max_len = m.max_len;
  o.shape = {m.filters, m.width};
  o.train.validate();
  return o;
}

bool needs_embeddings(ModelKind k) { return k == ModelKind::kLogReg || k == ModelKind::kCnn; }

std::unique_ptr<EmbeddingTable> load_table(const ModelArgs& m, bool required) {
  if (m.embeddings.empty()) {
    if (required) throw InvalidArgument("--embeddings is required for this model");
    return nullptr;
  }
  EmbeddingLoadReport report;
  auto table = std::make_unique<EmbeddingTable>(load_embeddings(m.embeddings, &report));
  log("loaded " + std::to_string(report.vectors) + " vectors of dim " + std::to_string(table->dim()) +
      (report.skipped_lines ? ", skipped " + std::to_string(report.skipped_lines) + " line(s)" : ""));
  return table;
}

struct PreprocessArgs {
  Common common;
  CorpusInputs in;
  std::string output;
};

void run_preprocess(const PreprocessArgs& a) {
  Corpus corpus = load_corpus(a.in);
  std::string out;
  for (const auto& t : corpus.tweets()) {
    const PreprocessedTweet& p = corpus.processed(t.id);
    const TweetGroup& g = corpus.group_of(t.id);
    nlohmann::ordered_json j;
    j["id"] = t.id;
    j["tokens"] = p.tokens;
    j["hashtags"] = p.hashtags;
    j["retweet"] = p.is_retweet;
    j["group"] = g.key;
    j["original"] = g.original_id;
    auto label = corpus.label(t.id);
    j["label"] = label ? nlohmann::ordered_json(std::string(to_string(label->stance))) : nlohmann::ordered_json(nullptr);
    out += j.dump() + "\n";
  }
  write_file(a.output, out);
  log("preprocessed " + std::to_string(corpus.size()) + " tweets into " + std::to_string(corpus.groups().size()) +
      " groups");
}

struct TrainArgs {
  Common common;
  CorpusInputs in;
  ModelArgs model;
  std::string output;
};

void run_train(const TrainArgs& a) {
  ModelKind kind = model_kind_from_string(a.model.kind);
  auto table = load_table(a.model, needs_embeddings(kind));
  Corpus corpus = load_corpus(a.in);
  auto clf = make_classifier(model_options(kind, a.model, table.get()));
  std::vector<Example> train;
  for (const auto& id : labeled_originals(corpus)) train.push_back(make_example(corpus, id));
  for (const auto& id : corpus.train_only()) {
    if (corpus.label(id)) train.push_back(make_example(corpus, id));
  }
  if (clf->wants_upsampling()) {
    Rng rng = Rng::derive(a.common.seed, "upsample");
    train = upsample(train, [](const Example& e) { return e.label; }, rng, kAllStances);
  }
  clf->fit(train, a.common.seed);
  write_file(a.output, clf->serialize());
  log("trained " + std::string(clf->name()) + " on " + std::to_string(train.size()) + " examples");
}

struct PredictArgs {
  Common common;
  CorpusInputs in;
  ModelArgs model;
  std::string model_file;
  std::string output;
};

void run_predict(const PredictArgs& a) {
  std::string dump = read_file(a.model_file);
  ModelKind kind = model_kind_from_string(peek_model_kind(dump));
  auto table = load_table(a.model, needs_embeddings(kind));
  auto clf = load_classifier(dump, model_options(kind, a.model, table.get()));
  Corpus corpus = load_corpus(a.in);
  Rng rng = Rng::derive(a.common.seed, "predict");
  std::vector<ScoredPrediction> preds;
  for (const auto& t : corpus.tweets()) {
    Example x = make_example(corpus, t.id);
    preds.push_back({t.id, x.label, clf->predict(x, rng), 0});
  }
  write_file(a.output, format_predictions(preds));
  log("wrote " + std::to_string(preds.size()) + " predictions");
}

struct EvaluateArgs {
  Common common;
  CorpusInputs in;
  ModelArgs model;
  std::vector<std::string> models{"random", "pmi", "logreg", "cnn"};
  int folds = kDefaultNumFolds;
  int threads = 1;
  double target = 0.8;
  std::string report;
  std::string json;
  std::string out_dir;
};

void run_evaluate(const EvaluateArgs& a) {
  std::vector<ModelKind> kinds;
  bool embeddings_needed = false;
  for (const auto& m : a.models) {
    kinds.push_back(model_kind_from_string(m));
    embeddings_needed |= needs_embeddings(kinds.back());
  }
  auto table = load_table(a.model, embeddings_needed);
  Corpus corpus = load_corpus(a.in);
  CvOptions cv{a.common.seed, a.folds, a.target, a.threads};
  std::vector<CvReport> reports;
  for (ModelKind kind : kinds) {
    ModelOptions opts = model_options(kind, a.model, table.get());
    reports.push_back(cross_validate(corpus, [&] { return make_classifier(opts); }, cv));
    log(reports.back().model + ": macro F1 " + std::to_string(reports.back().mean_macro_f1));
  }
  std::string text = format_report(reports);
  if (a.report.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_file(a.report, text);
  }
  if (!a.json.empty()) write_file(a.json, report_json(reports));
  if (!a.out_dir.empty()) {
    std::filesystem::create_directories(a.out_dir);
    for (const auto& r : reports) {
      std::string base = a.out_dir + "/" + r.model;
      write_file(base + ".predictions.tsv", format_predictions(r.predictions));
      if (r.probabilistic) {
        write_file(base + ".calibration.json", calibrations_json(r.calibrations));
        for (Stance s : kAllStances) {
          const auto& curve = r.pooled_curves[index_of(s)];
          if (curve) write_file(base + ".pr_" + std::string(to_string(s)) + ".tsv", format_curve(*curve));
        }
      }
    }
  }
}

struct CalibrateArgs {
  Common common;
  CorpusInputs in;
  std::string predictions;
  double target = 0.8;
  std::string output;
};

void run_calibrate(const CalibrateArgs& a) {
  Corpus corpus = load_corpus(a.in);
  auto preds = parse_predictions(read_file(a.predictions));
  std::vector<ScoredPrediction> scored;
  for (const auto& [id, p] : preds) {
    auto label = corpus.contains(id) ? corpus.label(id) : std::nullopt;
    if (label) scored.push_back({id, label->stance, p, 0});
  }
  if (scored.empty()) throw InvalidArgument("no prediction has a gold label in the corpus");
  std::vector<Calibration> cals;
  for (Stance s : {Stance::kProRussian, Stance::kProUkrainian}) {
    auto ex = one_vs_all(scored, s);
    bool any_positive = false;
    for (const auto& e : ex) any_positive |= e.positive;
    Calibration c;
    if (any_positive) {
      c = calibrate_threshold(ex, a.target, s);
    } else {
      c.stance = s;
      c.target_precision = a.target;
    }
    log(std::string(to_string(s)) + (c.achieved ? ": threshold " + std::to_string(c.threshold) + " precision " +
                                                      std::to_string(c.precision) + " recall " + std::to_string(c.recall)
                                                : ": target precision not reachable"));
    cals.push_back(c);
  }
  write_file(a.output, calibrations_json(cals));
}

struct SynthArgs {
  Common common;
  SyntheticOptions options;
  std::string out_dir;
};

void run_synth(SynthArgs a) {
  a.options.seed = a.common.seed;
  SyntheticData data = make_synthetic(a.options);
  std::filesystem::create_directories(a.out_dir);
  write_file(a.out_dir + "/corpus.jsonl", serialize_corpus(data.corpus));
  write_file(a.out_dir + "/embeddings.txt", format_embeddings(data.embeddings));
  log("wrote " + std::to_string(data.corpus.size()) + " tweets and " + std::to_string(data.embeddings.size()) +
      " vectors to " + a.out_dir);
}

}  // namespace

void register_model_commands(CLI::App& app) {
  {
    auto args = std::make_shared<PreprocessArgs>();
    auto* sub = app.add_subcommand("preprocess", "Tokenize and group a corpus");
    add_common(sub, args->common);
    add_corpus_inputs(sub, args->in);
    sub->add_option("--output", args->output, "Output JSON lines")->required();
    sub->callback([args] { run_preprocess(*args); });
  }
  {
    auto args = std::make_shared<TrainArgs>();
    auto* sub = app.add_subcommand("train", "Fit a model on all labeled tweets");
    add_common(sub, args->common);
    add_corpus_inputs(sub, args->in);
    sub->add_option("--model", args->model.kind, "random|pmi|logreg|cnn")->capture_default_str();
    add_model_args(sub, args->model);
    sub->add_option("--output", args->output, "Model dump")->required();
    sub->callback([args] { run_train(*args); });
  }
  {
    auto args = std::make_shared<PredictArgs>();
    auto* sub = app.add_subcommand("predict", "Score every tweet with a trained model");
    add_common(sub, args->common);
    add_corpus_inputs(sub, args->in);
    add_model_args(sub, args->model);
    sub->add_option("--model-file", args->model_file, "Model dump from train")->required();
    sub->add_option("--output", args->output, "Predictions TSV")->required();
    sub->callback([args] { run_predict(*args); });
  }
  {
    auto args = std::make_shared<EvaluateArgs>();
    auto* sub = app.add_subcommand("evaluate", "Cross-validate models");
    add_common(sub, args->common);
    add_corpus_inputs(sub, args->in);
    add_model_args(sub, args->model);
    sub->add_option("--models", args->models, "Models to compare")->delimiter(',')->capture_default_str();
    sub->add_option("--folds", args->folds, "Number of random splits")->capture_default_str();
    sub->add_option("--threads", args->threads, "Folds run concurrently")->capture_default_str();
    sub->add_option("--target-precision", args->target, "Calibration target")->capture_default_str();
    sub->add_option("--report", args->report, "Text report (stdout if omitted)");
    sub->add_option("--json", args->json, "JSON metrics");
    sub->add_option("--out-dir", args->out_dir, "Directory for predictions, curves and calibrations");
    sub->callback([args] { run_evaluate(*args); });
  }
  {
    auto args = std::make_shared<CalibrateArgs>();
    auto* sub = app.add_subcommand("calibrate", "Pick per-class thresholds reaching a precision target");
    add_common(sub, args->common);
    add_corpus_inputs(sub, args->in);
    sub->add_option("--predictions", args->predictions, "Predictions TSV")->required();
    sub->add_option("--target-precision", args->target, "Required precision")->capture_default_str();
    sub->add_option("--output", args->output, "Calibration JSON")->required();
    sub->callback([args] { run_calibrate(*args); });
  }
  {
    auto args = std::make_shared<SynthArgs>();
    auto* sub = app.add_subcommand("synth", "Generate a synthetic labeled corpus and word vectors");
    add_common(sub, args->common);
    sub->add_option("--out-dir", args->out_dir, "Output directory")->required();
    sub->add_option("--tweets", args->options.num_tweets, "Labeled originals")->capture_default_str();
    sub->add_option("--retweets", args->options.num_retweets, "Unlabeled retweets")->capture_default_str();
    sub->add_option("--users", args->options.num_users, "Distinct users")->capture_default_str();
    sub->add_option("--label-noise", args->options.label_noise, "Chance a label is redrawn from the prior")
        ->capture_default_str();
    sub->add_option("--filler-scale", args->options.filler_scale, "Spread of filler word vectors")
        ->capture_default_str();
    sub->add_option("--dim", args->options.dim, "Vector dimension")->capture_default_str();
    sub->callback([args] { run_synth(*args); });
  }
}

}  // namespace stance::cli
