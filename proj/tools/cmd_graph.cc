#include <memory>

#include "commands.h"
#include "common.h"
#include "stance/cross_validate.h"
#include "stance/graph.h"
#include "stance/triage.h"

namespace stance::cli {
namespace {

struct BuildArgs {
  Common common;
  CorpusInputs in;
  std::string output;
};

void run_build(const BuildArgs& a) {
  Corpus corpus = load_corpus(a.in);
  GraphBuildReport report;
  RetweetGraph g = build_graph(corpus, &report);
  write_file(a.output, format_graph(g));
  log(std::to_string(g.num_nodes()) + " users, " + std::to_string(g.num_edges()) + " edges from " +
      std::to_string(report.retweets) + " retweets (" + std::to_string(report.self_retweets) + " self, " +
      std::to_string(report.unresolved) + " unresolved)");
}

struct KcoreArgs {
  Common common;
  std::string graph;
  int k = 10;
  std::string output;
};

void run_kcore(const KcoreArgs& a) {
  RetweetGraph g = parse_graph(read_file(a.graph));
  RetweetGraph core = k_core(g, a.k);
  write_file(a.output, format_graph(core));
  log("k=" + std::to_string(a.k) + " core: " + std::to_string(core.num_nodes()) + " users, " +
      std::to_string(core.num_edges()) + " edges");
}

struct LabelArgs {
  Common common;
  CorpusInputs in;
  std::string graph;
  std::string output;
  std::string stats;
};

void run_label(const LabelArgs& a) {
  Corpus corpus = load_corpus(a.in);
  RetweetGraph g = label_edges(parse_graph(read_file(a.graph)), corpus.labels());
  write_file(a.output, format_graph(g));
  std::string summary = format_edge_summary(summarize_edges(g, {}));
  if (a.stats.empty()) {
    std::fputs(summary.c_str(), stdout);
  } else {
    write_file(a.stats, summary);
  }
}

struct CandidatesArgs {
  Common common;
  CorpusInputs in;
  std::string graph;
  std::string predictions;
  std::string calibration;
  std::string output;
  std::string queue;
  std::string stats;
};

void run_candidates(const CandidatesArgs& a) {
  RetweetGraph g = parse_graph(read_file(a.graph));
  auto preds = parse_predictions(read_file(a.predictions));
  auto cals = parse_calibrations(read_file(a.calibration));
  auto cands = candidate_edges(g, preds, cals);
  write_file(a.output, candidates_json(cands));
  if (!a.queue.empty()) {
    std::unique_ptr<Corpus> corpus;
    if (!a.in.corpus.empty()) corpus = std::make_unique<Corpus>(load_corpus(a.in));
    auto queue = build_queue(cands, corpus.get());
    write_file(a.queue, format_queue(queue));
    log(std::to_string(queue.size()) + " tweets queued for review");
  }
  std::string summary = format_edge_summary(summarize_edges(g, cands));
  if (a.stats.empty()) {
    std::fputs(summary.c_str(), stdout);
  } else {
    write_file(a.stats, summary);
  }
}

struct ApplyArgs {
  Common common;
  CorpusInputs in;
  std::string graph;
  std::string queue;
  std::string log_path;
  std::string output;
  std::string labels_out;
  std::string stats;
};

void run_apply(const ApplyArgs& a) {
  Corpus corpus = load_corpus(a.in);
  RetweetGraph g = parse_graph(read_file(a.graph));
  auto queue = load_queue(a.queue);
  ReplayResult replay = read_decision_log(a.log_path);
  if (!replay.warning.empty()) log(a.log_path + ": " + replay.warning);
  auto reviewed = reviewed_tweets(queue, replay.decisions);
  g = label_edges(g, corpus.labels());
  ApplyResult r = apply_decisions(g, corpus.labels(), reviewed);
  for (const auto& msg : r.rejected) log("rejected: " + msg);
  write_file(a.output, format_graph(r.graph));
  if (!a.labels_out.empty()) write_file(a.labels_out, serialize_labels(r.labels));
  std::string summary = format_edge_summary(summarize_edges(g, {}, &r.stats)) + stats_json(r.stats) + "\n";
  if (a.stats.empty()) {
    std::fputs(summary.c_str(), stdout);
  } else {
    write_file(a.stats, summary);
  }
}

}  // namespace

void register_graph_commands(CLI::App& app) {
  auto* graph = app.add_subcommand("graph", "Retweet network operations");
  graph->require_subcommand(1);
  {
    auto args = std::make_shared<BuildArgs>();
    auto* sub = graph->add_subcommand("build", "Build the retweet graph from a corpus");
    add_common(sub, args->common);
    add_corpus_inputs(sub, args->in);
    sub->add_option("--output", args->output, "Edge list")->required();
    sub->callback([args] { run_build(*args); });
  }
  {
    auto args = std::make_shared<KcoreArgs>();
    auto* sub = graph->add_subcommand("kcore", "Extract the k-core");
    add_common(sub, args->common);
    sub->add_option("--graph", args->graph, "Edge list")->required();
    sub->add_option("-k,--k", args->k, "Minimum distinct neighbours")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--output", args->output, "Edge list")->required();
    sub->callback([args] { run_kcore(*args); });
  }
  {
    auto args = std::make_shared<LabelArgs>();
    auto* sub = graph->add_subcommand("label", "Label edges from tweet labels");
    add_common(sub, args->common);
    add_corpus_inputs(sub, args->in);
    sub->add_option("--graph", args->graph, "Edge list")->required();
    sub->add_option("--output", args->output, "Labeled edge list")->required();
    sub->add_option("--stats", args->stats, "Edge summary (stdout if omitted)");
    sub->callback([args] { run_label(*args); });
  }
  {
    auto args = std::make_shared<CandidatesArgs>();
    auto* sub = graph->add_subcommand("candidates", "Confident predictions on unlabeled edges");
    add_common(sub, args->common);
    add_corpus_inputs(sub, args->in, false);
    sub->add_option("--graph", args->graph, "Labeled edge list")->required();
    sub->add_option("--predictions", args->predictions, "Predictions TSV")->required();
    sub->add_option("--calibration", args->calibration, "Calibration JSON")->required();
    sub->add_option("--output", args->output, "Candidate JSON")->required();
    sub->add_option("--queue", args->queue, "Also write a triage queue");
    sub->add_option("--stats", args->stats, "Edge summary (stdout if omitted)");
    sub->callback([args] { run_candidates(*args); });
  }
  {
    auto args = std::make_shared<ApplyArgs>();
    auto* sub = graph->add_subcommand("apply", "Merge triage decisions into the graph");
    add_common(sub, args->common);
    add_corpus_inputs(sub, args->in);
    sub->add_option("--graph", args->graph, "Edge list")->required();
    sub->add_option("--queue", args->queue, "Triage queue")->required();
    sub->add_option("--log", args->log_path, "Decision log")->required();
    sub->add_option("--output", args->output, "Relabeled edge list")->required();
    sub->add_option("--labels-out", args->labels_out, "Merged tweet labels");
    sub->add_option("--stats", args->stats, "Summary (stdout if omitted)");
    sub->callback([args] { run_apply(*args); });
  }
}

}  // namespace stance::cli
