#include "common.h"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace stance::cli {

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
  sub->add_option("--config", common.config, "INI/TOML file of option values; command-line flags win");
}

std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  std::set<std::string> given;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config" && i + 1 < args.size()) {
      path = args[++i];
      continue;
    }
    if (a.rfind("--config=", 0) == 0) {
      path = a.substr(9);
      continue;
    }
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') - 2));
    if (a.size() == 2 && a[0] == '-' && a[1] != '-') given.insert(a.substr(1));
    kept.push_back(a);
  }
  if (path.empty()) return args;

  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(path);
  } catch (const CLI::Error& e) {
    throw Error("config " + path + ": " + e.what());
  }
  for (const auto& item : items) {
    if (!item.parents.empty() || item.name == "++" || item.name == "--") continue;  // section markers
    if (given.count(item.name)) continue;
    if (item.inputs.size() == 1 && (item.inputs[0] == "true" || item.inputs[0] == "false")) {
      if (item.inputs[0] == "true") kept.push_back("--" + item.name);
      continue;
    }
    std::string joined;
    for (const auto& v : item.inputs) joined += (joined.empty() ? "" : ",") + v;
    kept.push_back("--" + item.name);
    kept.push_back(joined);
  }
  return kept;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp);
    out << content;
    if (!out.flush()) throw Error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("cannot rename " + tmp + " to " + path);
}

void add_corpus_inputs(CLI::App* sub, CorpusInputs& in, bool required) {
  auto* opt = sub->add_option("--corpus", in.corpus, "Tweet corpus (JSON lines or TSV)");
  if (required) opt->required();
  sub->add_option("--format", in.format, "Corpus format")
      ->check(CLI::IsMember({"jsonl", "tsv"}))
      ->capture_default_str();
  sub->add_option("--labels", in.labels, "Extra labels, tweet_id<TAB>class");
  sub->add_option("--aux", in.aux, "Auxiliary corpus used as extra training data");
  sub->add_option("--aux-label", in.aux_label, "Class assigned to auxiliary tweets");
  sub->add_flag("--propagate", in.propagate, "Copy original labels onto retweets and duplicates");
}

Corpus load_corpus(const CorpusInputs& in) {
  CorpusFormat fmt = in.format == "tsv" ? CorpusFormat::kTsv : CorpusFormat::kJsonLines;
  IngestReport report;
  Corpus corpus = ingest_corpus(in.corpus, fmt, &report);
  if (!report.malformed_lines.empty()) {
    log(in.corpus + ": skipped " + std::to_string(report.malformed_lines.size()) + " malformed line(s), first at " +
        std::to_string(report.malformed_lines.front()));
  }
  if (!in.labels.empty()) {
    LabelMap extra;
    for (const auto& [id, s] : load_labels(in.labels)) extra[id] = {s, Provenance::kManual};
    corpus = corpus.with_labels(extra);
  }
  if (!in.aux.empty()) {
    if (in.aux_label.empty()) throw InvalidArgument("--aux requires --aux-label");
    Corpus aux = ingest_corpus(in.aux, fmt);
    corpus = merge_auxiliary(corpus, aux, stance_from_string(in.aux_label));
  }
  if (in.propagate) corpus = propagate_labels(corpus);
  return corpus;
}

void log(const std::string& message) { std::cerr << "stance: " << message << '\n'; }

}  // namespace stance::cli
