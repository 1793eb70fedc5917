#pragma once

#include <cstdint>
#include <string>

#include "CLI11.hpp"
#include "stance/corpus.h"
#include "stance/embeddings.h"

namespace stance::cli {

// Options every subcommand accepts.
struct Common {
  std::uint64_t seed = 1;
  std::string config;  // consumed by expand_config before parsing
};

void add_common(CLI::App* sub, Common& common);

// Replaces `--config FILE` with `--key value` pairs read from FILE (INI/TOML,
// top-level keys only). Options already on the command line keep their value.
std::vector<std::string> expand_config(std::vector<std::string> args);

std::string read_file(const std::string& path);
// Writes via a temporary file and rename so readers never see a partial file.
void write_file(const std::string& path, const std::string& content);

struct CorpusInputs {
  std::string corpus;
  std::string format = "jsonl";
  std::string labels;       // extra tab-separated labels
  std::string aux;          // auxiliary corpus, train-only
  std::string aux_label;    // class given to every auxiliary tweet
  bool propagate = false;
};

void add_corpus_inputs(CLI::App* sub, CorpusInputs& in, bool required = true);
Corpus load_corpus(const CorpusInputs& in);

void log(const std::string& message);

}  // namespace stance::cli
