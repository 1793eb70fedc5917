#include "stance/embeddings.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "stance/types.h"

namespace stance {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool is_uint(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

EmbeddingTable::EmbeddingTable(int dim) : dim_(dim), oov_(static_cast<std::size_t>(dim), 0.0) {
  if (dim <= 0) throw InvalidArgument("embedding dimension must be positive");
}

bool EmbeddingTable::contains(std::string_view token) const { return index_.find(token) != index_.end(); }

bool EmbeddingTable::add(std::string token, std::span<const double> vector) {
  if (static_cast<int>(vector.size()) != dim_) {
    throw InvalidArgument("embedding for '" + token + "' has length " + std::to_string(vector.size()) +
                          ", expected " + std::to_string(dim_));
  }
  if (contains(token)) return false;
  index_.emplace(token, tokens_.size());
  tokens_.push_back(std::move(token));
  data_.insert(data_.end(), vector.begin(), vector.end());
  return true;
}

std::span<const double> EmbeddingTable::lookup(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return oov_;
  return std::span<const double>(data_).subspan(it->second * static_cast<std::size_t>(dim_),
                                                static_cast<std::size_t>(dim_));
}

bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
  if (a.dim_ != b.dim_ || a.size() != b.size()) return false;
  for (const auto& token : a.tokens_) {
    if (!b.contains(token)) return false;
    auto va = a.lookup(token);
    auto vb = b.lookup(token);
    if (!std::equal(va.begin(), va.end(), vb.begin())) return false;
  }
  return true;
}

EmbeddingTable parse_embeddings(std::string_view content, EmbeddingLoadReport* report) {
  EmbeddingLoadReport local;
  EmbeddingTable table;
  std::size_t data_lines = 0;
  bool first_line = true;
  std::vector<double> values;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    const auto fields = split_ws(content.substr(start, end - start));
    start = end + 1;
    if (fields.empty()) continue;
    if (first_line) {
      first_line = false;
      if (fields.size() == 2 && is_uint(fields[0]) && is_uint(fields[1])) {
        local.had_header = true;
        continue;
      }
    }
    ++data_lines;
    if (table.dim() == 0) {
      if (fields.size() < 2) {
        ++local.skipped_lines;
        continue;
      }
      table = EmbeddingTable(static_cast<int>(fields.size() - 1));
    }
    if (static_cast<int>(fields.size()) != table.dim() + 1) {
      ++local.skipped_lines;
      continue;
    }
    values.resize(static_cast<std::size_t>(table.dim()));
    bool ok = true;
    for (int k = 0; k < table.dim() && ok; ++k) ok = parse_double(fields[k + 1], values[k]);
    if (!ok) {
      ++local.skipped_lines;
      continue;
    }
    if (!table.add(std::string(fields[0]), values)) ++local.duplicate_tokens;
  }
  if (data_lines == 0 || table.size() == 0) throw ParseError("embedding file has no vectors");
  if (2 * local.skipped_lines > data_lines) {
    throw ParseError("embedding file is inconsistent: " + std::to_string(local.skipped_lines) + " of " +
                     std::to_string(data_lines) + " lines have the wrong dimension");
  }
  local.vectors = table.size();
  if (report) *report = local;
  return table;
}

EmbeddingTable load_embeddings(const std::string& path, EmbeddingLoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_embeddings(buf.str(), report);
}

Eigen::VectorXd embed_average(const EmbeddingTable& table, std::span<const std::string> tokens) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(table.dim());
  if (tokens.empty()) {
    auto oov = table.oov_vector();
    return Eigen::Map<const Eigen::VectorXd>(oov.data(), table.dim());
  }
  for (const auto& token : tokens) {
    auto v = table.lookup(token);
    sum += Eigen::Map<const Eigen::VectorXd>(v.data(), table.dim());
  }
  return sum / static_cast<double>(tokens.size());
}

TweetMatrix embed_sequence(const EmbeddingTable& table, std::span<const std::string> tokens, int max_len) {
  if (max_len <= 0) throw InvalidArgument("embed_sequence: max_len must be positive");
  TweetMatrix m;
  m.rows = RowMatrix::Zero(max_len, table.dim());
  m.true_len = std::min<int>(max_len, static_cast<int>(tokens.size()));
  for (int i = 0; i < m.true_len; ++i) {
    auto v = table.lookup(tokens[static_cast<std::size_t>(i)]);
    m.rows.row(i) = Eigen::Map<const Eigen::RowVectorXd>(v.data(), table.dim());
  }
  return m;
}

std::string format_embeddings(const EmbeddingTable& table) {
  std::string out = std::to_string(table.size()) + " " + std::to_string(table.dim()) + "\n";
  char buf[32];
  for (const auto& tok : table.tokens()) {
    out += tok;
    for (double v : table.lookup(tok)) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
      out += ' ';
      out.append(buf, end);
    }
    out += '\n';
  }
  return out;
}

}  // namespace stance
