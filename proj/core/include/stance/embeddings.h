#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace stance {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr int kDefaultMaxLen = 50;

// Token -> fixed-dimension vector table. Unknown tokens map to the OOV vector
// (all zeros).
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(int dim);

  int dim() const { return dim_; }
  std::size_t size() const { return index_.size(); }
  bool contains(std::string_view token) const;

  // Returns false if the token already exists. Throws on a dimension mismatch.
  bool add(std::string token, std::span<const double> vector);

  std::span<const double> lookup(std::string_view token) const;
  std::span<const double> oov_vector() const { return oov_; }

  // Tokens in insertion order.
  const std::vector<std::string>& tokens() const { return tokens_; }

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b);

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  int dim_ = 0;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
  std::vector<double> data_;
  std::vector<double> oov_;
};

struct EmbeddingLoadReport {
  std::size_t vectors = 0;
  std::size_t skipped_lines = 0;   // wrong arity or unparsable values
  std::size_t duplicate_tokens = 0;
  bool had_header = false;
};

// Whitespace-separated text format: optional `count dim` header, then
// `token v1 ... v_dim` per line. dim comes from the first data line.
EmbeddingTable load_embeddings(const std::string& path, EmbeddingLoadReport* report = nullptr);
EmbeddingTable parse_embeddings(std::string_view content, EmbeddingLoadReport* report = nullptr);

// `count dim` header plus one line per token, shortest round-trip decimals.
std::string format_embeddings(const EmbeddingTable& table);

// Mean of the token vectors; the OOV vector for an empty list.
Eigen::VectorXd embed_average(const EmbeddingTable& table, std::span<const std::string> tokens);

// Padded token-vector sequence fed to the convolutional model.
struct TweetMatrix {
  RowMatrix rows;  // max_len x dim; rows at and beyond true_len are zero
  int true_len = 0;
};

TweetMatrix embed_sequence(const EmbeddingTable& table, std::span<const std::string> tokens,
                           int max_len = kDefaultMaxLen);

}  // namespace stance
