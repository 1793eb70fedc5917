#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stance {

inline constexpr std::string_view kUrlToken = "<url>";
inline constexpr std::string_view kUserToken = "<user>";
inline constexpr std::string_view kRetweetToken = "<rt>";

bool is_placeholder(std::string_view token);

// Output of the tweet normalization pipeline.
//
// Rules, applied in order:
//   * a leading `RT @name:` becomes <rt> and marks the tweet as a retweet
//   * URLs become <url>, @mentions become <user>
//   * text is lowercased and split on whitespace and punctuation boundaries
//     (intra-word dashes and `.`/`,`/`:` between alphanumerics stay inside)
//   * tokens containing any symbol other than alphanumerics, `-` and `#` are
//     dropped, `#` is removed from the survivors, and a survivor must still
//     contain at least one alphanumeric character
//
// canonical_key joins the non-placeholder tokens with single spaces, so a
// retweet and the tweet it reposts share a key.
struct PreprocessedTweet {
  std::string tweet_id;
  std::vector<std::string> tokens;
  bool is_retweet = false;
  std::string canonical_key;
  // Handle named in the `RT @name:` prefix, as written (case preserved).
  std::optional<std::string> retweet_of;
  // Lowercased hashtag bodies (no `#`), sorted and unique.
  std::vector<std::string> hashtags;

  // Flag for tweets that reduce to nothing (e.g. a bare URL).
  bool empty() const { return tokens.empty(); }
};

PreprocessedTweet preprocess(std::string_view raw_text);
PreprocessedTweet preprocess(std::string_view tweet_id, std::string_view raw_text);

// Lowercases ASCII, Latin-1, Greek and Cyrillic letters; other bytes pass through.
std::string lowercase_utf8(std::string_view text);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace stance
