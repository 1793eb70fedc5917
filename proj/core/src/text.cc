#include "stance/text.h"

#include <algorithm>
#include <cstdint>

namespace stance {
namespace {

struct CodePoint {
  char32_t value;
  std::size_t begin;  // byte offset into the source
  std::size_t size;   // encoded length in bytes
};

std::vector<CodePoint> decode_utf8(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = b0;
    if (b0 >= 0xF0 && b0 < 0xF8) {
      len = 4;
      cp = b0 & 0x07;
    } else if (b0 >= 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if (b0 >= 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    }
    if (len > 1) {
      bool ok = i + len <= s.size();
      for (std::size_t k = 1; ok && k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) ok = false;
        cp = (cp << 6) | (b & 0x3F);
      }
      if (!ok) {
        // Invalid sequence: treat the lead byte as U+FFFD (a symbol).
        len = 1;
        cp = 0xFFFD;
      }
    } else if (b0 >= 0x80) {
      cp = 0xFFFD;
    }
    out.push_back({cp, i, len});
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

char32_t to_lower(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c < 0x80) return c;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 32;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  return c;
}

bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\v' ||
         c == U'\f' || c == 0xA0 || (c >= 0x2000 && c <= 0x200B) || c == 0x202F ||
         c == 0x205F || c == 0x3000 || c == 0xFEFF;
}

// Non-ASCII punctuation, symbols and emoji. Everything else above 0x7F counts
// as a letter.
bool is_unicode_symbol(char32_t c) {
  return (c >= 0x80 && c <= 0xBF) || c == 0xD7 || c == 0xF7 ||
         (c >= 0x2000 && c <= 0x2BFF) || (c >= 0x3000 && c <= 0x303F) ||
         (c >= 0xFE00 && c <= 0xFE0F) || (c >= 0xFF01 && c <= 0xFF0F) ||
         c == 0xFFFD || (c >= 0x1F000 && c <= 0x1FAFF) || c >= 0xE0000;
}

bool is_alnum(char32_t c) {
  if (c < 0x80) {
    return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9');
  }
  return !is_unicode_symbol(c) && !is_space(c);
}

bool is_apostrophe(char32_t c) { return c == U'\'' || c == 0x2019 || c == 0x2018 || c == U'`'; }

// Characters that always end a token and are dropped.
bool is_hard_boundary(char32_t c) {
  switch (c) {
    case U';': case U'!': case U'?': case U'(': case U')': case U'[': case U']':
    case U'{': case U'}': case U'"':
      return true;
    default:
      break;
  }
  if (c >= 0x80 && !is_apostrophe(c)) return is_unicode_symbol(c);
  return false;
}

// `.`, `,` and `:` split unless both neighbours are alphanumeric (1.8, 10:30).
bool is_soft_boundary(char32_t c) { return c == U'.' || c == U',' || c == U':'; }

bool is_handle_char(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9') ||
         c == U'_';
}

bool is_hashtag_char(char32_t c) { return is_alnum(c) || c == U'_'; }

bool starts_with_ci(const std::vector<CodePoint>& cps, std::size_t at, std::string_view prefix) {
  if (at + prefix.size() > cps.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (to_lower(cps[at + k].value) != static_cast<unsigned char>(prefix[k])) return false;
  }
  return true;
}

std::string encode(const std::vector<char32_t>& cps) {
  std::string out;
  for (char32_t c : cps) append_utf8(out, c);
  return out;
}

constexpr std::string_view kClitics[] = {"'s", "'re", "'ve", "'ll", "'d", "'m", "n't"};

bool is_clitic(const std::vector<char32_t>& chunk, std::size_t from) {
  const std::size_t n = chunk.size() - from;
  for (std::string_view cl : kClitics) {
    if (cl.size() != n) continue;
    bool match = true;
    for (std::size_t k = 0; k < n && match; ++k) {
      const char32_t c = chunk[from + k];
      const char32_t want = static_cast<unsigned char>(cl[k]);
      match = want == U'\'' ? is_apostrophe(c) : to_lower(c) == want;
    }
    if (match) return true;
  }
  return false;
}

// Splits one whitespace/punctuation-delimited chunk into raw tokens: leading and
// trailing quote marks come off, and a final English clitic is split from its
// host ("it's" -> "it" "'s").
void split_chunk(const std::vector<char32_t>& chunk, std::vector<std::vector<char32_t>>& out) {
  std::size_t b = 0;
  std::size_t e = chunk.size();
  if (e == 0) return;
  if (is_clitic(chunk, 0)) {
    out.push_back(chunk);
    return;
  }
  while (b < e && is_apostrophe(chunk[b])) ++b;
  while (e > b && is_apostrophe(chunk[e - 1])) --e;
  if (b == e) return;
  std::vector<char32_t> core(chunk.begin() + static_cast<std::ptrdiff_t>(b),
                             chunk.begin() + static_cast<std::ptrdiff_t>(e));
  for (std::size_t k = 1; k < core.size(); ++k) {
    if (is_clitic(core, k)) {
      out.emplace_back(core.begin(), core.begin() + static_cast<std::ptrdiff_t>(k));
      out.emplace_back(core.begin() + static_cast<std::ptrdiff_t>(k), core.end());
      return;
    }
  }
  out.push_back(std::move(core));
}

// Applies the symbol filter and hashtag stripping; returns nullopt when the
// token is dropped.
std::optional<std::string> filter_token(const std::vector<char32_t>& raw) {
  std::vector<char32_t> kept;
  bool has_alnum = false;
  for (char32_t c : raw) {
    if (c == U'#') continue;
    if (c == U'-') {
      kept.push_back(c);
      continue;
    }
    if (!is_alnum(c)) return std::nullopt;
    has_alnum = true;
    kept.push_back(to_lower(c));
  }
  if (!has_alnum) return std::nullopt;
  return encode(kept);
}

}  // namespace

bool is_placeholder(std::string_view token) {
  return token == kUrlToken || token == kUserToken || token == kRetweetToken;
}

std::string lowercase_utf8(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const CodePoint& cp : decode_utf8(text)) {
    if (cp.value == 0xFFFD) {
      out.append(text.substr(cp.begin, cp.size));
    } else {
      append_utf8(out, to_lower(cp.value));
    }
  }
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const std::string& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

PreprocessedTweet preprocess(std::string_view tweet_id, std::string_view raw_text) {
  PreprocessedTweet result;
  result.tweet_id = std::string(tweet_id);
  const std::vector<CodePoint> cps = decode_utf8(raw_text);
  const std::size_t n = cps.size();
  std::size_t i = 0;
  while (i < n && is_space(cps[i].value)) ++i;

  // Leading retweet syntax: "RT @name:" (colon optional).
  if (i + 3 < n && to_lower(cps[i].value) == U'r' && to_lower(cps[i + 1].value) == U't' &&
      is_space(cps[i + 2].value)) {
    std::size_t j = i + 2;
    while (j < n && is_space(cps[j].value)) ++j;
    if (j < n && cps[j].value == U'@' && j + 1 < n && is_handle_char(cps[j + 1].value)) {
      std::size_t h = j + 1;
      std::string handle;
      while (h < n && is_handle_char(cps[h].value)) {
        handle.push_back(static_cast<char>(cps[h].value));
        ++h;
      }
      if (h < n && cps[h].value == U':') ++h;
      result.is_retweet = true;
      result.retweet_of = std::move(handle);
      result.tokens.emplace_back(kRetweetToken);
      i = h;
    }
  }

  std::vector<std::vector<char32_t>> raw_tokens;
  std::vector<char32_t> chunk;
  auto flush = [&]() {
    split_chunk(chunk, raw_tokens);
    chunk.clear();
    for (auto& raw : raw_tokens) {
      if (auto tok = filter_token(raw)) result.tokens.push_back(std::move(*tok));
    }
    raw_tokens.clear();
  };
  auto emit_placeholder = [&](std::string_view p) {
    flush();
    result.tokens.emplace_back(p);
  };
  auto prev_is_alnum = [&](std::size_t at) { return at > 0 && is_alnum(cps[at - 1].value); };

  while (i < n) {
    const char32_t c = cps[i].value;
    if (is_space(c)) {
      flush();
      ++i;
      continue;
    }
    const bool at_chunk_start = chunk.empty();
    if (at_chunk_start && (starts_with_ci(cps, i, "http://") || starts_with_ci(cps, i, "https://") ||
                           starts_with_ci(cps, i, "www."))) {
      while (i < n && !is_space(cps[i].value)) ++i;
      emit_placeholder(kUrlToken);
      continue;
    }
    if (at_chunk_start && c == U'<') {
      bool matched = false;
      for (std::string_view p : {kUrlToken, kUserToken, kRetweetToken}) {
        const std::size_t end = i + p.size();
        if (starts_with_ci(cps, i, p) && (end == n || is_space(cps[end].value))) {
          if (p == kRetweetToken && result.tokens.empty()) result.is_retweet = true;
          emit_placeholder(p);
          i = end;
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    if (c == U'@' && !prev_is_alnum(i) && i + 1 < n && is_handle_char(cps[i + 1].value)) {
      ++i;
      while (i < n && is_handle_char(cps[i].value)) ++i;
      emit_placeholder(kUserToken);
      continue;
    }
    if (c == U'#' && !prev_is_alnum(i) && i + 1 < n && is_hashtag_char(cps[i + 1].value)) {
      std::vector<char32_t> tag;
      for (std::size_t h = i + 1; h < n && is_hashtag_char(cps[h].value); ++h) {
        tag.push_back(to_lower(cps[h].value));
      }
      result.hashtags.push_back(encode(tag));
    }
    if (is_hard_boundary(c)) {
      flush();
      ++i;
      continue;
    }
    if (is_soft_boundary(c)) {
      const bool inner = prev_is_alnum(i) && i + 1 < n && is_alnum(cps[i + 1].value);
      if (!inner) {
        flush();
        ++i;
        continue;
      }
    }
    chunk.push_back(c);
    ++i;
  }
  flush();

  std::sort(result.hashtags.begin(), result.hashtags.end());
  result.hashtags.erase(std::unique(result.hashtags.begin(), result.hashtags.end()),
                        result.hashtags.end());

  std::vector<std::string> content;
  for (const std::string& t : result.tokens) {
    if (!is_placeholder(t)) content.push_back(t);
  }
  result.canonical_key = join_tokens(content);
  return result;
}

PreprocessedTweet preprocess(std::string_view raw_text) { return preprocess("", raw_text); }

}  // namespace stance
