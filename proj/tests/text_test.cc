#include "stance/text.h"

#include <cctype>
#include <random>

#include <gtest/gtest.h>

namespace stance {
namespace {

using Tokens = std::vector<std::string>;

TEST(Preprocess, RetweetPrefixBecomesPlaceholder) {
  auto p = preprocess("RT @mashable: Ukraine: Audio recordings show pro-Russian rebels tried to hide #MH17 black boxes.");
  EXPECT_TRUE(p.is_retweet);
  EXPECT_EQ(p.tokens, (Tokens{"<rt>", "ukraine", "audio", "recordings", "show", "pro-russian", "rebels", "tried", "to",
                              "hide", "mh17", "black", "boxes"}));
  ASSERT_TRUE(p.retweet_of);
  EXPECT_EQ(*p.retweet_of, "mashable");
  EXPECT_EQ(p.hashtags, Tokens{"mh17"});
  EXPECT_EQ(p.canonical_key, "ukraine audio recordings show pro-russian rebels tried to hide mh17 black boxes");
}

TEST(Preprocess, EmoticonDropped) {
  auto p = preprocess("#PrayForMH17 :(");
  EXPECT_FALSE(p.is_retweet);
  EXPECT_EQ(p.tokens, Tokens{"prayformh17"});
  EXPECT_EQ(p.hashtags, Tokens{"prayformh17"});
}

TEST(Preprocess, PlainWord) {
  auto p = preprocess("abc");
  EXPECT_EQ(p.tokens, Tokens{"abc"});
  EXPECT_EQ(p.canonical_key, "abc");
}

TEST(Preprocess, UrlsAndMentions) {
  auto p = preprocess("see http://t.co/xyz and www.bbc.co.uk/news via @BBC, thanks@you");
  // An embedded @ is not a mention; the symbol filter drops the whole token.
  EXPECT_EQ(p.tokens, (Tokens{"see", "<url>", "and", "<url>", "via", "<user>"}));
  EXPECT_FALSE(p.is_retweet);
  EXPECT_EQ(p.canonical_key, "see and via");
}

TEST(Preprocess, OnlyUrlIsEmpty) {
  auto p = preprocess("https://t.co/abc");
  EXPECT_EQ(p.tokens, Tokens{"<url>"});
  EXPECT_EQ(p.canonical_key, "");
  EXPECT_TRUE(preprocess("   ").empty());
  EXPECT_TRUE(preprocess(":( !!!").empty());
}

TEST(Preprocess, RetweetWithoutColonAndMidTextRt) {
  EXPECT_TRUE(preprocess("rt @a hello").is_retweet);
  auto p = preprocess("I said RT @a: hello");
  EXPECT_FALSE(p.is_retweet);
  EXPECT_EQ(p.tokens, (Tokens{"i", "said", "rt", "<user>", "hello"}));
}

TEST(Preprocess, PunctuationRules) {
  // Numbers and abbreviations stay whole, then fall to the symbol filter.
  EXPECT_EQ(preprocess("3.5 million, U.S. e-mail -- ok").tokens, (Tokens{"million", "e-mail", "ok"}));
  EXPECT_EQ(preprocess("time:12:30 end.").tokens, Tokens{"end"});
  EXPECT_EQ(preprocess("(Putin's) jet!").tokens, (Tokens{"putin", "jet"}));
  EXPECT_EQ(preprocess("don't 'quoted'").tokens, (Tokens{"do", "quoted"}));
}

TEST(Preprocess, NonAsciiLetters) {
  auto p = preprocess("Катастрофа MH17 Über ❤ #Донбасс");
  EXPECT_EQ(p.tokens, (Tokens{"катастрофа", "mh17", "über", "донбасс"}));
  EXPECT_EQ(p.hashtags, Tokens{"донбасс"});
}

TEST(Preprocess, HashtagsSortedUnique) {
  auto p = preprocess("#b #A #a #c#d x#y");
  EXPECT_EQ(p.hashtags, (Tokens{"a", "b", "c"}));
}

TEST(Preprocess, CarriesTweetId) { EXPECT_EQ(preprocess("t1", "x").tweet_id, "t1"); }

TEST(Lowercase, Scripts) {
  EXPECT_EQ(lowercase_utf8("ABC Ä Ω Ж"), "abc ä ω ж");
  EXPECT_EQ(lowercase_utf8("✓"), "✓");
}

// Random texts drawn from a small alphabet that exercises every rule.
std::string random_text(std::mt19937_64& gen) {
  static const std::vector<std::string> pieces = {
      "RT ", "@user ", "@x:", "http://a.b/c ", "www.x.org ", "#Tag ", "#", "-", "--", ".", ",", ":", "'", "'s ",
      "n't ", "(", ")", "!", "?", "\"", "word ", "Word", "ab1 ", "3.5 ", " ", " ", "Ж", "ü", "❤", "<url>", "<user> ",
      "<rt> ", ";)", "e-mail "};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len(0, 25);
  std::string s;
  for (int i = len(gen); i > 0; --i) s += pieces[pick(gen)];
  return s;
}

TEST(PreprocessProperty, IdempotentOnJoinedTokens) {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 3000; ++i) {
    std::string raw = random_text(gen);
    auto once = preprocess(raw);
    auto twice = preprocess(join_tokens(once.tokens));
    EXPECT_EQ(twice.tokens, once.tokens) << "raw: " << raw;
    auto key = preprocess(once.canonical_key);
    EXPECT_EQ(key.canonical_key, once.canonical_key) << "raw: " << raw;
  }
}

TEST(PreprocessProperty, TokenAlphabet) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 3000; ++i) {
    std::string raw = random_text(gen);
    for (const auto& tok : preprocess(raw).tokens) {
      if (is_placeholder(tok)) continue;
      EXPECT_EQ(tok.find('#'), std::string::npos) << raw;
      bool has_alnum = false;
      for (unsigned char c : tok) {
        if (c >= 0x80) {
          has_alnum = true;
          continue;
        }
        if (std::isalnum(c)) {
          has_alnum = true;
          continue;
        }
        EXPECT_EQ(c, '-') << "token '" << tok << "' from " << raw;
      }
      EXPECT_TRUE(has_alnum) << tok;
    }
  }
}

}  // namespace
}  // namespace stance
