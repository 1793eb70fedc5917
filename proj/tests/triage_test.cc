#include "stance/triage.h"

#include <random>

#include <gtest/gtest.h>

#include "support/temp_dir.h"

namespace stance {
namespace {

constexpr Stance R = Stance::kProRussian;
constexpr Stance U = Stance::kProUkrainian;

CandidateEdge cand(std::string a, std::string b, Stance s, std::vector<SupportingTweet> support) {
  return {EdgeKey::of(std::move(a), std::move(b)), s, std::move(support), false};
}

std::vector<TriageItem> sample_queue() {
  std::vector<CandidateEdge> c{cand("a", "b", R, {{"t1", 0.9}, {"t2", 0.7}}),
                               cand("a", "b", U, {{"t2", 0.85}}),
                               cand("a", "c", U, {{"t3", 0.95}}),
                               cand("a", "d", R, {{"t4", 0.7}}),
                               cand("b", "e", U, {{"t5", 0.81}})};
  return build_queue(c);
}

// Fixed clock so logs are reproducible.
TriageService::Clock ticking(std::int64_t start = 1000) {
  auto t = std::make_shared<std::int64_t>(start);
  return [t] { return (*t)++; };
}

TEST(BuildQueue, DedupesAndOrders) {
  auto q = sample_queue();
  ASSERT_EQ(q.size(), 5u);
  std::vector<std::string> ids;
  for (const auto& it : q) ids.push_back(it.tweet_id);
  EXPECT_EQ(ids, (std::vector<std::string>{"t3", "t1", "t2", "t5", "t4"}));
  EXPECT_EQ(q[2].predicted, U);
  EXPECT_DOUBLE_EQ(q[2].confidence, 0.85);
  for (std::size_t i = 0; i < q.size(); ++i) {
    EXPECT_EQ(q[i].item_id, static_cast<std::int64_t>(i + 1));
    EXPECT_EQ(q[i].state, ItemState::kPending);
  }
  EXPECT_EQ(parse_queue(format_queue(q)), q);
}

TEST(BuildQueue, TextFromCorpus) {
  Corpus c = Corpus::build({{"t1", "b", 1, "RT @a: hello there", std::nullopt}});
  std::vector<CandidateEdge> cands{cand("a", "b", R, {{"t1", 0.9}})};
  auto q = build_queue(cands, &c);
  EXPECT_EQ(q[0].raw_text, "RT @a: hello there");
  EXPECT_THROW(parse_queue("{\"item_id\":1}\n"), ParseError);
}

TEST(Decisions, JsonRoundTrip) {
  AnnotationDecision d{7, Verdict::kNeutral, "ann-1", 1700000000123};
  EXPECT_EQ(decision_from_json(decision_to_json(d)), d);
  EXPECT_THROW(decision_from_json("{\"item_id\":7}"), ParseError);
  EXPECT_THROW(decision_from_json("{\"item_id\":7,\"verdict\":\"maybe\",\"annotator_id\":\"x\",\"decided_at\":1}"),
               ParseError);
  EXPECT_EQ(parse_verdict("skip"), Verdict::kSkip);
  EXPECT_FALSE(parse_verdict("Skip").has_value());
  EXPECT_FALSE(stance_of(Verdict::kSkip).has_value());
}

TEST(Service, GetNextFiltersAndOrders) {
  testing::TempDir dir;
  TriageService svc(sample_queue(), dir.file("log.jsonl"), ticking());
  auto all = svc.get_next(std::nullopt, 10);
  ASSERT_EQ(all.size(), 5u);
  EXPECT_EQ(all[0].tweet_id, "t3");
  auto r = svc.get_next(R, 10);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].tweet_id, "t1");
  EXPECT_EQ(r[1].tweet_id, "t4");
  EXPECT_EQ(svc.get_next(U, 2).size(), 2u);
  EXPECT_EQ(svc.pending(U), 3u);
  EXPECT_EQ(svc.pending(std::nullopt), 5u);
}

TEST(Service, PostDecisionUpdatesStatsAndQueue) {
  testing::TempDir dir;
  TriageService svc(sample_queue(), dir.file("log.jsonl"), ticking());
  auto ack = svc.post_decision(2, Verdict::kProRussian, "ann");  // t1
  EXPECT_EQ(ack.decision.item_id, 2);
  EXPECT_EQ(ack.decision.decided_at, 1000);
  EXPECT_EQ(ack.stats.of(R).reviewed, 1);
  EXPECT_EQ(ack.stats.of(R).confirmed, 1);
  EXPECT_EQ(ack.stats.of(R).new_edges, 1);
  EXPECT_DOUBLE_EQ(*ack.stats.of(R).hit_rate, 1.0);
  EXPECT_EQ(ack.stats.of(R).pending, 1);
  EXPECT_EQ(svc.get_next(R, 10).size(), 1u);

  // t2 sits on the same edge; judging it U makes the edge conflicted.
  ack = svc.post_decision(3, Verdict::kProUkrainian, "ann");
  EXPECT_EQ(ack.stats.of(R).new_edges, 0);
  EXPECT_EQ(ack.stats.of(U).new_edges, 0);

  ack = svc.post_decision(4, Verdict::kSkip, "ann");  // t5
  EXPECT_EQ(ack.stats.of(U).skipped, 1);
  EXPECT_EQ(ack.stats.of(U).reviewed, 2);
  EXPECT_EQ(svc.items()[3].state, ItemState::kSkipped);
  EXPECT_THROW(svc.post_decision(99, Verdict::kNeutral, "ann"), InvalidArgument);
}

TEST(Service, LatestDecisionWins) {
  testing::TempDir dir;
  TriageService svc(sample_queue(), dir.file("log.jsonl"), ticking());
  svc.post_decision(1, Verdict::kNeutral, "ann");
  auto ack = svc.post_decision(1, Verdict::kProUkrainian, "ann2");
  EXPECT_EQ(ack.stats.of(U).reviewed, 1);
  EXPECT_EQ(ack.stats.of(U).decided, 1);
  EXPECT_EQ(ack.stats.of(U).confirmed, 1);
  EXPECT_EQ(ack.stats.of(U).new_edges, 1);
  EXPECT_EQ(svc.decisions().size(), 2u);
}

TEST(Service, TimestampsNeverGoBackwards) {
  testing::TempDir dir;
  std::int64_t now = 500;
  TriageService svc(sample_queue(), dir.file("log.jsonl"), [&] { return now; });
  EXPECT_EQ(svc.post_decision(1, Verdict::kSkip, "a").decision.decided_at, 500);
  now = 100;
  EXPECT_EQ(svc.post_decision(2, Verdict::kSkip, "a").decision.decided_at, 500);
}

TEST(Recovery, EmptyAndReplay) {
  testing::TempDir dir;
  std::string log = dir.file("log.jsonl");
  TriageStats before;
  {
    RecoveryReport rep;
    TriageService svc(sample_queue(), log, ticking(), &rep);
    EXPECT_EQ(rep.replayed, 0u);
    svc.post_decision(1, Verdict::kProUkrainian, "a");
    svc.post_decision(2, Verdict::kNeutral, "a");
    svc.post_decision(5, Verdict::kSkip, "b");
    before = svc.stats();
  }
  RecoveryReport rep;
  TriageService again(sample_queue(), log, ticking(), &rep);
  EXPECT_EQ(rep.replayed, 3u);
  EXPECT_TRUE(rep.warning.empty());
  EXPECT_EQ(again.stats(), before);
  EXPECT_EQ(again.pending(std::nullopt), 2u);
}

TEST(Recovery, CorruptTailIsTruncated) {
  testing::TempDir dir;
  std::string log = dir.file("log.jsonl");
  {
    TriageService svc(sample_queue(), log, ticking());
    svc.post_decision(1, Verdict::kProUkrainian, "a");
    svc.post_decision(2, Verdict::kProRussian, "a");
  }
  std::string good = testing::read_text(log);
  testing::write_text(log, good + "{\"item_id\":3,\"verd");
  RecoveryReport rep;
  {
    TriageService svc(sample_queue(), log, ticking(), &rep);
    EXPECT_EQ(rep.replayed, 2u);
    EXPECT_GT(rep.truncated_bytes, 0u);
    EXPECT_FALSE(rep.warning.empty());
    svc.post_decision(3, Verdict::kNeutral, "a");
  }
  ReplayResult r = read_decision_log(log);
  EXPECT_EQ(r.decisions.size(), 3u);
  EXPECT_TRUE(r.warning.empty());
}

TEST(Recovery, MidFileCorruptionIsFatal) {
  testing::TempDir dir;
  std::string log = dir.file("log.jsonl");
  AnnotationDecision d{1, Verdict::kSkip, "a", 5};
  testing::write_text(log, "garbage\n" + decision_to_json(d) + "\n");
  EXPECT_THROW(TriageService(sample_queue(), log, ticking()), ParseError);
  AnnotationDecision unknown{42, Verdict::kSkip, "a", 5};
  testing::write_text(log, decision_to_json(unknown) + "\n");
  EXPECT_THROW(TriageService(sample_queue(), log, ticking()), ParseError);
}

TEST(ServiceProperty, StatsAgreeWithBatchApply) {
  std::mt19937_64 gen(41);
  for (int round = 0; round < 30; ++round) {
    std::vector<CandidateEdge> cands;
    int n = 5 + static_cast<int>(gen() % 30);
    for (int i = 0; i < n; ++i) {
      std::string a = "u" + std::to_string(gen() % 8), b = "v" + std::to_string(gen() % 8);
      Stance s = gen() % 2 ? R : U;
      cands.push_back(cand(a, b, s, {{"t" + std::to_string(i), 0.5 + 0.01 * static_cast<double>(gen() % 50)}}));
    }
    auto queue = build_queue(cands);
    testing::TempDir dir;
    TriageService svc(queue, dir.file("log.jsonl"), ticking());
    for (int k = 0, m = static_cast<int>(gen() % 40); k < m; ++k) {
      auto id = static_cast<std::int64_t>(1 + gen() % queue.size());
      svc.post_decision(id, static_cast<Verdict>(gen() % 4), "ann");
    }
    RetweetGraph g;
    for (const auto& it : queue) g.add_retweet(it.edge.a, it.edge.b, it.tweet_id);
    auto decisions = svc.decisions();
    ApplyResult batch = apply_decisions(g, {}, reviewed_tweets(queue, decisions));
    TriageStats live = svc.stats();
    for (Stance s : {R, U}) {
      ClassTriageStats want = batch.stats.of(s);
      want.pending = live.of(s).pending;
      EXPECT_EQ(live.of(s), want) << "round " << round;
    }
  }
}

}  // namespace
}  // namespace stance
