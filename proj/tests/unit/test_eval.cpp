#include <doctest.h>

#include <random>
#include <set>

#include "ecot/error.hpp"
#include "ecot/eval.hpp"
#include "ecot/io.hpp"
#include "support/oracles.hpp"

using namespace ecot;

namespace {

ConversationRecord gold_only(const std::string& id, std::size_t n, std::vector<UtterancePair> gold) {
  ConversationRecord c;
  c.conversation_id = id;
  for (std::size_t i = 0; i < n; ++i) c.utterances.push_back({static_cast<int>(i) + 1, 0, {0.0}, false, false, {}});
  c.gold_pairs = std::move(gold);
  return c;
}

std::vector<UtterancePair> random_pairs(std::mt19937_64& rng, int n, double density) {
  std::bernoulli_distribution keep(density);
  std::vector<UtterancePair> out;
  for (int e = 1; e <= n; ++e)
    for (int c = 1; c <= n; ++c)
      if (keep(rng)) out.push_back({e, c});
  return out;
}

}  // namespace

TEST_CASE("micro scores on a hand example") {
  const std::vector<ConversationRecord> gold = {gold_only("a", 4, {{1, 1}, {2, 1}, {3, 3}})};
  const EvalReport r = score_pairs({{"a", {{1, 1}, {4, 2}}, {}, {}}}, gold);
  CHECK(r.counts.tp == 1);
  CHECK(r.counts.fp == 1);
  CHECK(r.counts.fn == 2);
  CHECK(std::abs(r.ecpec.precision - 0.5) < 1e-12);
  CHECK(std::abs(r.ecpec.recall - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(r.ecpec.f1 - 0.4) < 1e-12);
}

TEST_CASE("empty and exact decisions") {
  const std::vector<ConversationRecord> gold = {gold_only("a", 3, {{2, 1}, {3, 3}})};
  const EvalReport none = score_pairs({{"a", {}, {}, {}}}, gold);
  CHECK(none.ecpec.precision == 0.0);
  CHECK(none.ecpec.recall == 0.0);
  CHECK(none.ecpec.f1 == 0.0);
  const EvalReport exact = score_pairs({{"a", gold[0].gold_pairs, {}, {}}}, gold);
  CHECK(exact.ecpec.precision == 1.0);
  CHECK(exact.ecpec.recall == 1.0);
  CHECK(exact.ecpec.f1 == 1.0);
  const EvalReport nothing = score_pairs({}, {});
  CHECK(nothing.counts.tp == 0);
  CHECK(nothing.ecpec.f1 == 0.0);
}

TEST_CASE("prediction ids must match gold ids") {
  const std::vector<ConversationRecord> gold = {gold_only("a", 2, {}), gold_only("b", 2, {})};
  CHECK_THROWS_AS(score_pairs({{"a", {}, {}, {}}}, gold), EvalInputError);
  CHECK_THROWS_AS(score_pairs({{"a", {}, {}, {}}, {"c", {}, {}, {}}}, gold), EvalInputError);
  CHECK_THROWS_AS(score_pairs({{"a", {}, {}, {}}, {"a", {}, {}, {}}}, gold), EvalInputError);
  CHECK_NOTHROW(score_pairs({{"b", {}, {}, {}}, {"a", {}, {}, {}}}, gold));
}

TEST_CASE("utterance level f1") {
  ConversationRecord g = gold_only("a", 4, {{1, 2}});
  g.utterances[0].emotion_label = true;
  g.utterances[2].emotion_label = true;
  g.utterances[1].cause_label = true;
  ConversationPrediction p{"a", {}, {true, false, false, true}, {false, true, false, false}};
  const EvalReport r = score_pairs({p}, {g});
  CHECK(std::abs(r.ee_f1 - 0.5) < 1e-12);  // tp 1, fp 1, fn 1
  CHECK(r.ce_f1 == 1.0);
}

TEST_CASE("multi-cause filter on the fixture corpus") {
  const Corpus corpus = load_corpus(std::string(ECOT_FIXTURE_DIR) + "/multicause_corpus.json");
  const Corpus subset = multi_cause_subset(corpus);
  std::vector<std::string> ids;
  for (const auto& c : subset.conversations) ids.push_back(c.conversation_id);
  CHECK(ids == std::vector<std::string>{"mc-1", "mc-3", "mc-5"});
  CHECK(subset.d_u == corpus.d_u);
  CHECK(multi_cause_subset(subset).conversations.size() == 3);
  CHECK(multi_cause_subset(Corpus{}).conversations.empty());
}

TEST_CASE("fixture predictions scored by hand") {
  const Corpus corpus = load_corpus(std::string(ECOT_FIXTURE_DIR) + "/multicause_corpus.json");
  const auto preds = parse_predictions(read_json_file(std::string(ECOT_FIXTURE_DIR) + "/multicause_predictions.json"));
  const EvalReport r = score_pairs(preds, corpus.conversations);
  CHECK(r.counts.tp == 10);
  CHECK(r.counts.fp == 3);
  CHECK(r.counts.fn == 2);
  CHECK(std::abs(r.ecpec.precision - 10.0 / 13.0) < 1e-12);
  CHECK(std::abs(r.ecpec.recall - 10.0 / 12.0) < 1e-12);
  CHECK(std::abs(r.ecpec.f1 - 0.8) < 1e-12);

  const auto& k = r.per_cause_count_recall;
  REQUIRE(k.size() == 3);
  CHECK(k.at(1).emotions == 5);
  CHECK(k.at(1).recalled == 4);
  CHECK(k.at(2).emotions == 2);
  CHECK(k.at(2).recalled == 1);
  CHECK(k.at(3).emotions == 1);
  CHECK(k.at(3).recalled == 1);
  CHECK(std::abs(k.at(2).recall - 0.5) < 1e-12);
}

TEST_CASE("cause-count recall is all or nothing") {
  const std::vector<ConversationRecord> gold = {gold_only("a", 3, {{2, 1}, {2, 2}, {2, 3}})};
  auto recall = [&](std::vector<UtterancePair> d) {
    return per_cause_count_recall({{"a", std::move(d), {}, {}}}, gold).at(3).recalled;
  };
  CHECK(recall({{2, 1}, {2, 2}}) == 0);
  CHECK(recall({{2, 1}, {2, 2}, {2, 3}}) == 1);
  CHECK(recall({{2, 1}, {2, 2}, {2, 3}, {1, 1}}) == 1);
}

TEST_CASE("adding a correct pair never lowers recall") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 5;
    const std::vector<ConversationRecord> gold = {gold_only("a", n, random_pairs(rng, n, 0.3))};
    if (gold[0].gold_pairs.empty()) continue;
    std::vector<UtterancePair> d = random_pairs(rng, n, 0.3);
    const EvalReport before = score_pairs({{"a", d, {}, {}}}, gold);
    for (const auto& g : gold[0].gold_pairs) {
      if (std::find(d.begin(), d.end(), g) == d.end()) {
        d.push_back(g);
        break;
      }
    }
    const EvalReport after = score_pairs({{"a", d, {}, {}}}, gold);
    CHECK(after.ecpec.recall >= before.ecpec.recall);
    const double p = after.ecpec.precision, rc = after.ecpec.recall;
    const double f1 = p + rc == 0.0 ? 0.0 : 2 * p * rc / (p + rc);
    CHECK(std::abs(after.ecpec.f1 - f1) < 1e-12);
  }
}

TEST_CASE("micro counts add over conversations") {
  std::mt19937_64 rng(32);
  std::vector<ConversationRecord> gold;
  std::vector<ConversationPrediction> preds;
  PairCounts total;
  for (int k = 0; k < 8; ++k) {
    const int n = 1 + k % 4;
    const std::string id = "c" + std::to_string(k);
    gold.push_back(gold_only(id, n, random_pairs(rng, n, 0.4)));
    preds.push_back({id, random_pairs(rng, n, 0.4), {}, {}});
    total += count_pairs(preds.back().decisions, gold.back().gold_pairs);
  }
  const EvalReport r = score_pairs(preds, gold);
  CHECK(r.counts.tp == total.tp);
  CHECK(r.counts.fp == total.fp);
  CHECK(r.counts.fn == total.fn);
}

TEST_CASE("table formatting") {
  EvalReport r;
  r.ecpec = {0.5, 0.25, 1.0 / 3.0};
  const std::string t = format_eval_table({{"all", r}});
  CHECK(t.find("50.00") != std::string::npos);
  CHECK(t.find("25.00") != std::string::npos);
  CHECK(t.find("33.33") != std::string::npos);
}
