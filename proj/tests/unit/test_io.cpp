#include <doctest.h>

#include <random>

#include "ecot/error.hpp"
#include "ecot/io.hpp"
#include "support/oracles.hpp"

using namespace ecot;

namespace {

json small_corpus() {
  return json::parse(R"({
    "d_u": 2,
    "conversations": [
      {"id": "x", "gold_pairs": [[2, 1], [1, 1]],
       "utterances": [
         {"index": 1, "speaker": 0, "embedding": [0.5, 1], "emotion": 1, "cause": true, "text": "hi"},
         {"index": 2, "speaker": 3, "embedding": [-1, 0.25], "emotion": false, "cause": 0}]}
    ]})");
}

std::string error_of(const json& doc) {
  try {
    parse_corpus(doc);
  } catch (const CorpusFormatError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("corpus parsing") {
  const Corpus c = parse_corpus(small_corpus());
  CHECK(c.d_u == 2);
  REQUIRE(c.conversations.size() == 1);
  const auto& conv = c.conversations[0];
  CHECK(conv.conversation_id == "x");
  CHECK(conv.utterances[1].speaker_id == 3);
  CHECK(conv.utterances[0].emotion_label);
  CHECK(conv.utterances[0].cause_label);
  CHECK_FALSE(conv.utterances[1].emotion_label);
  CHECK(conv.utterances[0].text == std::optional<std::string>("hi"));
  CHECK_FALSE(conv.utterances[1].text.has_value());
  CHECK(conv.gold_pairs == std::vector<UtterancePair>{{1, 1}, {2, 1}});
}

TEST_CASE("corpus round trip") {
  const Corpus c = parse_corpus(small_corpus());
  const Corpus again = parse_corpus(json::parse(dump_json(corpus_to_json(c))));
  CHECK(corpus_to_json(again) == corpus_to_json(c));
  CHECK(again.conversations[0].utterances[1].embedding == std::vector<double>{-1, 0.25});
}

TEST_CASE("full width corpus in the exporter layout") {
  std::mt19937_64 rng(41);
  Corpus c;
  c.d_u = 768;
  for (int k = 0; k < 3; ++k)
    c.conversations.push_back(oracle::random_conversation(rng, 2 + k, 768, 2, "export-" + std::to_string(k)));
  c.conversations[2].gold_pairs = {{1, 1}, {3, 2}};
  const std::string text = dump_json(corpus_to_json(c));
  const Corpus back = parse_corpus(json::parse(text));
  REQUIRE(back.conversations.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < c.conversations[k].size(); ++i)
      CHECK(back.conversations[k].utterances[i].embedding == c.conversations[k].utterances[i].embedding);
  }
  CHECK(back.conversations[2].gold_pairs == c.conversations[2].gold_pairs);
}

TEST_CASE("malformed corpora name the conversation and field") {
  json doc = small_corpus();
  doc["conversations"][0]["utterances"][1]["embedding"] = {1.0};
  std::string msg = error_of(doc);
  CHECK(msg.find("conversation 'x'") != std::string::npos);
  CHECK(msg.find("utterances[1].embedding") != std::string::npos);

  doc = small_corpus();
  doc["conversations"][0]["utterances"][1]["index"] = 5;
  CHECK(error_of(doc).find("utterances[1].index") != std::string::npos);

  doc = small_corpus();
  doc["conversations"][0]["gold_pairs"].push_back({3, 1});
  CHECK(error_of(doc).find("gold_pairs") != std::string::npos);

  doc = small_corpus();
  doc["conversations"][0]["gold_pairs"].push_back({2, 1});
  CHECK(error_of(doc).find("unique") != std::string::npos);

  doc = small_corpus();
  doc["conversations"][0]["utterances"][0].erase("speaker");
  msg = error_of(doc);
  CHECK(msg.find("conversation 'x'") != std::string::npos);
  CHECK(msg.find("speaker") != std::string::npos);

  doc = small_corpus();
  doc["conversations"][0]["utterances"][0]["emotion"] = 2;
  CHECK(error_of(doc).find("emotion") != std::string::npos);

  doc = small_corpus();
  doc.erase("d_u");
  CHECK(error_of(doc).find("d_u") != std::string::npos);

  CHECK_THROWS_AS(load_corpus(std::string(ECOT_FIXTURE_DIR) + "/malformed_corpus.json"), CorpusFormatError);
  CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.json"), CorpusFormatError);
}

TEST_CASE("bundled fixtures load") {
  const Corpus c = load_corpus(std::string(ECOT_FIXTURE_DIR) + "/corpus.json");
  CHECK(c.d_u == 6);
  CHECK(c.conversations.size() == 3);
}

TEST_CASE("params file round trip") {
  const ModelParams p = ModelParams::materialize(3, 2, 2, 99);
  const ParamsFile f = parse_params(json::parse(dump_json(params_to_json(p))));
  CHECK(f.seed == std::optional<std::uint64_t>(99));
  CHECK(f.d_s == std::optional<std::size_t>(2));
  CHECK(f.tensors.size() == p.blocks().size());
  for (const auto& [name, block] : p.blocks()) CHECK(f.tensors.at(name) == block);
  const ModelParams rebuilt = ModelParams::materialize(3, 2, 2, 0, f.tensors);
  CHECK(rebuilt.pair_mlp().w1 == p.pair_mlp().w1);
}

TEST_CASE("params file errors") {
  CHECK_THROWS_AS(parse_params(json::parse(R"({"tensors": {"pair_mlp.b2": {"shape": [2], "data": [1]}}})")),
                  CorpusFormatError);
  CHECK_THROWS_AS(parse_params(json::parse(R"({"seed": -1})")), CorpusFormatError);
  CHECK_THROWS_AS(parse_params(json::parse(R"({"d_s": 0})")), CorpusFormatError);
  const ParamsFile vec = parse_params(json::parse(R"({"tensors": {"speaker.4": {"shape": [2], "data": [1, 2]}}})"));
  CHECK(vec.tensors.at("speaker.4") == DenseMatrix(1, 2, {1, 2}));
}

TEST_CASE("predictions parsing") {
  const json doc = json::parse(R"({"conversations": [
    {"id": "a", "predictions": {"decisions": [[1, 2]], "ee_probs": [[0.2, 0.8], [0.5, 0.5]],
                                "ce_probs": [[0.9, 0.1], [0.4, 0.6]]}},
    {"id": "b", "predictions": {"decisions": []}}]})");
  const auto p = parse_predictions(doc);
  REQUIRE(p.size() == 2);
  CHECK(p[0].decisions == std::vector<UtterancePair>{{1, 2}});
  CHECK(p[0].emotion_predicted == std::vector<bool>{true, false});
  CHECK(p[0].cause_predicted == std::vector<bool>{false, true});
  CHECK(p[1].emotion_predicted.empty());
  CHECK_THROWS_AS(parse_predictions(json::parse(R"({"conversations": [{"id": "a"}]})")), CorpusFormatError);
}

TEST_CASE("doubles are written in shortest round-trip form") {
  const json doc = {{"x", 0.1}, {"y", 1.0 / 3.0}};
  const json back = json::parse(dump_json(doc));
  CHECK(back["x"].get<double>() == 0.1);
  CHECK(back["y"].get<double>() == 1.0 / 3.0);
  CHECK(dump_json(doc).find("0.1,") != std::string::npos);
  CHECK(dump_json(doc).back() == '\n');
}

TEST_CASE("matrix json helpers") {
  const DenseMatrix m(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(matrix_from_json(matrix_to_json(m)) == m);
  CHECK(matrix_to_json(m)[1][2].get<double>() == 6.0);
}
