#include <doctest.h>

#include <cmath>
#include <random>

#include "ecot/error.hpp"
#include "ecot/graph.hpp"
#include "support/oracles.hpp"

using namespace ecot;

namespace {

ConversationRecord make_conversation(const std::vector<std::vector<double>>& embeddings,
                                     const std::vector<int>& speakers) {
  ConversationRecord c;
  c.conversation_id = "fixture";
  for (std::size_t i = 0; i < embeddings.size(); ++i)
    c.utterances.push_back({static_cast<int>(i) + 1, speakers[i], embeddings[i], false, false, {}});
  return c;
}

ModelParams zero_speaker_params(std::size_t d_u, std::vector<int> ids) {
  TensorBlocks blocks;
  for (int id : ids) blocks.emplace("speaker." + std::to_string(id), DenseMatrix(1, 1));
  return ModelParams::materialize(d_u, 1, 1, 0, blocks);
}

}  // namespace

TEST_CASE("node features concatenate utterance then speaker embedding") {
  TensorBlocks blocks;
  blocks.emplace("speaker.4", DenseMatrix(1, 1, {5.0}));
  const ModelParams p = ModelParams::materialize(2, 1, 1, 0, blocks);
  const DenseMatrix x = build_node_features(make_conversation({{3, 4}, {1, 1}}, {4, 4}), p);
  CHECK(x == DenseMatrix(2, 3, {3, 4, 5, 1, 1, 5}));
}

TEST_CASE("node features share the speaker block across a speaker's turns") {
  const ModelParams p = ModelParams::materialize(2, 4, 1, 17);
  const DenseMatrix x = build_node_features(make_conversation({{1, 0}, {0, 1}, {2, 2}}, {7, 3, 7}), p);
  for (std::size_t c = 2; c < 6; ++c) CHECK(x(0, c) == x(2, c));
  CHECK_FALSE(x(0, 2) == x(1, 2));
}

TEST_CASE("unseen speaker ids get the seeded embedding") {
  // Independent SplitMix64 evaluation of block "speaker.9", seed 42, d_s = 3.
  const std::vector<double> expected{0.1561972965561908, 0.45663554180954896, -0.16231634885626417};
  const ModelParams p = ModelParams::materialize(2, 3, 1, 42);
  const DenseMatrix x = build_node_features(make_conversation({{1, 2}}, {9}), p);
  for (std::size_t k = 0; k < 3; ++k) CHECK(x(0, 2 + k) == expected[k]);
}

TEST_CASE("node features reject wrong embedding width") {
  const ModelParams p = ModelParams::materialize(3, 1, 1, 0);
  CHECK_THROWS_AS(build_node_features(make_conversation({{1, 2}}, {0}), p), CorpusFormatError);
}

TEST_CASE("edge weight formulas") {
  CHECK(local_edge_weight(0, 2.0) == 1.0);
  CHECK(local_edge_weight(2, 2.0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  CHECK(intra_speaker_edge_weight(2, 2.0) == doctest::Approx(0.6839397205857212).epsilon(1e-15));
  CHECK(global_edge_weight(1.0) == 1.0);
  CHECK(global_edge_weight(0.0) == 0.5);
}

TEST_CASE("hand-built four utterance graph") {
  // Values from an independent script evaluating the three edge rules with
  // W = 1, tau_s = 1.5, tau_e = 2.0 and zero speaker embeddings.
  HyperParams hp;
  hp.window = 1;
  hp.tau_s = 1.5;
  hp.tau_e = 2.0;
  const auto conv = make_conversation({{1, 0}, {0, 1}, {-1, 0}, {1, 1}}, {0, 1, 0, 1});
  const ConversationGraph g = build_graph(conv, zero_speaker_params(2, {0, 1}), hp);

  const double l1 = 0.6065306597126334, intra2 = 0.6839397205857212, glob = 0.8535533905932737;
  const DenseMatrix expected(4, 4, {1.0, l1, intra2, glob,  //
                                    l1, 1.0, l1, glob,      //
                                    intra2, l1, 1.0, l1,    //
                                    glob, glob, l1, 1.0});
  CHECK(max_abs_diff(g.adjacency, expected) < 1e-15);

  CHECK(g.types(0, 2).contains(EdgeType::IntraSpeaker));
  CHECK_FALSE(g.types(0, 2).contains(EdgeType::LocalContextual));
  CHECK(g.types(1, 3).contains(EdgeType::GlobalContextual));
  CHECK(g.types(1, 3).contains(EdgeType::IntraSpeaker));
  CHECK(g.types(0, 0).contains(EdgeType::LocalContextual));
  // Pair (2,4) qualifies as intra-speaker (0.68394) but keeps the larger
  // global weight.
  CHECK(g.adjacency(1, 3) > intra2);
}

TEST_CASE("single utterance gives a lone self-loop") {
  const ConversationGraph g = build_graph(make_conversation({{1, 2}}, {0}), zero_speaker_params(2, {0}),
                                          HyperParams{});
  CHECK(g.adjacency == DenseMatrix(1, 1, {1.0}));
}

TEST_CASE("same speaker at distance one") {
  const ConversationGraph g = build_graph(make_conversation({{1, 0}, {0, 1}}, {3, 3}),
                                          ModelParams::materialize(2, 2, 1, 1), HyperParams{});
  CHECK(g.adjacency(0, 1) >= 0.8032653298563167);
}

TEST_CASE("tau_s = 2 disables global edges between distinct orthogonal nodes") {
  HyperParams hp;
  hp.tau_s = 2.0;
  const ConversationGraph g = build_graph(make_conversation({{1, 0}, {0, 1}, {0, -1}}, {0, 1, 2}),
                                          zero_speaker_params(2, {0, 1, 2}), hp);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) CHECK_FALSE(g.types(i, j).contains(EdgeType::GlobalContextual));
}

TEST_CASE("graph properties on random conversations") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> size(1, 12);
  std::uniform_int_distribution<int> window(0, 4);
  std::uniform_real_distribution<double> tau_s(0.0, 2.0), tau_e(0.5, 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    HyperParams hp;
    hp.window = window(rng);
    hp.tau_s = tau_s(rng);
    hp.tau_e = tau_e(rng);
    const auto conv = oracle::random_conversation(rng, size(rng), 5, 3);
    const ModelParams p = ModelParams::materialize(5, 2, 1, static_cast<std::uint64_t>(trial));
    const ConversationGraph g = build_graph(conv, p, hp);
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(g.adjacency(i, i) == 1.0);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(g.adjacency(i, j) == g.adjacency(j, i));
        CHECK(g.adjacency(i, j) >= 0.0);
        CHECK(g.adjacency(i, j) <= 1.0);
        CHECK((g.adjacency(i, j) > 0.0) == !g.types(i, j).empty());
        const std::size_t dist = i > j ? i - j : j - i;
        const double cosine = cosine_similarity(g.node_features.row(i), g.node_features.row(j));
        if (dist > static_cast<std::size_t>(hp.window) &&
            conv.utterances[i].speaker_id != conv.utterances[j].speaker_id && cosine + 1.0 <= hp.tau_s)
          CHECK(g.adjacency(i, j) == 0.0);
      }
    }
  }
}

TEST_CASE("local weight decays with distance") {
  for (double tau : {0.5, 2.0, 7.0})
    for (std::size_t d = 0; d < 20; ++d) CHECK(local_edge_weight(d + 1, tau) < local_edge_weight(d, tau));
}

TEST_CASE("adjacency matches the per-pair brute force") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> size(1, 10);
  for (int trial = 0; trial < 50; ++trial) {
    HyperParams hp;
    hp.window = trial % 4;
    hp.tau_s = 0.25 * (trial % 8);
    const auto conv = oracle::random_conversation(rng, size(rng), 4, 3);
    const ModelParams p = ModelParams::materialize(4, 2, 1, 5);
    const ConversationGraph g = build_graph(conv, p, hp);
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        const auto xi = g.node_features.row(i), xj = g.node_features.row(j);
        const auto e = oracle::pair_edge({xi.begin(), xi.end()}, {xj.begin(), xj.end()},
                                         static_cast<int>(i), static_cast<int>(j),
                                         conv.utterances[i].speaker_id, conv.utterances[j].speaker_id,
                                         hp.window, hp.tau_s, hp.tau_e);
        CHECK(g.adjacency(i, j) == e.weight);
        CHECK(g.types(i, j).contains(EdgeType::GlobalContextual) == e.global);
        CHECK(g.types(i, j).contains(EdgeType::LocalContextual) == e.local);
        CHECK(g.types(i, j).contains(EdgeType::IntraSpeaker) == e.intra);
      }
    }
  }
}
