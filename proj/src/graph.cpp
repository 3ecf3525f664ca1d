#include "ecot/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ecot/error.hpp"

namespace ecot {

const char* edge_type_name(EdgeType t) {
  switch (t) {
    case EdgeType::GlobalContextual: return "global";
    case EdgeType::LocalContextual: return "local";
    case EdgeType::IntraSpeaker: return "intra_speaker";
  }
  return "unknown";
}

double global_edge_weight(double cosine) { return (cosine + 1.0) / 2.0; }

double local_edge_weight(std::size_t distance, double tau_e) {
  return std::exp(-static_cast<double>(distance) / tau_e);
}

double intra_speaker_edge_weight(std::size_t distance, double tau_e) {
  return (local_edge_weight(distance, tau_e) + 1.0) / 2.0;
}

DenseMatrix build_node_features(const ConversationRecord& conv, const ModelParams& params) {
  const std::size_t d_u = params.d_u();
  const std::size_t d_s = params.d_s();
  DenseMatrix x(conv.size(), d_u + d_s);
  for (std::size_t i = 0; i < conv.size(); ++i) {
    const Utterance& u = conv.utterances[i];
    if (u.embedding.size() != d_u) {
      throw CorpusFormatError("conversation '" + conv.conversation_id + "': utterances[" +
                              std::to_string(i) + "].embedding: length " +
                              std::to_string(u.embedding.size()) + ", expected d_u=" +
                              std::to_string(d_u));
    }
    const std::vector<double> speaker = params.speaker_embedding(u.speaker_id);
    auto row = x.row(i);
    std::copy(u.embedding.begin(), u.embedding.end(), row.begin());
    std::copy(speaker.begin(), speaker.end(), row.begin() + static_cast<std::ptrdiff_t>(d_u));
  }
  return x;
}

EdgeSet build_edges(const DenseMatrix& features, std::span<const int> speakers,
                    const HyperParams& hp) {
  const std::size_t n = features.rows();
  if (speakers.size() != n) throw ContractViolation("build_edges: one speaker id per node required");

  EdgeSet out{DenseMatrix(n, n), std::vector<EdgeTypeSet>(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const std::size_t dist = j - i;
      EdgeTypeSet types;
      double weight = 0.0;

      const double cosine = cosine_similarity(features.row(i), features.row(j));
      if (cosine + 1.0 > hp.tau_s) {
        types.insert(EdgeType::GlobalContextual);
        weight = std::max(weight, global_edge_weight(cosine));
      }
      if (dist <= static_cast<std::size_t>(hp.window)) {
        types.insert(EdgeType::LocalContextual);
        weight = std::max(weight, local_edge_weight(dist, hp.tau_e));
      }
      if (i != j && speakers[i] == speakers[j]) {
        types.insert(EdgeType::IntraSpeaker);
        weight = std::max(weight, intra_speaker_edge_weight(dist, hp.tau_e));
      }

      out.adjacency(i, j) = out.adjacency(j, i) = weight;
      out.edge_types[i * n + j] = out.edge_types[j * n + i] = types;
    }
  }
  return out;
}

ConversationGraph build_graph(const ConversationRecord& conv, const ModelParams& params,
                              const HyperParams& hp) {
  DenseMatrix features = build_node_features(conv, params);
  const std::vector<int> speakers = conv.speakers();
  EdgeSet edges = build_edges(features, speakers, hp);
  return {std::move(features), std::move(edges.adjacency), std::move(edges.edge_types)};
}

}  // namespace ecot
