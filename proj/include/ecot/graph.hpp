#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ecot/hyperparams.hpp"
#include "ecot/matrix.hpp"
#include "ecot/params.hpp"
#include "ecot/types.hpp"

namespace ecot {

enum class EdgeType : std::uint8_t {
  GlobalContextual = 1 << 0,
  LocalContextual = 1 << 1,
  IntraSpeaker = 1 << 2,
};

// Small bit set over EdgeType. Empty means "no edge".
class EdgeTypeSet {
 public:
  constexpr EdgeTypeSet() = default;

  constexpr void insert(EdgeType t) { bits_ |= static_cast<std::uint8_t>(t); }
  constexpr bool contains(EdgeType t) const { return bits_ & static_cast<std::uint8_t>(t); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }

  friend constexpr bool operator==(EdgeTypeSet, EdgeTypeSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

inline constexpr EdgeType kAllEdgeTypes[] = {EdgeType::GlobalContextual, EdgeType::LocalContextual,
                                             EdgeType::IntraSpeaker};

const char* edge_type_name(EdgeType t);

struct EdgeSet {
  DenseMatrix adjacency;                // N x N, symmetric, entries in [0, 1]
  std::vector<EdgeTypeSet> edge_types;  // N x N row-major

  EdgeTypeSet types(std::size_t i, std::size_t j) const { return edge_types[i * adjacency.cols() + j]; }
};

struct ConversationGraph {
  DenseMatrix node_features;  // N x d_h, rows x_i = x_i^u ++ x^s_speaker(i)
  DenseMatrix adjacency;
  std::vector<EdgeTypeSet> edge_types;

  std::size_t size() const { return adjacency.rows(); }
  EdgeTypeSet types(std::size_t i, std::size_t j) const { return edge_types[i * size() + j]; }
  bool has_edge(std::size_t i, std::size_t j) const { return adjacency(i, j) > 0.0; }
};

// Per-type weights. Each is in (0, 1] on its qualifying domain.
double global_edge_weight(double cosine);
double local_edge_weight(std::size_t distance, double tau_e);
double intra_speaker_edge_weight(std::size_t distance, double tau_e);

DenseMatrix build_node_features(const ConversationRecord& conv, const ModelParams& params);

// A pair (i, j) gets every qualifying type tag; its weight is the maximum of
// the qualifying per-type weights. Self-loops come from the local condition
// at distance 0.
EdgeSet build_edges(const DenseMatrix& features, std::span<const int> speakers,
                    const HyperParams& hp);

ConversationGraph build_graph(const ConversationRecord& conv, const ModelParams& params,
                              const HyperParams& hp);

}  // namespace ecot
