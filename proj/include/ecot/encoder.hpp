#pragma once

#include "ecot/graph.hpp"
#include "ecot/matrix.hpp"
#include "ecot/params.hpp"

namespace ecot {

struct LayerOutput {
  DenseMatrix hidden;     // N x d_h
  DenseMatrix attention;  // N x N, row i is a distribution over N(i)
};

struct EncoderOutput {
  DenseMatrix hidden;            // H^(S)
  DenseMatrix induced_adjacency; // final-layer attention coefficients
};

// One graph-attention step over the neighbourhoods of `adjacency`:
//   z_j      = W h_j
//   psi_ij   = leaky_relu(a . [z_i || z_j], 0.2) * A_ij
//   alpha_ij = softmax_{j in N(i)} psi_ij
//   h'_i     = sum_j alpha_ij z_j
// N(i) = { j : A_ij > 0 }; the graph builder guarantees i in N(i).
LayerOutput attention_layer(const DenseMatrix& h_in, const DenseMatrix& adjacency,
                            const AttentionLayerParams& layer);

// Stacks `layers` attention steps of the requested space starting from the
// graph's node features. No activation between layers.
EncoderOutput encode(const ConversationGraph& graph, const ModelParams& params, SemanticSpace space,
                     int layers);

}  // namespace ecot
