#include "ecot/encoder.hpp"

#include <string>
#include <vector>

#include "ecot/error.hpp"

namespace ecot {

LayerOutput attention_layer(const DenseMatrix& h_in, const DenseMatrix& adjacency,
                            const AttentionLayerParams& layer) {
  const std::size_t n = h_in.rows();
  const std::size_t d = h_in.cols();
  if (adjacency.rows() != n || adjacency.cols() != n)
    throw ContractViolation("attention_layer: adjacency does not match node count");
  if (layer.projection.rows() != d || layer.projection.cols() != d || layer.scorer.size() != 2 * d)
    throw ContractViolation("attention_layer: layer params do not match feature width " +
                            std::to_string(d));

  const DenseMatrix z = matmul_transpose_b(h_in, layer.projection);
  const std::span<const double> a_src(layer.scorer.data(), d);
  const std::span<const double> a_dst(layer.scorer.data() + d, d);
  std::vector<double> src_score(n), dst_score(n);
  for (std::size_t i = 0; i < n; ++i) {
    src_score[i] = dot(a_src, z.row(i));
    dst_score[i] = dot(a_dst, z.row(i));
  }

  LayerOutput out{DenseMatrix(n, d), DenseMatrix(n, n)};
  std::vector<std::size_t> neighbours;
  std::vector<double> psi;
  for (std::size_t i = 0; i < n; ++i) {
    neighbours.clear();
    psi.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (adjacency(i, j) > 0.0) {
        neighbours.push_back(j);
        psi.push_back(leaky_relu(src_score[i] + dst_score[j]) * adjacency(i, j));
      }
    }
    if (neighbours.empty())
      throw ContractViolation("attention_layer: node " + std::to_string(i) + " has no neighbours");

    const std::vector<double> alpha = stable_softmax(psi);
    auto h_out = out.hidden.row(i);
    for (std::size_t k = 0; k < neighbours.size(); ++k) {
      const std::size_t j = neighbours[k];
      out.attention(i, j) = alpha[k];
      const auto zj = z.row(j);
      for (std::size_t c = 0; c < d; ++c) h_out[c] += alpha[k] * zj[c];
    }
  }
  return out;
}

EncoderOutput encode(const ConversationGraph& graph, const ModelParams& params, SemanticSpace space,
                     int layers) {
  if (layers < 1) throw ConfigError("encoder layer count must be >= 1");
  const auto& stack = params.encoder(space);
  if (static_cast<std::size_t>(layers) > stack.size()) {
    throw ConfigError("params hold " + std::to_string(stack.size()) + " encoder layers for space " +
                      space_key(space) + ", " + std::to_string(layers) + " requested");
  }

  EncoderOutput out{graph.node_features, DenseMatrix()};
  for (int l = 0; l < layers; ++l) {
    LayerOutput step = attention_layer(out.hidden, graph.adjacency, stack[l]);
    out.hidden = std::move(step.hidden);
    out.induced_adjacency = std::move(step.attention);
  }
  return out;
}

}  // namespace ecot
