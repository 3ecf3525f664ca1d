#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ecot/matrix.hpp"

namespace ecot {

enum class SemanticSpace { Emotion, Cause };

inline const char* space_key(SemanticSpace s) { return s == SemanticSpace::Emotion ? "E" : "C"; }

struct AttentionLayerParams {
  DenseMatrix projection;       // d_h x d_h
  std::vector<double> scorer;   // 2 * d_h, applied to [W h_i || W h_j]
};

// Two-layer perceptron: out = W2 * leaky_relu(W1 * x + b1) + b2.
struct MlpParams {
  DenseMatrix w1;  // hidden x in
  std::vector<double> b1;
  DenseMatrix w2;  // out x hidden
  std::vector<double> b2;

  std::size_t input_dim() const { return w1.cols(); }
  std::size_t output_dim() const { return w2.rows(); }
  std::vector<double> forward(std::span<const double> x) const;
};

// Named tensor blocks as they appear in a params file. Vectors are stored as
// 1 x n matrices.
using TensorBlocks = std::map<std::string, DenseMatrix>;

class ModelParams {
 public:
  // Every block not present in `provided` is drawn from seeded_init with a
  // per-block seed derive_seed(seed, name). Provided blocks must match the
  // declared shapes; a mismatch throws CorpusFormatError.
  static ModelParams materialize(std::size_t d_u, std::size_t d_s, int layers, std::uint64_t seed,
                                 const TensorBlocks& provided = {});

  std::size_t d_u() const { return d_u_; }
  std::size_t d_s() const { return d_s_; }
  std::size_t d_h() const { return d_u_ + d_s_; }
  std::uint64_t seed() const { return seed_; }
  int layers() const { return static_cast<int>(encoders_[0].size()); }

  // Table entry if the params file supplied one, otherwise the seeded
  // embedding for block "speaker.<id>". Pure, so safe to call concurrently.
  std::vector<double> speaker_embedding(int speaker_id) const;

  const std::vector<AttentionLayerParams>& encoder(SemanticSpace s) const {
    return encoders_[s == SemanticSpace::Emotion ? 0 : 1];
  }
  const MlpParams& pair_mlp() const { return pair_mlp_; }
  const MlpParams& ee_mlp() const { return ee_mlp_; }
  const MlpParams& ce_mlp() const { return ce_mlp_; }

  // All materialized blocks under their file names, speakers included only
  // when they came from the file.
  TensorBlocks blocks() const;

  static std::string encoder_key(SemanticSpace s, int layer, const char* leaf);

 private:
  std::size_t d_u_ = 0;
  std::size_t d_s_ = 0;
  std::uint64_t seed_ = 0;
  std::map<int, std::vector<double>> speaker_table_;
  std::array<std::vector<AttentionLayerParams>, 2> encoders_;
  MlpParams pair_mlp_;
  MlpParams ee_mlp_;
  MlpParams ce_mlp_;
};

}  // namespace ecot
