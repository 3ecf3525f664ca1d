#include "ecot/params.hpp"

#include "ecot/error.hpp"
#include "ecot/rng.hpp"

namespace ecot {

namespace {

std::string shape_str(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

class BlockSource {
 public:
  BlockSource(std::uint64_t seed, const TensorBlocks& provided) : seed_(seed), provided_(provided) {}

  DenseMatrix matrix(const std::string& name, std::size_t rows, std::size_t cols,
                     std::size_t fan_in) const {
    if (auto it = provided_.find(name); it != provided_.end()) {
      if (it->second.rows() != rows || it->second.cols() != cols) {
        throw CorpusFormatError("params block '" + name + "': expected shape " +
                                shape_str(rows, cols) + ", got " +
                                shape_str(it->second.rows(), it->second.cols()));
      }
      return it->second;
    }
    return seeded_init(rows, cols, derive_seed(seed_, name), fan_in);
  }

  std::vector<double> vector(const std::string& name, std::size_t n, std::size_t fan_in) const {
    return matrix(name, 1, n, fan_in).entries();
  }

 private:
  std::uint64_t seed_;
  const TensorBlocks& provided_;
};

MlpParams make_mlp(const BlockSource& src, const std::string& prefix, std::size_t in,
                   std::size_t hidden, std::size_t out) {
  MlpParams m;
  m.w1 = src.matrix(prefix + ".W1", hidden, in, in);
  m.b1 = src.vector(prefix + ".b1", hidden, in);
  m.w2 = src.matrix(prefix + ".W2", out, hidden, hidden);
  m.b2 = src.vector(prefix + ".b2", out, hidden);
  return m;
}

void put_vector(TensorBlocks& out, const std::string& name, const std::vector<double>& v) {
  out.emplace(name, DenseMatrix(1, v.size(), v));
}

void put_mlp(TensorBlocks& out, const std::string& prefix, const MlpParams& m) {
  out.emplace(prefix + ".W1", m.w1);
  put_vector(out, prefix + ".b1", m.b1);
  out.emplace(prefix + ".W2", m.w2);
  put_vector(out, prefix + ".b2", m.b2);
}

}  // namespace

std::vector<double> MlpParams::forward(std::span<const double> x) const {
  if (x.size() != input_dim()) {
    throw ContractViolation("mlp: input width " + std::to_string(x.size()) + ", expected " +
                            std::to_string(input_dim()));
  }
  std::vector<double> hidden = matvec(w1, x);
  for (std::size_t k = 0; k < hidden.size(); ++k) hidden[k] = leaky_relu(hidden[k] + b1[k]);
  std::vector<double> out = matvec(w2, hidden);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += b2[k];
  return out;
}

std::string ModelParams::encoder_key(SemanticSpace s, int layer, const char* leaf) {
  return std::string("encoder.") + space_key(s) + ".layer" + std::to_string(layer) + "." + leaf;
}

ModelParams ModelParams::materialize(std::size_t d_u, std::size_t d_s, int layers,
                                     std::uint64_t seed, const TensorBlocks& provided) {
  if (d_u == 0 || d_s == 0) throw ContractViolation("ModelParams: d_u and d_s must be positive");
  if (layers < 1) throw ConfigError("encoder layer count must be >= 1");

  ModelParams p;
  p.d_u_ = d_u;
  p.d_s_ = d_s;
  p.seed_ = seed;
  const std::size_t d_h = d_u + d_s;
  const BlockSource src(seed, provided);

  for (const auto& [name, block] : provided) {
    if (name.rfind("speaker.", 0) != 0) continue;
    int id = 0;
    try {
      std::size_t used = 0;
      id = std::stoi(name.substr(8), &used);
      if (used != name.size() - 8) throw std::invalid_argument(name);
    } catch (const std::exception&) {
      throw CorpusFormatError("params block '" + name + "': speaker id is not an integer");
    }
    if (block.rows() != 1 || block.cols() != d_s) {
      throw CorpusFormatError("params block '" + name + "': expected shape " + shape_str(1, d_s) +
                              ", got " + shape_str(block.rows(), block.cols()));
    }
    p.speaker_table_.emplace(id, block.entries());
  }

  for (SemanticSpace s : {SemanticSpace::Emotion, SemanticSpace::Cause}) {
    auto& stack = p.encoders_[s == SemanticSpace::Emotion ? 0 : 1];
    for (int l = 0; l < layers; ++l) {
      AttentionLayerParams layer;
      layer.projection = src.matrix(encoder_key(s, l, "W"), d_h, d_h, d_h);
      layer.scorer = src.vector(encoder_key(s, l, "a"), 2 * d_h, 2 * d_h);
      stack.push_back(std::move(layer));
    }
  }

  p.pair_mlp_ = make_mlp(src, "pair_mlp", 2 * d_h, d_h, 1);
  p.ee_mlp_ = make_mlp(src, "ee_mlp", d_h, d_h, 2);
  p.ce_mlp_ = make_mlp(src, "ce_mlp", d_h, d_h, 2);
  return p;
}

std::vector<double> ModelParams::speaker_embedding(int speaker_id) const {
  if (auto it = speaker_table_.find(speaker_id); it != speaker_table_.end()) return it->second;
  const std::string name = "speaker." + std::to_string(speaker_id);
  return seeded_init(1, d_s_, derive_seed(seed_, name)).entries();
}

TensorBlocks ModelParams::blocks() const {
  TensorBlocks out;
  for (const auto& [id, emb] : speaker_table_) put_vector(out, "speaker." + std::to_string(id), emb);
  for (SemanticSpace s : {SemanticSpace::Emotion, SemanticSpace::Cause}) {
    const auto& stack = encoder(s);
    for (int l = 0; l < static_cast<int>(stack.size()); ++l) {
      out.emplace(encoder_key(s, l, "W"), stack[l].projection);
      put_vector(out, encoder_key(s, l, "a"), stack[l].scorer);
    }
  }
  put_mlp(out, "pair_mlp", pair_mlp_);
  put_mlp(out, "ee_mlp", ee_mlp_);
  put_mlp(out, "ce_mlp", ce_mlp_);
  return out;
}

}  // namespace ecot
