#pragma once

#include <array>
#include <utility>
#include <vector>

#include "ecot/hyperparams.hpp"
#include "ecot/matrix.hpp"
#include "ecot/params.hpp"
#include "ecot/types.hpp"

namespace ecot {

// [P(negative), P(positive)] for one utterance.
using BinaryProbs = std::array<double, 2>;

inline bool is_positive(const BinaryProbs& p) { return p[1] > 0.5; }

struct PairPredictionSet {
  DenseMatrix local_scores;  // s_ij
  DenseMatrix fused;         // y_hat_ij
  std::vector<UtterancePair> decisions;  // 1-based, sorted
  std::vector<BinaryProbs> ee_probs;
  std::vector<BinaryProbs> ce_probs;
};

struct LossReport {
  double l_pair = 0.0;
  double l_ot = 0.0;
  double l_ee = 0.0;
  double l_ce = 0.0;
  double l_ecpec = 0.0;
  double l_total = 0.0;
};

inline constexpr double kProbClamp = 1e-7;

// s_ij = sigmoid(mlp([H_E_i || H_C_j])) over all ordered pairs.
DenseMatrix pair_score(const DenseMatrix& h_emotion, const DenseMatrix& h_cause,
                       const MlpParams& pair_mlp);

DenseMatrix fuse_scores(const DenseMatrix& sharpened, const DenseMatrix& local_scores, double beta);

// Per-utterance softmax heads for emotion presence (on H_E) and cause
// presence (on H_C).
std::pair<std::vector<BinaryProbs>, std::vector<BinaryProbs>> ee_ce_heads(
    const DenseMatrix& h_emotion, const DenseMatrix& h_cause, const MlpParams& ee_mlp,
    const MlpParams& ce_mlp);

// Pairs (i+1, j+1) with fused(i, j) > threshold, in row-major order.
std::vector<UtterancePair> decide_pairs(const DenseMatrix& fused, double threshold);

PairPredictionSet predict_pairs(const DenseMatrix& h_emotion, const DenseMatrix& h_cause,
                                const DenseMatrix& sharpened, const ModelParams& params,
                                const HyperParams& hp);

// Bernoulli helpers on clamped probabilities.
double binary_cross_entropy(double p, bool label);
double bernoulli_kl(double p, double q);

// Mean BCE over all ordered pairs, mean Bernoulli KL(s || T~), mean 2-class
// cross entropy per head, combined with the hp loss weights.
LossReport losses(const PairPredictionSet& preds, const DenseMatrix& sharpened,
                  const ConversationRecord& gold, const HyperParams& hp);

}  // namespace ecot
