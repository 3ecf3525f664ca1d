#include "ecot/predict.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "ecot/error.hpp"

namespace ecot {

namespace {

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

std::vector<BinaryProbs> run_head(const DenseMatrix& h, const MlpParams& mlp, const char* name) {
  if (mlp.input_dim() != h.cols() || mlp.output_dim() != 2)
    throw ContractViolation(std::string(name) + ": head expects " + std::to_string(mlp.input_dim()) +
                            " inputs and 2 outputs, features have width " + std::to_string(h.cols()));
  std::vector<BinaryProbs> out;
  out.reserve(h.rows());
  for (std::size_t i = 0; i < h.rows(); ++i) {
    const std::vector<double> p = stable_softmax(mlp.forward(h.row(i)));
    out.push_back({p[0], p[1]});
  }
  return out;
}

double head_loss(const std::vector<BinaryProbs>& probs, const ConversationRecord& gold,
                 bool Utterance::*label) {
  if (probs.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const bool positive = gold.utterances[i].*label;
    total -= std::log(clamp_prob(probs[i][positive ? 1 : 0]));
  }
  return total / static_cast<double>(probs.size());
}

}  // namespace

DenseMatrix pair_score(const DenseMatrix& h_emotion, const DenseMatrix& h_cause,
                       const MlpParams& pair_mlp) {
  const std::size_t n = h_emotion.rows();
  const std::size_t d = h_emotion.cols();
  if (h_cause.rows() != n || h_cause.cols() != d)
    throw ContractViolation("pair_score: emotion and cause representations differ in shape");
  if (pair_mlp.input_dim() != 2 * d || pair_mlp.output_dim() != 1)
    throw ContractViolation("pair_score: scorer expects input width " +
                            std::to_string(pair_mlp.input_dim()) + ", pairs have width " +
                            std::to_string(2 * d));

  DenseMatrix s(n, n);
  std::vector<double> joined(2 * d);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(h_emotion.row(i).begin(), h_emotion.row(i).end(), joined.begin());
    for (std::size_t j = 0; j < n; ++j) {
      std::copy(h_cause.row(j).begin(), h_cause.row(j).end(),
                joined.begin() + static_cast<std::ptrdiff_t>(d));
      s(i, j) = sigmoid(pair_mlp.forward(joined)[0]);
    }
  }
  return s;
}

DenseMatrix fuse_scores(const DenseMatrix& sharpened, const DenseMatrix& local_scores, double beta) {
  if (sharpened.rows() != local_scores.rows() || sharpened.cols() != local_scores.cols())
    throw ContractViolation("fuse_scores: shape mismatch");
  if (beta < 0.0 || beta > 1.0) throw ContractViolation("fuse_scores: beta outside [0, 1]");
  DenseMatrix y(sharpened.rows(), sharpened.cols());
  for (std::size_t k = 0; k < y.entries().size(); ++k)
    y.entries()[k] = beta * sharpened.entries()[k] + (1.0 - beta) * local_scores.entries()[k];
  return y;
}

std::pair<std::vector<BinaryProbs>, std::vector<BinaryProbs>> ee_ce_heads(
    const DenseMatrix& h_emotion, const DenseMatrix& h_cause, const MlpParams& ee_mlp,
    const MlpParams& ce_mlp) {
  return {run_head(h_emotion, ee_mlp, "ee_head"), run_head(h_cause, ce_mlp, "ce_head")};
}

std::vector<UtterancePair> decide_pairs(const DenseMatrix& fused, double threshold) {
  std::vector<UtterancePair> out;
  for (std::size_t i = 0; i < fused.rows(); ++i)
    for (std::size_t j = 0; j < fused.cols(); ++j)
      if (fused(i, j) > threshold) out.push_back({static_cast<int>(i) + 1, static_cast<int>(j) + 1});
  return out;
}

PairPredictionSet predict_pairs(const DenseMatrix& h_emotion, const DenseMatrix& h_cause,
                                const DenseMatrix& sharpened, const ModelParams& params,
                                const HyperParams& hp) {
  PairPredictionSet out;
  out.local_scores = pair_score(h_emotion, h_cause, params.pair_mlp());
  out.fused = fuse_scores(sharpened, out.local_scores, hp.beta);
  out.decisions = decide_pairs(out.fused, hp.decision_threshold);
  std::tie(out.ee_probs, out.ce_probs) =
      ee_ce_heads(h_emotion, h_cause, params.ee_mlp(), params.ce_mlp());
  return out;
}

double binary_cross_entropy(double p, bool label) {
  const double q = clamp_prob(p);
  return label ? -std::log(q) : -std::log(1.0 - q);
}

double bernoulli_kl(double p, double q) {
  const double a = clamp_prob(p);
  const double b = clamp_prob(q);
  return a * std::log(a / b) + (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
}

LossReport losses(const PairPredictionSet& preds, const DenseMatrix& sharpened,
                  const ConversationRecord& gold, const HyperParams& hp) {
  const std::size_t n = gold.size();
  if (preds.fused.rows() != n || preds.fused.cols() != n || preds.local_scores.rows() != n ||
      sharpened.rows() != n || sharpened.cols() != n || preds.ee_probs.size() != n ||
      preds.ce_probs.size() != n)
    throw ContractViolation("losses: predictions do not match conversation '" +
                            gold.conversation_id + "'");

  DenseMatrix labels(n, n);
  for (const auto& p : gold.gold_pairs) labels(p.emotion - 1, p.cause - 1) = 1.0;

  LossReport r;
  if (n > 0) {
    double pair_total = 0.0;
    double ot_total = 0.0;
    for (std::size_t k = 0; k < n * n; ++k) {
      pair_total += binary_cross_entropy(preds.fused.entries()[k], labels.entries()[k] > 0.5);
      // Clamping can push a tiny KL below zero by rounding; the divergence is
      // nonnegative by definition.
      ot_total += std::max(0.0, bernoulli_kl(preds.local_scores.entries()[k], sharpened.entries()[k]));
    }
    const double pairs = static_cast<double>(n * n);
    r.l_pair = pair_total / pairs;
    r.l_ot = ot_total / pairs;
  }
  r.l_ee = head_loss(preds.ee_probs, gold, &Utterance::emotion_label);
  r.l_ce = head_loss(preds.ce_probs, gold, &Utterance::cause_label);
  r.l_ecpec = r.l_pair + hp.lambda_ot * r.l_ot;
  r.l_total = r.l_ecpec + hp.lambda_ee * r.l_ee + hp.lambda_ce * r.l_ce;
  return r;
}

}  // namespace ecot
