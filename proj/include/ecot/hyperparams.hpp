#pragma once

#include <cstddef>

namespace ecot {

struct HyperParams {
  int window = 5;            // local-edge temporal window W
  double tau_s = 0.5;        // global-edge similarity threshold on cos + 1
  double tau_e = 2.0;        // temporal decay constant
  double tau_r = 1.0;        // row-softmax temperature
  double alpha = 0.8;        // attribute vs structure trade-off
  double beta = 0.4;         // alignment vs local-score fusion weight
  double epsilon = 0.5;      // entropic regularization
  double lambda_ee = 0.2;
  double lambda_ce = 0.4;
  double lambda_ot = 1.0;
  int layers = 2;
  int outer_iters = 20;
  int sinkhorn_iters = 500;
  double sinkhorn_tol = 1e-7;
  double outer_tol = 1e-6;
  double decision_threshold = 0.5;

  static constexpr double kEpsilonFloor = 1e-4;

  // Throws ConfigError on the first violated constraint.
  void validate() const;
};

// Dimensions used when no params file overrides them.
inline constexpr std::size_t kDefaultSpeakerDim = 50;

}  // namespace ecot
