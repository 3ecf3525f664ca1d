#include "ecot/hyperparams.hpp"

#include <cmath>
#include <string>

#include "ecot/error.hpp"

namespace ecot {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid hyperparameter: " + what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void HyperParams::validate() const {
  require(window >= 0, "window must be >= 0");
  require(finite(tau_s) && tau_s >= 0.0, "tau_s must be finite and >= 0");
  require(finite(tau_e) && tau_e > 0.0, "tau_e must be > 0");
  require(finite(tau_r) && tau_r > 0.0, "tau_r must be > 0");
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  require(beta >= 0.0 && beta <= 1.0, "beta must lie in [0, 1]");
  require(finite(epsilon) && epsilon >= kEpsilonFloor, "epsilon must be >= 1e-4");
  require(finite(lambda_ee) && lambda_ee >= 0.0, "lambda_ee must be >= 0");
  require(finite(lambda_ce) && lambda_ce >= 0.0, "lambda_ce must be >= 0");
  require(finite(lambda_ot) && lambda_ot >= 0.0, "lambda_ot must be >= 0");
  require(layers >= 1, "layers must be >= 1");
  require(outer_iters >= 1, "outer_iters must be >= 1");
  require(sinkhorn_iters >= 1, "sinkhorn_iters must be >= 1");
  require(finite(sinkhorn_tol) && sinkhorn_tol > 0.0, "sinkhorn_tol must be > 0");
  require(finite(outer_tol) && outer_tol >= 0.0, "outer_tol must be >= 0");
  require(decision_threshold > 0.0 && decision_threshold < 1.0,
          "decision_threshold must lie in (0, 1)");
}

}  // namespace ecot
