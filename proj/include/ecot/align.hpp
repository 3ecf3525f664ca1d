#pragma once

#include <vector>

#include "ecot/hyperparams.hpp"
#include "ecot/matrix.hpp"

namespace ecot {

struct TransportPlan {
  DenseMatrix plan;            // T, uniform 1/N marginals, total mass 1
  DenseMatrix sharpened;       // row softmax of T / tau_r
  std::vector<double> objective_trace;  // exact objective, starting at T^(0)
  int iterations_used = 0;     // accepted outer steps
};

struct SinkhornResult {
  DenseMatrix plan;
  int iterations = 0;
  bool converged = false;
  bool rounded = false;         // cap reached; plan was projected onto the marginals
  double marginal_error = 0.0;  // max-norm residual of the last scaling sweep
};

// C_attr(i, j) = 1 - cos(h_E_i, h_C_j).
DenseMatrix attr_cost(const DenseMatrix& h_emotion, const DenseMatrix& h_cause);

// C(i, j) = sum_{k,l} (A_E(i,k) - A_C(j,l))^2 T(k,l), evaluated through the
// square-loss expansion
//   (A_E o A_E) T 1 1^T + 1 1^T T^T (A_C o A_C)^T - 2 A_E T A_C^T
// in O(N^3).
DenseMatrix struct_cost_linearized(const DenseMatrix& a_emotion, const DenseMatrix& a_cause,
                                   const DenseMatrix& plan);

// sum_{i,j,k,l} (A_E(i,k) - A_C(j,l))^2 T(i,j) T(k,l) = <C_struct(T), T>.
double struct_loss(const DenseMatrix& a_emotion, const DenseMatrix& a_cause,
                   const DenseMatrix& plan);

// alpha <C_attr, T> + (1 - alpha) L_struct(T).
double fused_objective(const DenseMatrix& c_attr, const DenseMatrix& a_emotion,
                       const DenseMatrix& a_cause, const DenseMatrix& plan, double alpha);

// Entropic OT with uniform marginals (1/N rows, 1/N columns), solved by
// alternating dual updates in the log domain. Stops once both marginal
// residuals are below `tol` or after `max_iters` sweeps. A plan still off
// its marginals at the cap goes through round_to_uniform_marginals.
SinkhornResult sinkhorn(const DenseMatrix& cost, double epsilon, int max_iters, double tol);

// Projects a nonnegative matrix onto the plans with 1/N row and column sums
// (Altschuler, Weed and Rigollet, 2017): shrink overfull rows, then overfull
// columns, then add the rank-one correction err_r err_c^T / |err_r|_1. The l1
// change is at most twice the l1 marginal residual of the input.
DenseMatrix round_to_uniform_marginals(const DenseMatrix& plan);

// Row-wise softmax of T / temperature over all columns.
DenseMatrix row_softmax(const DenseMatrix& plan, double temperature);

DenseMatrix uniform_plan(std::size_t n);

// Fused Gromov-Wasserstein alignment by iterative linearization. From the
// uniform plan, each outer step builds alpha C_attr + (1 - alpha) C_struct(T),
// solves it with sinkhorn, and scores the exact objective. A step that raises
// the objective is discarded and the loop ends; otherwise the loop ends when
// the objective changes by less than outer_tol.
TransportPlan fgw_align(const DenseMatrix& h_emotion, const DenseMatrix& h_cause,
                        const DenseMatrix& a_emotion, const DenseMatrix& a_cause,
                        const HyperParams& hp);

}  // namespace ecot
