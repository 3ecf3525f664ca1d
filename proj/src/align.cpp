#include "ecot/align.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ecot/error.hpp"

namespace ecot {

namespace {

void require_square(const DenseMatrix& m, std::size_t n, const char* what) {
  if (m.rows() != n || m.cols() != n)
    throw ContractViolation(std::string(what) + ": expected " + std::to_string(n) + "x" +
                            std::to_string(n) + " matrix");
}

}  // namespace

DenseMatrix attr_cost(const DenseMatrix& h_emotion, const DenseMatrix& h_cause) {
  if (h_emotion.rows() != h_cause.rows() || h_emotion.cols() != h_cause.cols())
    throw ContractViolation("attr_cost: emotion and cause representations differ in shape");
  const std::size_t n = h_emotion.rows();
  DenseMatrix c(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      c(i, j) = 1.0 - cosine_similarity(h_emotion.row(i), h_cause.row(j));
  return c;
}

DenseMatrix struct_cost_linearized(const DenseMatrix& a_emotion, const DenseMatrix& a_cause,
                                   const DenseMatrix& plan) {
  const std::size_t n = a_emotion.rows();
  require_square(a_emotion, n, "struct_cost_linearized(A_E)");
  require_square(a_cause, n, "struct_cost_linearized(A_C)");
  require_square(plan, n, "struct_cost_linearized(T)");

  const std::vector<double> t_row = row_sums(plan);
  const std::vector<double> t_col = col_sums(plan);

  std::vector<double> emotion_term(n, 0.0), cause_term(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      emotion_term[i] += a_emotion(i, k) * a_emotion(i, k) * t_row[k];
      cause_term[i] += a_cause(i, k) * a_cause(i, k) * t_col[k];
    }
  }

  const DenseMatrix cross = matmul_transpose_b(matmul(a_emotion, plan), a_cause);
  DenseMatrix c(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      c(i, j) = emotion_term[i] + cause_term[j] - 2.0 * cross(i, j);
  return c;
}

double struct_loss(const DenseMatrix& a_emotion, const DenseMatrix& a_cause,
                   const DenseMatrix& plan) {
  return frobenius_inner(struct_cost_linearized(a_emotion, a_cause, plan), plan);
}

double fused_objective(const DenseMatrix& c_attr, const DenseMatrix& a_emotion,
                       const DenseMatrix& a_cause, const DenseMatrix& plan, double alpha) {
  double value = alpha * frobenius_inner(c_attr, plan);
  if (alpha < 1.0) value += (1.0 - alpha) * struct_loss(a_emotion, a_cause, plan);
  return value;
}

SinkhornResult sinkhorn(const DenseMatrix& cost, double epsilon, int max_iters, double tol) {
  const std::size_t n = cost.rows();
  require_square(cost, n, "sinkhorn");
  if (!(epsilon > 0.0)) throw ContractViolation("sinkhorn: epsilon must be > 0");
  if (max_iters < 1) throw ContractViolation("sinkhorn: max_iters must be >= 1");
  if (!cost.all_finite()) throw ContractViolation("sinkhorn: cost matrix has non-finite entries");

  SinkhornResult out;
  if (n == 0) {
    out.converged = true;
    return out;
  }

  const double log_marginal = -std::log(static_cast<double>(n));
  const double marginal = 1.0 / static_cast<double>(n);
  DenseMatrix log_kernel(n, n);
  for (std::size_t k = 0; k < cost.entries().size(); ++k)
    log_kernel.entries()[k] = -cost.entries()[k] / epsilon;

  // Dual potentials f, g: T_ij = exp(f_i + g_j + logK_ij).
  std::vector<double> f(n, 0.0), g(n, 0.0), scratch(n);
  const auto build_plan = [&](DenseMatrix& plan) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) plan(i, j) = std::exp(f[i] + g[j] + log_kernel(i, j));
  };
  const auto marginal_error = [&](const DenseMatrix& plan) {
    double worst = 0.0;
    for (double s : row_sums(plan)) worst = std::max(worst, std::abs(s - marginal));
    for (double s : col_sums(plan)) worst = std::max(worst, std::abs(s - marginal));
    return worst;
  };

  out.plan = DenseMatrix(n, n);
  for (int it = 1; it <= max_iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) scratch[j] = log_kernel(i, j) + g[j];
      f[i] = log_marginal - log_sum_exp(scratch);
    }
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) scratch[i] = log_kernel(i, j) + f[i];
      g[j] = log_marginal - log_sum_exp(scratch);
    }
    out.iterations = it;
    build_plan(out.plan);
    out.marginal_error = marginal_error(out.plan);
    if (out.marginal_error < tol) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged) {
    out.plan = round_to_uniform_marginals(out.plan);
    out.rounded = true;
  }
  return out;
}

DenseMatrix round_to_uniform_marginals(const DenseMatrix& plan) {
  const std::size_t n = plan.rows();
  require_square(plan, n, "round_to_uniform_marginals");
  if (n == 0) return plan;
  const double m = 1.0 / static_cast<double>(n);
  DenseMatrix out = plan;
  const std::vector<double> rows = row_sums(out);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i] <= m) continue;
    const double scale = m / rows[i];
    for (double& x : out.row(i)) x *= scale;
  }
  const std::vector<double> cols = col_sums(out);
  for (std::size_t j = 0; j < n; ++j) {
    if (cols[j] <= m) continue;
    const double scale = m / cols[j];
    for (std::size_t i = 0; i < n; ++i) out(i, j) *= scale;
  }
  std::vector<double> err_r = row_sums(out), err_c = col_sums(out);
  double mass = 0.0;
  for (double& e : err_r) {
    e = std::max(m - e, 0.0);
    mass += e;
  }
  for (double& e : err_c) e = std::max(m - e, 0.0);
  if (mass > 0.0)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += err_r[i] * err_c[j] / mass;
  return out;
}

DenseMatrix row_softmax(const DenseMatrix& plan, double temperature) {
  DenseMatrix out(plan.rows(), plan.cols());
  for (std::size_t i = 0; i < plan.rows(); ++i) {
    const std::vector<double> p = stable_softmax(plan.row(i), temperature);
    std::copy(p.begin(), p.end(), out.row(i).begin());
  }
  return out;
}

DenseMatrix uniform_plan(std::size_t n) {
  const double mass = n == 0 ? 0.0 : 1.0 / static_cast<double>(n * n);
  return DenseMatrix(n, n, mass);
}

TransportPlan fgw_align(const DenseMatrix& h_emotion, const DenseMatrix& h_cause,
                        const DenseMatrix& a_emotion, const DenseMatrix& a_cause,
                        const HyperParams& hp) {
  const std::size_t n = h_emotion.rows();
  require_square(a_emotion, n, "fgw_align(A_E)");
  require_square(a_cause, n, "fgw_align(A_C)");
  if (hp.alpha < 0.0 || hp.alpha > 1.0) throw ContractViolation("fgw_align: alpha outside [0, 1]");

  const DenseMatrix c_attr = attr_cost(h_emotion, h_cause);

  TransportPlan result;
  result.plan = uniform_plan(n);
  double current = fused_objective(c_attr, a_emotion, a_cause, result.plan, hp.alpha);
  result.objective_trace.push_back(current);

  for (int t = 0; t < hp.outer_iters; ++t) {
    DenseMatrix cost = c_attr;
    if (hp.alpha < 1.0) {
      const DenseMatrix c_struct = struct_cost_linearized(a_emotion, a_cause, result.plan);
      for (std::size_t k = 0; k < cost.entries().size(); ++k)
        cost.entries()[k] = hp.alpha * c_attr.entries()[k] + (1.0 - hp.alpha) * c_struct.entries()[k];
    }

    SinkhornResult step = sinkhorn(cost, hp.epsilon, hp.sinkhorn_iters, hp.sinkhorn_tol);
    const double next = fused_objective(c_attr, a_emotion, a_cause, step.plan, hp.alpha);
    if (next > current) break;

    result.plan = std::move(step.plan);
    result.objective_trace.push_back(next);
    ++result.iterations_used;
    const double change = current - next;
    current = next;
    if (change < hp.outer_tol) break;
  }

  result.sharpened = row_softmax(result.plan, hp.tau_r);
  return result;
}

}  // namespace ecot
