#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ecot {

// Row-major dense matrix of doubles. Conversations are short (N < 100) so
// everything in the pipeline stays dense.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return entries_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }

  const std::vector<double>& entries() const { return entries_; }
  std::vector<double>& entries() { return entries_; }

  bool all_finite() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

// Products and reductions below accumulate in row-major sequential order.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_transpose_b(const DenseMatrix& a, const DenseMatrix& b);  // a * b^T
DenseMatrix transpose(const DenseMatrix& m);
std::vector<double> matvec(const DenseMatrix& m, std::span<const double> v);
std::vector<double> row_sums(const DenseMatrix& m);
std::vector<double> col_sums(const DenseMatrix& m);
double frobenius_inner(const DenseMatrix& a, const DenseMatrix& b);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

double dot(std::span<const double> a, std::span<const double> b);

// Cosine of the angle between a and b, clamped to [-1, 1]. Returns 0 when
// either vector has zero norm.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Temperature softmax, max-shifted so large inputs do not overflow.
std::vector<double> stable_softmax(std::span<const double> v, double temperature = 1.0);

// log(sum(exp(v))), -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> v);

inline double leaky_relu(double x, double slope = 0.2) { return x > 0.0 ? x : slope * x; }

double sigmoid(double x);

}  // namespace ecot
