#ifndef HDMF_TENSOR_HPP
#define HDMF_TENSOR_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace hdmf {

// Dense row-major matrix of 64-bit floats. This is the whole linear-algebra
// substrate: the model needs products, a column-broadcast bias add, tanh,
// and norms, nothing else. Summation orders are fixed so that fixed-seed
// training is bit-reproducible.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool same_shape(const DenseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool all_finite() const;

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// a * b. Per output cell the sum runs over k ascending, identical to the
// naive triple loop; the i-k-j arrangement only changes memory order.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

// a^T * b and a * b^T without materializing the transpose. Same k-ascending
// per-cell order as matmul(transpose(a), b) / matmul(a, transpose(b)).
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& m);

// m + b broadcast: bias has one entry per row (output unit), added across
// all columns (batch samples).
DenseMatrix add_bias(const DenseMatrix& m, std::span<const double> bias);

DenseMatrix tanh_map(const DenseMatrix& m);

double l2_norm(std::span<const double> v);
double frobenius_sq(const DenseMatrix& m);

// Elementwise helpers for backprop.
DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
void add_in_place(DenseMatrix& target, const DenseMatrix& delta);
void axpy(double alpha, const DenseMatrix& x, DenseMatrix& y);  // y += alpha * x
std::vector<double> row_sums(const DenseMatrix& m);

}  // namespace hdmf

#endif
